#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "tsbvp/calculus.hpp"
#include "tsbvp/transforms.hpp"

namespace tsbvp {

struct SolverConfig {
  double tol_fixpoint = 1e-12;  // sup-norm change that ends Picard iteration
  int max_iter = 10000;
  double relaxation = 0.5;  // λ in u ← (1 - λ) u + λ T u
  double shooting_tol = 1e-12;  // accepted |u_s(T) - g(T)|
  int shooting_max_bisections = 200;
  double bracket_pad = 1.0;

  void validate() const;
};

enum class Method { kPicard, kShooting };

std::string_view to_string(Method method);

/// Residual of a candidate solution, split by constraint.
struct ResidualBreakdown {
  // |u^{ΔΔ}(ρ(t_i)) + h(t_i, u_i)| for every index; zero at 0 and N.
  std::vector<double> pointwise;
  double equation = 0.0;     // max over interior points
  double start_slope = 0.0;  // |u^Δ(0)|
  double terminal = 0.0;     // |u(T) - g(T)|

  double sup() const noexcept;
};

struct SolveReport {
  GridFunction solution;
  double residual_sup = 0.0;
  ResidualBreakdown residual_parts;
  int iterations = 0;
  Method method = Method::kPicard;
  // Picard: λ·sup|Tu - u| per step. Shooting: |u_s(T) - g(T)| per bisection.
  std::vector<double> trace;
  // |g(T)| + M T² and the α - 1e-8 <= u <= β + 1e-8 check; present only when
  // the solve was given barriers.
  std::optional<double> ball_bound;
  std::optional<bool> enclosure_ok;
  // Initial value u(0) = s found by shooting.
  std::optional<double> shooting_value;
};

inline constexpr double kEnclosureSlack = 1e-8;

/// (Tu)(t_i) = g(T) + Σ_{j=i}^{N-1} μ_j Σ_{m<j} μ_m h(σ(t_m), u(σ(t_m))).
///
/// The inner integrand is read at the forward jump so that on scattered
/// points a fixed point satisfies u^{ΔΔ}(ρ(t_i)) + h(t_i, u(t_i)) = 0 at every
/// interior t_i; on dense parts of the scale this is the usual double
/// integral. By construction (Tu)(T) = g(T) and (Tu)^Δ(0) = 0 exactly.
GridFunction apply_integral_operator(const GridFunction& u, const Rhs& h,
                                     double gT);

ResidualBreakdown residual_breakdown(const GridFunction& u,
                                     const RegularProblem& problem);
double residual(const GridFunction& u, const RegularProblem& problem);

/// Damped Picard iteration from u₀ = (α + β)/2. `problem.h` should already be
/// truncated to the barriers (see auxiliary_problem). Throws
/// NonConvergenceError after max_iter updates.
SolveReport picard_solve(const RegularProblem& problem,
                         const BarrierPair& barriers,
                         const SolverConfig& config);

/// Picard iteration without barriers, starting from u₀ ≡ g(T).
SolveReport picard_solve(const RegularProblem& problem,
                         const SolverConfig& config);

struct Bracket {
  double lo;
  double hi;
};

/// Marches u(t_0) = u(t_1) = s and
///   u_{i+1} = u_i + μ_i [(u_i - u_{i-1})/μ_{i-1} - μ_{i-1} h(t_i, u_i)].
GridFunction shoot(const RegularProblem& problem, double s);

/// Bisection on R(s) = u_s(T) - g(T) starting from `bracket`, widened
/// geometrically up to 8 times when R has no sign change.
SolveReport shooting_solve(const RegularProblem& problem,
                           const SolverConfig& config, Bracket bracket);

/// Shooting with the bracket [α(0) - pad, β(0) + pad]; also fills the ball
/// bound and enclosure fields.
SolveReport shooting_solve(const RegularProblem& problem,
                           const BarrierPair& barriers,
                           const SolverConfig& config);

/// Constants linking the residual and the fixed-point defect on a grid:
/// residual(u) <= ε implies sup|u - Tu| <= residual_to_defect · ε and
/// sup|u - Tu| <= ε implies residual(u) <= defect_to_residual · ε.
struct EquivalenceConstants {
  double residual_to_defect;
  double defect_to_residual;
};

EquivalenceConstants equivalence_constants(const GridTimeScale& grid);

bool encloses(const BarrierPair& barriers, const GridFunction& u,
              double slack = kEnclosureSlack);

double sup_distance(const GridFunction& a, const GridFunction& b);

}  // namespace tsbvp
