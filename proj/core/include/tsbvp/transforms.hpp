#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "tsbvp/calculus.hpp"
#include "tsbvp/timescale.hpp"

namespace tsbvp {

/// Right-hand side x ↦ f(t, x) of the dynamic equation. `domain_floor`, when
/// present, marks the left end of the domain (the state value at which the
/// function is singular). Evaluators must be reentrant.
struct Rhs {
  std::function<double(double t, double x)> eval;
  std::optional<double> domain_floor;

  double operator()(double t, double x) const { return eval(t, x); }
};

/// Evaluates `h(t, x)` and throws EvaluationError if the result is not finite.
double evaluate_checked(const Rhs& h, double t, double x);

/// Lower and upper barriers alpha <= beta on a common grid.
class BarrierPair {
 public:
  BarrierPair(GridFunction alpha, GridFunction beta);

  const GridFunction& alpha() const noexcept { return alpha_; }
  const GridFunction& beta() const noexcept { return beta_; }
  const GridTimeScale& grid() const noexcept { return alpha_.grid(); }

 private:
  GridFunction alpha_;
  GridFunction beta_;
};

/// u^{ΔΔ}(ρ(t)) + h(t, u(t)) = 0 on the interior, u^Δ(0) = 0, u(T) = gT.
struct RegularProblem {
  Rhs h;
  double gT = 0.0;
  GridTimeScale grid;

  void validate() const;
};

/// Bounded continuous modification of `h` outside the barrier band:
///   h(t, β) - (x - β)/(x - β + 1)   for x > β(t)
///   h(t, x)                         for α(t) <= x <= β(t)
///   h(t, α) + (α - x)/(α - x + 1)   for x < α(t)
/// The returned function may only be evaluated at grid points; any other t
/// raises LookupError.
Rhs truncate(const Rhs& h, const BarrierPair& barriers);

/// The regular problem with `h` replaced by its truncation.
RegularProblem auxiliary_problem(const RegularProblem& problem,
                                 const BarrierPair& barriers);

/// 1 + max |h(t, x)| over grid t and `samples_per_band` equispaced x in
/// [α(t), β(t)] (endpoints included). Bounds the truncation wherever the band
/// sampling resolves h.
double bound_M(const Rhs& h, const BarrierPair& barriers,
               int samples_per_band = 64);

/// f_k(t, x) = f(t, |x|) for |x| >= 1/k and f(t, 1/k) otherwise. Total on ℝ.
Rhs regularize(const Rhs& f, double k);

/// One inequality of a lower/upper solution certificate.
struct InequalityCheck {
  std::size_t index = 0;
  double t = 0.0;
  double value = 0.0;  // left-hand side of the inequality
  bool ok = false;
};

enum class BarrierKind { kLower, kUpper };

/// Pointwise record of the lower/upper solution inequalities.
struct BarrierCertificate {
  BarrierKind kind = BarrierKind::kLower;
  double tol = 0.0;
  // x^{ΔΔ}(ρ(t_i)) + h(t_i, x(t_i)) for each interior i.
  std::vector<InequalityCheck> interior;
  // x^Δ(0).
  InequalityCheck start_slope;
  // x(T) - g(T).
  InequalityCheck terminal;
  bool passed = false;
  std::vector<std::string> violations;
};

inline constexpr double kDefaultVerifyTol = 1e-9;

/// alpha^{ΔΔ}(ρ(t)) + h(t, α) >= -tol, α^Δ(0) >= -tol, α(T) <= gT + tol.
BarrierCertificate verify_lower(const GridFunction& alpha,
                                const RegularProblem& problem,
                                double tol = kDefaultVerifyTol);

/// beta^{ΔΔ}(ρ(t)) + h(t, β) <= tol, β^Δ(0) <= tol, β(T) >= gT - tol.
BarrierCertificate verify_upper(const GridFunction& beta,
                                const RegularProblem& problem,
                                double tol = kDefaultVerifyTol);

/// Result of the continuity spot check. Findings are warnings only.
struct ContinuityReport {
  std::size_t pairs_checked = 0;
  std::vector<std::string> warnings;
  bool suspicious() const noexcept { return !warnings.empty(); }
};

/// Samples `pairs_per_point` random x in [x_lo, x_hi] at every grid point and
/// compares h(t, x) with h(t, x + η) for a tiny relative η. A jump larger
/// than 1e-4 (1 + |h|) is reported. Deterministic for a given seed.
ContinuityReport spot_check_continuity(const Rhs& h, const GridTimeScale& grid,
                                       double x_lo, double x_hi,
                                       int pairs_per_point = 32,
                                       std::uint64_t seed = 0x7462'7670ULL);

}  // namespace tsbvp
