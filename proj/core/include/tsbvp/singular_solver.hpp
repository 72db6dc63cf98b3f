#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tsbvp/error.hpp"
#include "tsbvp/regular_solver.hpp"
#include "tsbvp/transforms.hpp"

namespace tsbvp {

/// u^{ΔΔ}(ρ(t)) + f(t, u(t)) = 0 with f singular at x = 0, u^Δ(0) = 0,
/// u(T) = g(T). `c` is the level with f(t, c) <= 0 and `delta` the width of
/// the terminal window on which f is positive below c/2.
struct SingularProblem {
  Rhs f;
  double gT = 0.0;
  double c = 1.0;
  double delta = 0.5;
  GridTimeScale grid;

  /// Requires 0 < gT <= c and 0 < delta < horizon.
  void validate() const;
};

enum class ConditionStatus { kPass, kFail, kUncheckable };

std::string_view to_string(ConditionStatus status);

/// A probe that supports or violates a condition.
struct Witness {
  double t = 0.0;
  double x = 0.0;
  std::optional<double> value;  // empty when the evaluation faulted
  std::string note;
};

struct ConditionResult {
  char id = 'A';
  ConditionStatus status = ConditionStatus::kUncheckable;
  // Set when the verdict rests on a finite probe sequence standing in for a
  // limit; such passes are evidence, not proof.
  bool numeric_proxy = false;
  std::string summary;
  std::vector<Witness> witnesses;
};

/// Conditions A through G, each present exactly once, in order.
struct ConditionsReport {
  std::array<ConditionResult, 7> conditions;

  const ConditionResult& get(char id) const;
  /// D, E and F all pass: the preconditions of the regularization pipeline.
  bool pipeline_ready() const;
};

struct ConditionProbes {
  int probes = 16;                 // x samples in (0, c/2) for condition E
  double blowup_threshold = 1e6;   // C/F proxy threshold on f(t, 2^-j)
  int blowup_depth = 40;           // j = 1..blowup_depth
  int continuity_pairs = 32;
};

ConditionsReport check_conditions(const SingularProblem& problem,
                                  const ConditionProbes& probes = {});

/// u >= ε on grid ∩ (0, T - δ) and u >= (ε/δ)(T - t) on grid ∩ (T - δ, T).
struct BarrierCheck {
  double epsilon = 0.0;
  double delta = 0.0;
  bool passed = false;
  // Largest ε for which the check passes, found by bisection to 1e-6
  // relative accuracy (from below).
  double epsilon_star = 0.0;
  std::vector<std::size_t> violations;
};

BarrierCheck barrier_check(const GridFunction& u, double epsilon, double delta);

struct SingularOptions {
  double k0 = 2.0;
  double tol_limit = 1e-6;
  int max_stages = 16;
  // ε for the barrier certificate; ε* is used when unset.
  std::optional<double> barrier_epsilon;
  bool shooting_fallback = true;

  void validate() const;
};

struct StageResult {
  double k = 0.0;
  SolveReport report;
  // sup|u_k - u_{k_prev}|; empty for the first stage.
  std::optional<double> gap;
  // Why Picard was abandoned for shooting; empty when Picard converged.
  std::string fallback_reason;
};

/// Residual of the unregularized equation, restricted to grid points with
/// u >= floor (where f_k coincides with f). Boundary terms always count.
struct SingularResidual {
  double value = 0.0;
  double floor = 0.0;
  std::size_t points_used = 0;
  std::size_t points_excluded = 0;
};

SingularResidual singular_residual(const GridFunction& u,
                                   const SingularProblem& problem,
                                   double floor);

struct SingularRun {
  std::vector<double> k_schedule;
  std::vector<StageResult> stages;
  std::vector<double> gap_trace;
  double stabilization_gap = 0.0;
  std::optional<BarrierCheck> barrier;
  std::optional<SingularResidual> residual;

  /// Solution of the last completed stage.
  const GridFunction& limit() const;
};

class StageError : public Error {
 public:
  StageError(const std::string& what, SingularRun partial)
      : Error(what), partial_(std::move(partial)) {}
  const SingularRun& partial() const noexcept { return partial_; }

 private:
  SingularRun partial_;
};

class NonStabilizationError : public Error {
 public:
  NonStabilizationError(const std::string& what, SingularRun partial)
      : Error(what), partial_(std::move(partial)) {}
  const std::vector<double>& gaps() const noexcept { return partial_.gap_trace; }
  const SingularRun& partial() const noexcept { return partial_; }

 private:
  SingularRun partial_;
};

/// Solves the regularized problems for k = k0·2^j with barriers α = 0,
/// β = c (Picard, then shooting if Picard stalls) until successive solutions
/// differ by less than tol_limit in sup norm.
SingularRun solve_singular(const SingularProblem& problem,
                           const SolverConfig& config,
                           const SingularOptions& options = {});

struct PostCheck {
  bool positive = false;  // u > 0 at every point except possibly T
  bool bounded = false;   // u <= c + 1e-8 everywhere
  bool above_boundary_value = false;  // g(T) < u(0)
  std::optional<std::size_t> positivity_witness;
  std::optional<std::size_t> bound_witness;

  bool passed() const noexcept {
    return positive && bounded && above_boundary_value;
  }
};

PostCheck post_check(const GridFunction& u, const SingularProblem& problem);
PostCheck post_check(const SingularRun& run, const SingularProblem& problem);

}  // namespace tsbvp
