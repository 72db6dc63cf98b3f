#include "tsbvp/singular_solver.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace tsbvp {
namespace {

constexpr std::size_t kMaxWitnesses = 8;

std::string fmt_double(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

void add_witness(ConditionResult& result, Witness w) {
  if (result.witnesses.size() < kMaxWitnesses) {
    result.witnesses.push_back(std::move(w));
  }
}

// f(t, x) or the fault message.
struct Probe {
  std::optional<double> value;
  std::string fault;
};

Probe probe(const Rhs& f, double t, double x) {
  try {
    const double v = f(t, x);
    if (!std::isfinite(v)) return {std::nullopt, "non-finite value"};
    return {v, {}};
  } catch (const Error& e) {
    return {std::nullopt, e.what()};
  }
}

ConditionResult check_structural_domain(const SingularProblem& problem) {
  ConditionResult r{'A', ConditionStatus::kPass, false, {}, {}};
  if (problem.f.domain_floor && *problem.f.domain_floor == 0.0) {
    r.summary = "domain is [0, inf) with the singular edge at x = 0";
  } else {
    r.status = ConditionStatus::kFail;
    r.summary = "right-hand side is not declared with domain floor 0";
  }
  return r;
}

ConditionResult check_continuity(const SingularProblem& problem,
                                  const ConditionProbes& probes) {
  ConditionResult r{'B', ConditionStatus::kPass, true, {}, {}};
  const ContinuityReport report =
      spot_check_continuity(problem.f, problem.grid, problem.c / 64.0,
                            problem.c, probes.continuity_pairs);
  if (report.suspicious()) {
    r.status = ConditionStatus::kUncheckable;
    r.summary = std::to_string(report.warnings.size()) + " of " +
                std::to_string(report.pairs_checked) +
                " probe pairs look discontinuous (warning only): " +
                report.warnings.front();
  } else {
    r.summary = "no jumps across " + std::to_string(report.pairs_checked) +
                " probe pairs in [c/64, c]";
  }
  return r;
}

// Conditions C and F share the probe sequence x_j = 2^-j.
void check_blowup(const SingularProblem& problem, const ConditionProbes& probes,
                  ConditionResult& c_result, ConditionResult& f_result) {
  c_result = {'C', ConditionStatus::kPass, true, {}, {}};
  f_result = {'F', ConditionStatus::kPass, true, {}, {}};
  const GridTimeScale& grid = problem.grid;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double t = grid[i];
    double peak = 0.0;
    bool faulted = false;
    bool increasing = true;
    std::optional<double> previous;
    Witness f_witness;
    for (int j = 1; j <= probes.blowup_depth; ++j) {
      const double x = std::ldexp(1.0, -j);
      const Probe p = probe(problem.f, t, x);
      if (!p.value) {
        faulted = true;
        f_witness = {t, x, std::nullopt, "evaluation fault: " + p.fault};
        break;
      }
      peak = std::max(peak, std::abs(*p.value));
      if (previous && !(*p.value > *previous)) {
        if (increasing) {
          f_witness = {t, x, *p.value, "f(t, 2^-j) not increasing in j"};
        }
        increasing = false;
      }
      previous = p.value;
    }

    // C: an evaluation fault near 0 or a large probe both count as evidence.
    if (!faulted && peak < probes.blowup_threshold) {
      c_result.status = ConditionStatus::kFail;
      add_witness(c_result,
                  {t, std::ldexp(1.0, -probes.blowup_depth), peak,
                   "|f| stays below " + fmt_double(probes.blowup_threshold)});
    }

    if (faulted) {
      if (f_result.status == ConditionStatus::kPass) {
        f_result.status = ConditionStatus::kUncheckable;
      }
      add_witness(f_result, f_witness);
    } else if (!increasing || *previous < probes.blowup_threshold) {
      f_result.status = ConditionStatus::kFail;
      if (increasing) {
        f_witness = {t, std::ldexp(1.0, -probes.blowup_depth), previous,
                     "f(t, 2^-j) stays below " +
                         fmt_double(probes.blowup_threshold)};
      }
      add_witness(f_result, f_witness);
    }
  }
  const std::string depth = std::to_string(probes.blowup_depth);
  c_result.summary =
      c_result.status == ConditionStatus::kPass
          ? "pass (numeric proxy): |f(t, 2^-j)| reaches the threshold or "
            "faults for j <= " + depth + " at every grid point"
          : "|f(t, 2^-j)| stays bounded along j = 1.." + depth;
  switch (f_result.status) {
    case ConditionStatus::kPass:
      f_result.summary = "pass (numeric proxy): f(t, 2^-j) increases past " +
                         fmt_double(probes.blowup_threshold) +
                         " along j = 1.." + depth;
      break;
    case ConditionStatus::kFail:
      f_result.summary = "f(t, x) does not grow without bound as x -> 0+";
      break;
    case ConditionStatus::kUncheckable:
      f_result.summary = "probe evaluation faulted before the limit could be "
                         "observed";
      break;
  }
}

ConditionResult check_upper_level(const SingularProblem& problem) {
  ConditionResult r{'D', ConditionStatus::kPass, false, {}, {}};
  for (std::size_t i = 0; i < problem.grid.size(); ++i) {
    const double t = problem.grid[i];
    const Probe p = probe(problem.f, t, problem.c);
    if (!p.value || *p.value > 0.0) {
      r.status = ConditionStatus::kFail;
      add_witness(r, {t, problem.c, p.value,
                      p.value ? "f(t, c) > 0" : "evaluation fault: " + p.fault});
    }
  }
  r.summary = r.status == ConditionStatus::kPass
                  ? "f(t, c) <= 0 at every grid point"
                  : "f(t, c) > 0 somewhere";
  return r;
}

ConditionResult check_terminal_positivity(const SingularProblem& problem,
                                          const ConditionProbes& probes) {
  ConditionResult r{'E', ConditionStatus::kPass, false, {}, {}};
  const double horizon = problem.grid.horizon();
  std::size_t checked = 0;
  for (std::size_t i = 0; i < problem.grid.size(); ++i) {
    const double t = problem.grid[i];
    if (!(t > horizon - problem.delta && t < horizon)) continue;
    for (int m = 1; m <= probes.probes; ++m) {
      const double x = 0.5 * problem.c * m / (probes.probes + 1);
      ++checked;
      const Probe p = probe(problem.f, t, x);
      if (!p.value || !(*p.value > 0.0)) {
        r.status = ConditionStatus::kFail;
        add_witness(r, {t, x, p.value,
                        p.value ? "f(t, x) <= 0" : "evaluation fault: " + p.fault});
      }
    }
  }
  if (r.status == ConditionStatus::kPass) {
    r.summary = checked == 0 ? "no grid points in (T - delta, T); holds vacuously"
                             : "f(t, x) > 0 on " + std::to_string(checked) +
                                   " probes in (T - delta, T) x (0, c/2)";
  } else {
    r.summary = "f(t, x) <= 0 somewhere in (T - delta, T) x (0, c/2)";
  }
  return r;
}

}  // namespace

void SingularProblem::validate() const {
  if (!f.eval) throw ValidationError("singular problem has no right-hand side");
  if (!(std::isfinite(c) && c > 0.0)) {
    throw ValidationError("c must be finite and positive");
  }
  if (!(gT > 0.0 && gT <= c)) {
    throw ValidationError("singular problems require 0 < g(T) <= c (got g(T) = " +
                          fmt_double(gT) + ", c = " + fmt_double(c) + ")");
  }
  if (!(delta > 0.0 && delta < grid.horizon())) {
    throw ValidationError("delta must lie in (0, T)");
  }
}

std::string_view to_string(ConditionStatus status) {
  switch (status) {
    case ConditionStatus::kPass:
      return "pass";
    case ConditionStatus::kFail:
      return "fail";
    case ConditionStatus::kUncheckable:
      return "uncheckable";
  }
  return "uncheckable";
}

const ConditionResult& ConditionsReport::get(char id) const {
  for (const auto& c : conditions) {
    if (c.id == id) return c;
  }
  throw LookupError(std::string("unknown condition ") + id);
}

bool ConditionsReport::pipeline_ready() const {
  return get('D').status == ConditionStatus::kPass &&
         get('E').status == ConditionStatus::kPass &&
         get('F').status == ConditionStatus::kPass;
}

ConditionsReport check_conditions(const SingularProblem& problem,
                                  const ConditionProbes& probes) {
  problem.validate();
  if (probes.probes <= 0 || probes.blowup_depth <= 0) {
    throw ValidationError("condition probes must be positive");
  }
  ConditionsReport report;
  report.conditions[0] = check_structural_domain(problem);
  report.conditions[1] = check_continuity(problem, probes);
  check_blowup(problem, probes, report.conditions[2], report.conditions[5]);
  report.conditions[3] = check_upper_level(problem);
  report.conditions[4] = check_terminal_positivity(problem, probes);
  report.conditions[6] = {
      'G', ConditionStatus::kUncheckable, false,
      "0 < g(T) < u(0) involves the solution; 0 < g(T) <= c holds at entry "
      "and g(T) < u(0) is checked after solving",
      {}};
  return report;
}

BarrierCheck barrier_check(const GridFunction& u, double epsilon,
                           double delta) {
  const GridTimeScale& grid = u.grid();
  const double horizon = grid.horizon();
  if (!(delta > 0.0 && delta < horizon)) {
    throw ValidationError("barrier_check needs 0 < delta < T");
  }
  if (!(epsilon > 0.0)) throw ValidationError("barrier epsilon must be > 0");

  auto violations_at = [&](double eps, std::vector<std::size_t>* out) {
    bool ok = true;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const double t = grid[i];
      double required;
      if (t > 0.0 && t < horizon - delta) {
        required = eps;
      } else if (t > horizon - delta && t < horizon) {
        required = eps / delta * (horizon - t);
      } else {
        continue;
      }
      if (!(u[i] >= required)) {
        ok = false;
        if (out == nullptr) return false;
        out->push_back(i);
      }
    }
    return ok;
  };

  BarrierCheck out;
  out.epsilon = epsilon;
  out.delta = delta;
  out.passed = violations_at(epsilon, &out.violations);

  double lo = 0.0;
  double hi = 1.0;
  while (violations_at(hi, nullptr) && hi < 1e300) hi *= 2.0;
  if (violations_at(hi, nullptr)) {
    out.epsilon_star = hi;  // no constrained points
    return out;
  }
  for (int iter = 0; iter < 200 && hi - lo > 1e-6 * hi; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (violations_at(mid, nullptr)) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  out.epsilon_star = lo;
  return out;
}

void SingularOptions::validate() const {
  if (!(std::isfinite(k0) && k0 > 0.0)) throw ValidationError("k0 must be > 0");
  if (!(tol_limit >= 0.0)) throw ValidationError("tol_limit must be >= 0");
  if (max_stages <= 0) throw ValidationError("max_stages must be > 0");
  if (barrier_epsilon && !(*barrier_epsilon > 0.0)) {
    throw ValidationError("barrier epsilon must be > 0");
  }
}

const GridFunction& SingularRun::limit() const {
  if (stages.empty()) throw LookupError("singular run has no completed stage");
  return stages.back().report.solution;
}

SingularResidual singular_residual(const GridFunction& u,
                                   const SingularProblem& problem,
                                   double floor) {
  const GridTimeScale& grid = problem.grid;
  if (!u.grid().same_as(grid)) {
    throw AlignmentError("solution is not defined on the problem's grid");
  }
  const std::size_t n = grid.last();
  SingularResidual out;
  out.floor = floor;
  out.value = std::max(std::abs((u[1] - u[0]) / (grid[1] - grid[0])),
                       std::abs(u[n] - problem.gT));
  for (std::size_t i = 1; i < n; ++i) {
    if (u[i] < floor) {
      ++out.points_excluded;
      continue;
    }
    ++out.points_used;
    const double r = second_delta_at_rho(u, i) +
                     evaluate_checked(problem.f, grid[i], u[i]);
    out.value = std::max(out.value, std::abs(r));
  }
  return out;
}

SingularRun solve_singular(const SingularProblem& problem,
                           const SolverConfig& config,
                           const SingularOptions& options) {
  problem.validate();
  config.validate();
  options.validate();

  const BarrierPair barriers(GridFunction::constant(problem.grid, 0.0),
                             GridFunction::constant(problem.grid, problem.c));
  SingularRun run;
  bool stabilized = false;
  for (int j = 0; j < options.max_stages; ++j) {
    const double k = options.k0 * std::ldexp(1.0, j);
    run.k_schedule.push_back(k);
    const RegularProblem regularized{regularize(problem.f, k), problem.gT,
                                     problem.grid};
    const RegularProblem aux = auxiliary_problem(regularized, barriers);

    std::optional<SolveReport> report;
    std::string fallback_reason;
    try {
      report = picard_solve(aux, barriers, config);
    } catch (const NonConvergenceError& e) {
      if (!options.shooting_fallback) {
        throw StageError("stage " + std::to_string(j) + " (k = " +
                             fmt_double(k) + "): " + e.what(),
                         std::move(run));
      }
      fallback_reason = e.what();
    } catch (const EvaluationError& e) {
      throw StageError("stage " + std::to_string(j) + " (k = " +
                           fmt_double(k) + "): " + e.what(),
                       std::move(run));
    }
    if (!report) {
      try {
        report = shooting_solve(aux, barriers, config);
      } catch (const Error& e) {
        throw StageError("stage " + std::to_string(j) + " (k = " +
                             fmt_double(k) + "): Picard failed (" +
                             fallback_reason + ") and shooting failed (" +
                             e.what() + ")",
                         std::move(run));
      }
    }

    std::optional<double> gap;
    if (!run.stages.empty()) {
      gap = sup_distance(report->solution, run.stages.back().report.solution);
      run.gap_trace.push_back(*gap);
      run.stabilization_gap = *gap;
    }
    run.stages.push_back(
        StageResult{k, std::move(*report), gap, std::move(fallback_reason)});
    if (gap && *gap < options.tol_limit) {
      stabilized = true;
      break;
    }
  }
  if (!stabilized) {
    std::ostringstream os;
    os << "regularized solutions did not stabilize within "
       << options.max_stages << " stages (tol_limit " << options.tol_limit;
    if (!run.gap_trace.empty()) os << ", last gap " << run.gap_trace.back();
    os << ")";
    throw NonStabilizationError(os.str(), std::move(run));
  }

  const GridFunction& limit = run.limit();
  run.residual = singular_residual(limit, problem, 2.0 / run.k_schedule.back());
  const double eps_star =
      barrier_check(limit, 1.0, problem.delta).epsilon_star;
  const double eps = options.barrier_epsilon.value_or(eps_star);
  if (eps > 0.0) {
    run.barrier = barrier_check(limit, eps, problem.delta);
  } else {
    BarrierCheck failed;
    failed.delta = problem.delta;
    run.barrier = failed;
  }
  return run;
}

PostCheck post_check(const GridFunction& u, const SingularProblem& problem) {
  const std::size_t n = u.grid().last();
  PostCheck out;
  out.positive = true;
  out.bounded = true;
  for (std::size_t i = 0; i <= n; ++i) {
    if (i < n && !(u[i] > 0.0) && out.positive) {
      out.positive = false;
      out.positivity_witness = i;
    }
    if (u[i] > problem.c + kEnclosureSlack && out.bounded) {
      out.bounded = false;
      out.bound_witness = i;
    }
  }
  out.above_boundary_value = problem.gT < u[0];
  return out;
}

PostCheck post_check(const SingularRun& run, const SingularProblem& problem) {
  return post_check(run.limit(), problem);
}

}  // namespace tsbvp
