#include "tsbvp/regular_solver.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "tsbvp/error.hpp"

namespace tsbvp {
namespace {

void require_grid(const GridFunction& u, const GridTimeScale& grid) {
  if (!u.grid().same_as(grid)) {
    throw AlignmentError("grid function is not defined on the problem's grid");
  }
}

SolveReport make_report(GridFunction solution, const RegularProblem& problem,
                        Method method, int iterations,
                        std::vector<double> trace) {
  ResidualBreakdown parts = residual_breakdown(solution, problem);
  const double sup = parts.sup();
  return SolveReport{std::move(solution), sup,        std::move(parts),
                     iterations,          method,     std::move(trace),
                     std::nullopt,        std::nullopt, std::nullopt};
}

void attach_barriers(SolveReport& report, const RegularProblem& problem,
                     const BarrierPair& barriers) {
  const double m = bound_M(problem.h, barriers);
  const double horizon = problem.grid.horizon();
  report.ball_bound = std::abs(problem.gT) + m * horizon * horizon;
  report.enclosure_ok = encloses(barriers, report.solution);
}

SolveReport picard_from(const RegularProblem& problem, GridFunction u,
                        const SolverConfig& config) {
  const std::size_t size = u.size();
  const double lambda = config.relaxation;
  std::vector<double> trace;
  int updates = 0;
  for (;;) {
    GridFunction next = apply_integral_operator(u, problem.h, problem.gT);
    const double change = lambda * sup_distance(next, u);
    trace.push_back(change);
    if (change < config.tol_fixpoint) break;
    if (updates == config.max_iter) {
      std::ostringstream os;
      os << "Picard iteration did not converge in " << config.max_iter
         << " iterations (last change " << change << ", tolerance "
         << config.tol_fixpoint << ")";
      throw NonConvergenceError(os.str(), std::move(trace));
    }
    std::vector<double> relaxed(size);
    for (std::size_t i = 0; i < size; ++i) {
      relaxed[i] = (1.0 - lambda) * u[i] + lambda * next[i];
    }
    u = GridFunction(problem.grid, std::move(relaxed));
    ++updates;
  }
  return make_report(std::move(u), problem, Method::kPicard, updates,
                     std::move(trace));
}

}  // namespace

void SolverConfig::validate() const {
  if (!(tol_fixpoint > 0.0)) throw ValidationError("tol_fixpoint must be > 0");
  if (max_iter <= 0) throw ValidationError("max_iter must be > 0");
  if (!(relaxation > 0.0 && relaxation <= 1.0)) {
    throw ValidationError("relaxation must lie in (0, 1]");
  }
  if (!(shooting_tol > 0.0)) throw ValidationError("shooting_tol must be > 0");
  if (shooting_max_bisections <= 0) {
    throw ValidationError("shooting_max_bisections must be > 0");
  }
  if (!(bracket_pad >= 0.0) || !std::isfinite(bracket_pad)) {
    throw ValidationError("bracket_pad must be finite and >= 0");
  }
}

std::string_view to_string(Method method) {
  return method == Method::kPicard ? "picard" : "shooting";
}

double ResidualBreakdown::sup() const noexcept {
  return std::max({equation, start_slope, terminal});
}

GridFunction apply_integral_operator(const GridFunction& u, const Rhs& h,
                                     double gT) {
  const GridTimeScale& grid = u.grid();
  const std::size_t n = grid.last();
  std::vector<double> integrand(n + 1, 0.0);
  for (std::size_t j = 0; j + 1 < n; ++j) {
    integrand[j] = evaluate_checked(h, grid[j + 1], u[j + 1]);
  }
  // Entries N-1 and N never reach an outer term; they stay zero.
  std::vector<double> tails =
      double_integral_tails(GridFunction(grid, std::move(integrand)));
  for (double& v : tails) v += gT;
  return GridFunction(grid, std::move(tails));
}

ResidualBreakdown residual_breakdown(const GridFunction& u,
                                     const RegularProblem& problem) {
  require_grid(u, problem.grid);
  const GridTimeScale& grid = problem.grid;
  const std::size_t n = grid.last();
  ResidualBreakdown out;
  out.pointwise.assign(n + 1, 0.0);
  for (std::size_t i = 1; i < n; ++i) {
    const double r = std::abs(second_delta_at_rho(u, i) +
                              evaluate_checked(problem.h, grid[i], u[i]));
    out.pointwise[i] = r;
    out.equation = std::max(out.equation, r);
  }
  out.start_slope = std::abs((u[1] - u[0]) / (grid[1] - grid[0]));
  out.terminal = std::abs(u[n] - problem.gT);
  out.pointwise[0] = out.start_slope;
  out.pointwise[n] = out.terminal;
  return out;
}

double residual(const GridFunction& u, const RegularProblem& problem) {
  return residual_breakdown(u, problem).sup();
}

SolveReport picard_solve(const RegularProblem& problem,
                         const BarrierPair& barriers,
                         const SolverConfig& config) {
  problem.validate();
  config.validate();
  require_grid(barriers.alpha(), problem.grid);
  std::vector<double> start(problem.grid.size());
  for (std::size_t i = 0; i < start.size(); ++i) {
    start[i] = 0.5 * (barriers.alpha()[i] + barriers.beta()[i]);
  }
  SolveReport report = picard_from(
      problem, GridFunction(problem.grid, std::move(start)), config);
  attach_barriers(report, problem, barriers);
  return report;
}

SolveReport picard_solve(const RegularProblem& problem,
                         const SolverConfig& config) {
  problem.validate();
  config.validate();
  return picard_from(problem, GridFunction::constant(problem.grid, problem.gT),
                     config);
}

GridFunction shoot(const RegularProblem& problem, double s) {
  const GridTimeScale& grid = problem.grid;
  const std::size_t n = grid.last();
  std::vector<double> u(n + 1);
  u[0] = s;
  u[1] = s;
  for (std::size_t i = 1; i < n; ++i) {
    const double mu_prev = grid[i] - grid[i - 1];
    const double mu = grid[i + 1] - grid[i];
    const double slope = (u[i] - u[i - 1]) / mu_prev;
    u[i + 1] = u[i] + mu * (slope - mu_prev * problem.h(grid[i], u[i]));
    if (!std::isfinite(u[i + 1])) {
      std::ostringstream os;
      os.precision(17);
      os << "shooting march became non-finite at index " << i + 1
         << " (t = " << grid[i + 1] << ", s = " << s << ")";
      throw EvaluationError(os.str(), grid[i], u[i], false);
    }
  }
  return GridFunction(grid, std::move(u));
}

SolveReport shooting_solve(const RegularProblem& problem,
                           const SolverConfig& config, Bracket bracket) {
  problem.validate();
  config.validate();
  if (!(bracket.lo <= bracket.hi) || !std::isfinite(bracket.lo) ||
      !std::isfinite(bracket.hi)) {
    throw ValidationError("shooting bracket must be finite with lo <= hi");
  }
  const std::size_t n = problem.grid.last();
  auto mismatch = [&](double s) { return shoot(problem, s)[n] - problem.gT; };

  double lo = bracket.lo;
  double hi = bracket.hi;
  double r_lo = mismatch(lo);
  double r_hi = mismatch(hi);
  const double center = 0.5 * (lo + hi);
  double half = 0.5 * (hi - lo);
  if (half == 0.0) half = std::max(1.0, std::abs(center));
  for (int expansion = 0; expansion < 8 && r_lo * r_hi > 0.0; ++expansion) {
    half *= 2.0;
    lo = center - half;
    hi = center + half;
    r_lo = mismatch(lo);
    r_hi = mismatch(hi);
  }
  if (r_lo * r_hi > 0.0) {
    std::ostringstream os;
    os.precision(17);
    os << "shooting mismatch has no sign change on [" << lo << ", " << hi
       << "] after 8 expansions";
    throw BracketingError(os.str());
  }

  std::vector<double> trace;
  double best_s = std::abs(r_lo) <= std::abs(r_hi) ? lo : hi;
  double best_r = std::min(std::abs(r_lo), std::abs(r_hi));
  int bisections = 0;
  while (best_r > config.shooting_tol &&
         bisections < config.shooting_max_bisections) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;  // bracket is one ulp wide
    const double r_mid = mismatch(mid);
    ++bisections;
    trace.push_back(std::abs(r_mid));
    if (std::abs(r_mid) < best_r) {
      best_r = std::abs(r_mid);
      best_s = mid;
    }
    if ((r_mid < 0.0) == (r_lo < 0.0)) {
      lo = mid;
      r_lo = r_mid;
    } else {
      hi = mid;
      r_hi = r_mid;
    }
  }
  if (best_r > config.shooting_tol) {
    std::ostringstream os;
    os << "shooting reached |u(T) - g(T)| = " << best_r << " after "
       << bisections << " bisections (tolerance " << config.shooting_tol << ")";
    throw NonConvergenceError(os.str(), std::move(trace));
  }
  SolveReport report = make_report(shoot(problem, best_s), problem,
                                   Method::kShooting, bisections,
                                   std::move(trace));
  report.shooting_value = best_s;
  return report;
}

SolveReport shooting_solve(const RegularProblem& problem,
                           const BarrierPair& barriers,
                           const SolverConfig& config) {
  require_grid(barriers.alpha(), problem.grid);
  SolveReport report = shooting_solve(
      problem, config,
      Bracket{barriers.alpha()[0] - config.bracket_pad,
              barriers.beta()[0] + config.bracket_pad});
  attach_barriers(report, problem, barriers);
  return report;
}

EquivalenceConstants equivalence_constants(const GridTimeScale& grid) {
  const double horizon = grid.horizon();
  double mu_min = grid.mu(0);
  for (std::size_t i = 1; i < grid.last(); ++i) {
    mu_min = std::min(mu_min, grid.mu(i));
  }
  return EquivalenceConstants{
      1.0 + horizon + horizon * horizon,
      std::max({1.0, 2.0 / mu_min, 4.0 / (mu_min * mu_min)})};
}

bool encloses(const BarrierPair& barriers, const GridFunction& u,
              double slack) {
  require_grid(u, barriers.grid());
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (u[i] < barriers.alpha()[i] - slack || u[i] > barriers.beta()[i] + slack) {
      return false;
    }
  }
  return true;
}

double sup_distance(const GridFunction& a, const GridFunction& b) {
  require_grid(a, b.grid());
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    d = std::max(d, std::abs(a[i] - b[i]));
  }
  return d;
}

}  // namespace tsbvp
