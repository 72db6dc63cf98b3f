#include "tsbvp/transforms.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <random>
#include <sstream>

#include "tsbvp/error.hpp"

namespace tsbvp {
namespace {

std::string point_text(double t, double x) {
  std::ostringstream os;
  os.precision(17);
  os << "(t = " << t << ", x = " << x << ")";
  return os.str();
}

void require_same_grid(const GridTimeScale& a, const GridTimeScale& b,
                       const char* what) {
  if (!a.same_as(b)) {
    throw AlignmentError(std::string(what) +
                         " is not defined on the problem's grid");
  }
}

BarrierCertificate verify_barrier(BarrierKind kind, const GridFunction& x,
                                  const RegularProblem& problem, double tol) {
  require_same_grid(x.grid(), problem.grid,
                    kind == BarrierKind::kLower ? "lower solution"
                                                : "upper solution");
  if (!(tol >= 0.0)) throw ValidationError("verification tolerance must be >= 0");

  const GridTimeScale& grid = problem.grid;
  const std::size_t n = grid.last();
  const bool lower = kind == BarrierKind::kLower;
  // Lower solutions need values >= -tol, upper solutions values <= tol.
  auto holds = [&](double value) { return lower ? value >= -tol : value <= tol; };

  BarrierCertificate cert;
  cert.kind = kind;
  cert.tol = tol;
  cert.interior.reserve(n - 1);
  for (std::size_t i = 1; i < n; ++i) {
    const double value =
        second_delta_at_rho(x, i) + evaluate_checked(problem.h, grid[i], x[i]);
    cert.interior.push_back({i, grid[i], value, holds(value)});
    if (!cert.interior.back().ok) {
      std::ostringstream os;
      os.precision(17);
      os << (lower ? "alpha^DD(rho(t)) + h(t, alpha(t)) >= 0"
                   : "beta^DD(rho(t)) + h(t, beta(t)) <= 0")
         << " violated at t = " << grid[i] << " (value " << value << ")";
      cert.violations.push_back(os.str());
    }
  }

  const double slope = (x[1] - x[0]) / (grid[1] - grid[0]);
  cert.start_slope = {0, grid[0], slope, holds(slope)};
  if (!cert.start_slope.ok) {
    std::ostringstream os;
    os.precision(17);
    os << (lower ? "alpha^D(0) >= 0" : "beta^D(0) <= 0") << " violated (value "
       << slope << ")";
    cert.violations.push_back(os.str());
  }

  // x(T) - g(T) must be <= 0 for a lower and >= 0 for an upper solution.
  const double excess = x[n] - problem.gT;
  const bool terminal_ok = lower ? excess <= tol : excess >= -tol;
  cert.terminal = {n, grid[n], excess, terminal_ok};
  if (!terminal_ok) {
    std::ostringstream os;
    os.precision(17);
    os << (lower ? "alpha(T) <= g(T)" : "beta(T) >= g(T)")
       << " violated (x(T) - g(T) = " << excess << ")";
    cert.violations.push_back(os.str());
  }

  cert.passed = cert.violations.empty();
  return cert;
}

}  // namespace

double evaluate_checked(const Rhs& h, double t, double x) {
  const double value = h.eval(t, x);
  if (!std::isfinite(value)) {
    throw EvaluationError("right-hand side is not finite at " + point_text(t, x),
                          t, x, false);
  }
  return value;
}

BarrierPair::BarrierPair(GridFunction alpha, GridFunction beta)
    : alpha_(std::move(alpha)), beta_(std::move(beta)) {
  require_same_grid(beta_.grid(), alpha_.grid(), "upper barrier");
  for (std::size_t i = 0; i < alpha_.size(); ++i) {
    if (alpha_[i] > beta_[i]) {
      std::ostringstream os;
      os.precision(17);
      os << "barriers cross at t = " << alpha_.grid()[i] << " (alpha "
         << alpha_[i] << " > beta " << beta_[i] << ")";
      throw ValidationError(os.str());
    }
  }
}

void RegularProblem::validate() const {
  if (!h.eval) throw ValidationError("regular problem has no right-hand side");
  if (!std::isfinite(gT)) throw ValidationError("g(T) must be finite");
}

Rhs truncate(const Rhs& h, const BarrierPair& barriers) {
  struct Band {
    Rhs h;
    GridTimeScale grid;
    std::vector<double> alpha;
    std::vector<double> beta;
  };
  auto band = std::make_shared<const Band>(
      Band{h, barriers.grid(),
           {barriers.alpha().values().begin(), barriers.alpha().values().end()},
           {barriers.beta().values().begin(), barriers.beta().values().end()}});

  Rhs out;
  out.eval = [band](double t, double x) {
    const auto index = band->grid.index_of(t);
    if (!index) {
      std::ostringstream os;
      os.precision(17);
      os << "truncated right-hand side evaluated at t = " << t
         << ", which is not a grid point";
      throw LookupError(os.str());
    }
    const double a = band->alpha[*index];
    const double b = band->beta[*index];
    if (x > b) {
      const double d = x - b;
      return band->h(t, b) - d / (d + 1.0);
    }
    if (x < a) {
      const double d = a - x;
      return band->h(t, a) + d / (d + 1.0);
    }
    return band->h(t, x);
  };
  return out;
}

RegularProblem auxiliary_problem(const RegularProblem& problem,
                                 const BarrierPair& barriers) {
  require_same_grid(barriers.grid(), problem.grid, "barrier pair");
  return RegularProblem{truncate(problem.h, barriers), problem.gT, problem.grid};
}

double bound_M(const Rhs& h, const BarrierPair& barriers,
               int samples_per_band) {
  if (samples_per_band < 1) {
    throw ValidationError("samples_per_band must be positive");
  }
  const int samples = std::max(samples_per_band, 2);
  const GridTimeScale& grid = barriers.grid();
  double peak = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double a = barriers.alpha()[i];
    const double b = barriers.beta()[i];
    for (int j = 0; j < samples; ++j) {
      const double x =
          j == samples - 1 ? b : a + j * (b - a) / (samples - 1);
      peak = std::max(peak, std::abs(evaluate_checked(h, grid[i], x)));
    }
  }
  return 1.0 + peak;
}

Rhs regularize(const Rhs& f, double k) {
  if (!(std::isfinite(k) && k > 0.0)) {
    throw ValidationError("regularization parameter k must be positive");
  }
  const double floor = 1.0 / k;
  Rhs out;
  out.eval = [f, floor](double t, double x) {
    const double ax = std::abs(x);
    return ax >= floor ? f(t, ax) : f(t, floor);
  };
  return out;
}

BarrierCertificate verify_lower(const GridFunction& alpha,
                                const RegularProblem& problem, double tol) {
  return verify_barrier(BarrierKind::kLower, alpha, problem, tol);
}

BarrierCertificate verify_upper(const GridFunction& beta,
                                const RegularProblem& problem, double tol) {
  return verify_barrier(BarrierKind::kUpper, beta, problem, tol);
}

ContinuityReport spot_check_continuity(const Rhs& h, const GridTimeScale& grid,
                                       double x_lo, double x_hi,
                                       int pairs_per_point,
                                       std::uint64_t seed) {
  if (!(x_lo < x_hi)) {
    throw ValidationError("continuity check needs x_lo < x_hi");
  }
  ContinuityReport report;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(x_lo, x_hi);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double t = grid[i];
    for (int p = 0; p < pairs_per_point; ++p) {
      const double x = dist(rng);
      const double eta = 1e-9 * std::max(1.0, std::abs(x));
      ++report.pairs_checked;
      double a = 0.0;
      double b = 0.0;
      try {
        a = h(t, x);
        b = h(t, x + eta);
      } catch (const Error& e) {
        report.warnings.push_back("evaluation failed near " +
                                  point_text(t, x) + ": " + e.what());
        continue;
      }
      if (!std::isfinite(a) || !std::isfinite(b) ||
          std::abs(a - b) > 1e-4 * (1.0 + std::abs(a))) {
        report.warnings.push_back("possible discontinuity near " +
                                  point_text(t, x));
      }
    }
  }
  return report;
}

}  // namespace tsbvp
