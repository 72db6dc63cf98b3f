#include "tsbvp/calculus.hpp"

#include <cmath>
#include <string>

#include "tsbvp/error.hpp"

namespace tsbvp {
namespace {

// Neumaier's variant of Kahan summation.
class Accumulator {
 public:
  explicit Accumulator(Summation mode) : mode_(mode) {}

  void add(double x) {
    if (mode_ == Summation::kLeftToRight) {
      sum_ += x;
      return;
    }
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      compensation_ += (sum_ - t) + x;
    } else {
      compensation_ += (x - t) + sum_;
    }
    sum_ = t;
  }

  double value() const { return sum_ + compensation_; }

 private:
  Summation mode_;
  double sum_ = 0.0;
  double compensation_ = 0.0;
};

void check_index(const GridFunction& f, std::size_t i) {
  if (i >= f.size()) {
    throw BoundsError("grid index " + std::to_string(i) + " out of range [0, " +
                      std::to_string(f.size() - 1) + "]");
  }
}

}  // namespace

GridFunction::GridFunction(GridTimeScale grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  if (values_.size() != grid_.size()) {
    throw ValidationError("grid function has " + std::to_string(values_.size()) +
                          " values for a grid of " +
                          std::to_string(grid_.size()) + " points");
  }
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i])) {
      throw ValidationError("grid function value at index " +
                            std::to_string(i) + " is not finite");
    }
  }
}

GridFunction GridFunction::sample(const GridTimeScale& grid,
                                  const std::function<double(double)>& fn) {
  std::vector<double> values(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) values[i] = fn(grid[i]);
  return GridFunction(grid, std::move(values));
}

GridFunction GridFunction::constant(const GridTimeScale& grid, double value) {
  return GridFunction(grid, std::vector<double>(grid.size(), value));
}

double GridFunction::at(std::size_t i) const {
  check_index(*this, i);
  return values_[i];
}

std::optional<double> DeltaDerivative::at(std::size_t i) const {
  if (i >= values.size()) return std::nullopt;
  return values[i];
}

DeltaDerivative delta_derivative(const GridFunction& f) {
  const GridTimeScale& grid = f.grid();
  const std::size_t n = grid.last();
  std::vector<double> d(n);
  for (std::size_t i = 0; i < n; ++i) {
    d[i] = (f[i + 1] - f[i]) / (grid[i + 1] - grid[i]);
  }
  return DeltaDerivative{grid, std::move(d)};
}

double second_delta_at_rho(const GridFunction& f, std::size_t i) {
  const GridTimeScale& grid = f.grid();
  if (i == 0 || i >= grid.last()) {
    throw BoundsError("second_delta_at_rho needs an interior index in [1, " +
                      std::to_string(grid.last() - 1) + "], got " +
                      std::to_string(i));
  }
  const double mu_prev = grid[i] - grid[i - 1];
  const double d_here = (f[i + 1] - f[i]) / (grid[i + 1] - grid[i]);
  const double d_prev = (f[i] - f[i - 1]) / mu_prev;
  return (d_here - d_prev) / mu_prev;
}

double delta_integral(const GridFunction& f, std::size_t a, std::size_t b,
                      Summation mode) {
  check_index(f, a);
  check_index(f, b);
  if (a == b) return 0.0;
  if (a > b) return -delta_integral(f, b, a, mode);
  const GridTimeScale& grid = f.grid();
  Accumulator acc(mode);
  for (std::size_t j = a; j < b; ++j) {
    acc.add((grid[j + 1] - grid[j]) * f[j]);
  }
  return acc.value();
}

std::vector<double> double_integral_tails(const GridFunction& f,
                                          Summation mode) {
  const GridTimeScale& grid = f.grid();
  const std::size_t n = grid.last();
  // inner[j] = ∫_0^{t_j} f Δs, accumulated in the same left-to-right order
  // delta_integral(f, 0, j) uses.
  std::vector<double> inner(n + 1, 0.0);
  {
    Accumulator acc(mode);
    for (std::size_t j = 0; j < n; ++j) {
      acc.add((grid[j + 1] - grid[j]) * f[j]);
      inner[j + 1] = acc.value();
    }
  }
  std::vector<double> tails(n + 1, 0.0);
  Accumulator acc(mode);
  for (std::size_t j = n; j-- > 0;) {
    acc.add((grid[j + 1] - grid[j]) * inner[j]);
    tails[j] = acc.value();
  }
  return tails;
}

double double_integral_tail(const GridFunction& f, std::size_t i,
                            Summation mode) {
  check_index(f, i);
  return double_integral_tails(f, mode)[i];
}

}  // namespace tsbvp
