#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "tsbvp/timescale.hpp"

namespace tsbvp {

/// Real values aligned with the points of a grid. All values are finite.
class GridFunction {
 public:
  GridFunction(GridTimeScale grid, std::vector<double> values);

  /// Samples `fn(t)` at every grid point.
  static GridFunction sample(const GridTimeScale& grid,
                             const std::function<double(double)>& fn);
  static GridFunction constant(const GridTimeScale& grid, double value);

  const GridTimeScale& grid() const noexcept { return grid_; }
  std::span<const double> values() const noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }
  double at(std::size_t i) const;

 private:
  GridTimeScale grid_;
  std::vector<double> values_;
};

/// Delta derivative of a grid function. Defined on indices 0..N-1; the
/// terminal point carries no value.
struct DeltaDerivative {
  GridTimeScale grid;
  std::vector<double> values;  // size N

  std::optional<double> at(std::size_t i) const;
};

enum class Summation {
  kLeftToRight,  // plain left-to-right accumulation
  kCompensated,  // Neumaier compensated accumulation for long fine grids
};

DeltaDerivative delta_derivative(const GridFunction& f);

/// f^{ΔΔ}(ρ(t_i)) for an interior index 1 <= i <= N-1:
/// (f^Δ(t_i) - f^Δ(t_{i-1})) / μ(t_{i-1}).
double second_delta_at_rho(const GridFunction& f, std::size_t i);

/// Delta integral from t_a to t_b: Σ_{j=a}^{b-1} μ_j f_j for a < b, zero for
/// a == b and the negated reversed integral for a > b.
double delta_integral(const GridFunction& f, std::size_t a, std::size_t b,
                      Summation mode = Summation::kLeftToRight);

/// Σ_{j=i}^{N-1} μ_j · ∫_0^{t_j} f Δs, the iterated integral from t_i to T.
double double_integral_tail(const GridFunction& f, std::size_t i,
                            Summation mode = Summation::kLeftToRight);

/// double_integral_tail for every index at once in O(N).
std::vector<double> double_integral_tails(
    const GridFunction& f, Summation mode = Summation::kLeftToRight);

}  // namespace tsbvp
