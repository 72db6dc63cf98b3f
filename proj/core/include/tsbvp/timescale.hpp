#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace tsbvp {

// Closed interval [a, b] contained in a time scale.
struct Interval {
  double a;
  double b;
};

// Isolated point of a time scale.
struct Point {
  double p;
};

using Piece = std::variant<Interval, Point>;

std::string describe(const Piece& piece);

/// A time scale: a closed subset of [0, horizon] written as a sorted union of
/// disjoint intervals and isolated points. The union must contain 0 and the
/// horizon.
struct TimeScaleSpec {
  double horizon = 0.0;
  std::vector<Piece> pieces;

  /// Throws ValidationError naming the first offending piece.
  void validate() const;
};

/// Finite grid t_0 = 0 < t_1 < ... < t_N = horizon discretizing a
/// TimeScaleSpec. Immutable; copies share storage.
///
/// Index conventions: the grid itself is the ambient set, indices 0..N-1 form
/// the set on which delta derivatives live, and 1..N-1 are the interior points
/// where the dynamic equation is imposed.
class GridTimeScale {
 public:
  /// Grid made only of isolated points. Requires points[0] == 0, strictly
  /// increasing values and at least three points.
  static GridTimeScale from_points(std::vector<double> points);

  std::size_t size() const noexcept { return points_->size(); }
  // N, the index of the terminal point.
  std::size_t last() const noexcept { return points_->size() - 1; }
  double horizon() const noexcept { return points_->back(); }
  double operator[](std::size_t i) const { return (*points_)[i]; }
  double at(std::size_t i) const;
  std::span<const double> points() const noexcept { return *points_; }
  const TimeScaleSpec& source() const noexcept { return *source_; }

  // Forward jump; sigma(N) = t_N.
  double sigma(std::size_t i) const;
  // Backward jump; rho(0) = t_0.
  double rho(std::size_t i) const;
  // Graininess sigma(i) - t_i; zero only at the terminal point.
  double mu(std::size_t i) const;

  std::optional<std::size_t> index_of(double t) const noexcept;
  bool same_as(const GridTimeScale& other) const noexcept;

 private:
  friend GridTimeScale build_grid(const TimeScaleSpec& spec, double resolution);
  GridTimeScale(std::shared_ptr<const std::vector<double>> points,
                std::shared_ptr<const TimeScaleSpec> source);
  void check_index(std::size_t i) const;

  std::shared_ptr<const std::vector<double>> points_;
  std::shared_ptr<const TimeScaleSpec> source_;
};

/// Discretizes a spec. Each Interval(a, b) is split into
/// max(2, ceil((b - a) * resolution)) equal steps with points a + j (b - a) / n
/// and the last point set to b; Points are copied verbatim.
GridTimeScale build_grid(const TimeScaleSpec& spec, double resolution);

}  // namespace tsbvp
