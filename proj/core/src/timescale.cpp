#include "tsbvp/timescale.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "tsbvp/error.hpp"

namespace tsbvp {
namespace {

double piece_begin(const Piece& piece) {
  return std::visit(
      [](const auto& p) {
        if constexpr (std::is_same_v<std::decay_t<decltype(p)>, Interval>) {
          return p.a;
        } else {
          return p.p;
        }
      },
      piece);
}

double piece_end(const Piece& piece) {
  return std::visit(
      [](const auto& p) {
        if constexpr (std::is_same_v<std::decay_t<decltype(p)>, Interval>) {
          return p.b;
        } else {
          return p.p;
        }
      },
      piece);
}

std::string piece_error(std::size_t index, const Piece& piece,
                        const std::string& why) {
  std::ostringstream os;
  os << "time scale piece #" << index << " " << describe(piece) << ": " << why;
  return os.str();
}

void validate_points(const std::vector<double>& points) {
  if (points.size() < 3) {
    throw ValidationError(
        "grid needs at least three points (N >= 2) so that the interior is "
        "nonempty");
  }
  if (points.front() != 0.0) {
    throw ValidationError("grid must start at t = 0");
  }
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (!std::isfinite(points[i])) {
      throw ValidationError("grid point " + std::to_string(i) +
                            " is not finite");
    }
    if (i > 0 && !(points[i] > points[i - 1])) {
      throw ValidationError("grid points must be strictly increasing (index " +
                            std::to_string(i) + ")");
    }
  }
}

}  // namespace

std::string describe(const Piece& piece) {
  std::ostringstream os;
  os.precision(17);
  if (const auto* iv = std::get_if<Interval>(&piece)) {
    os << "Interval(" << iv->a << ", " << iv->b << ")";
  } else {
    os << "Point(" << std::get<Point>(piece).p << ")";
  }
  return os.str();
}

void TimeScaleSpec::validate() const {
  if (!(std::isfinite(horizon) && horizon > 0.0)) {
    throw ValidationError("time scale horizon must be finite and positive");
  }
  if (pieces.empty()) {
    throw ValidationError("time scale has no pieces");
  }
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    const Piece& piece = pieces[i];
    const double lo = piece_begin(piece);
    const double hi = piece_end(piece);
    if (!std::isfinite(lo) || !std::isfinite(hi)) {
      throw ValidationError(piece_error(i, piece, "non-finite endpoint"));
    }
    if (std::holds_alternative<Interval>(piece) && !(lo < hi)) {
      throw ValidationError(piece_error(i, piece, "requires a < b"));
    }
    if (lo < 0.0 || hi > horizon) {
      throw ValidationError(piece_error(i, piece, "lies outside [0, horizon]"));
    }
    if (i > 0 && !(piece_end(pieces[i - 1]) < lo)) {
      throw ValidationError(piece_error(
          i, piece, "overlaps or precedes the previous piece (pieces must be "
                    "disjoint and sorted ascending)"));
    }
  }
  if (piece_begin(pieces.front()) != 0.0) {
    throw ValidationError(piece_error(0, pieces.front(),
                                      "the time scale must contain 0"));
  }
  if (piece_end(pieces.back()) != horizon) {
    throw ValidationError(piece_error(pieces.size() - 1, pieces.back(),
                                      "the time scale must contain the horizon"));
  }
}

GridTimeScale::GridTimeScale(std::shared_ptr<const std::vector<double>> points,
                             std::shared_ptr<const TimeScaleSpec> source)
    : points_(std::move(points)), source_(std::move(source)) {}

GridTimeScale GridTimeScale::from_points(std::vector<double> points) {
  validate_points(points);
  auto spec = std::make_shared<TimeScaleSpec>();
  spec->horizon = points.back();
  spec->pieces.reserve(points.size());
  for (double p : points) spec->pieces.emplace_back(Point{p});
  return GridTimeScale(
      std::make_shared<const std::vector<double>>(std::move(points)),
      std::move(spec));
}

void GridTimeScale::check_index(std::size_t i) const {
  if (i > last()) {
    throw BoundsError("grid index " + std::to_string(i) +
                      " out of range [0, " + std::to_string(last()) + "]");
  }
}

double GridTimeScale::at(std::size_t i) const {
  check_index(i);
  return (*points_)[i];
}

double GridTimeScale::sigma(std::size_t i) const {
  check_index(i);
  return i < last() ? (*points_)[i + 1] : (*points_)[i];
}

double GridTimeScale::rho(std::size_t i) const {
  check_index(i);
  return i > 0 ? (*points_)[i - 1] : (*points_)[0];
}

double GridTimeScale::mu(std::size_t i) const {
  return sigma(i) - (*points_)[i];
}

std::optional<std::size_t> GridTimeScale::index_of(double t) const noexcept {
  const auto it = std::lower_bound(points_->begin(), points_->end(), t);
  if (it == points_->end() || *it != t) return std::nullopt;
  return static_cast<std::size_t>(it - points_->begin());
}

bool GridTimeScale::same_as(const GridTimeScale& other) const noexcept {
  return points_ == other.points_ || *points_ == *other.points_;
}

GridTimeScale build_grid(const TimeScaleSpec& spec, double resolution) {
  spec.validate();
  if (!(std::isfinite(resolution) && resolution > 0.0)) {
    throw ValidationError("grid resolution must be finite and positive");
  }
  std::vector<double> points;
  for (const Piece& piece : spec.pieces) {
    if (const auto* iv = std::get_if<Interval>(&piece)) {
      const double length = iv->b - iv->a;
      // The small offset keeps products such as 0.3 * 10 from rounding up to
      // an extra step.
      const double raw = std::ceil(length * resolution - 1e-9);
      const auto steps = static_cast<std::size_t>(std::max(2.0, raw));
      for (std::size_t j = 0; j < steps; ++j) {
        points.push_back(iv->a + static_cast<double>(j) * length /
                                     static_cast<double>(steps));
      }
      points.push_back(iv->b);
    } else {
      points.push_back(std::get<Point>(piece).p);
    }
  }
  validate_points(points);
  return GridTimeScale(
      std::make_shared<const std::vector<double>>(std::move(points)),
      std::make_shared<const TimeScaleSpec>(spec));
}

}  // namespace tsbvp
