#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "flola/error.hpp"
#include "flola/random.hpp"

namespace flola {

using Point = std::vector<double>;

/// Two points closer than this (unit-cube coordinates) count as the same point.
inline constexpr double kDuplicateThreshold = 1e-12;

/// Axis-aligned box [lower, upper] holding the inputs of the black box.
class DesignSpace {
 public:
  DesignSpace(std::vector<double> lower, std::vector<double> upper)
      : lower_(std::move(lower)), upper_(std::move(upper)) {
    if (lower_.empty()) throw ConfigurationError("design space needs at least one dimension");
    if (lower_.size() != upper_.size())
      throw ConfigurationError("lower and upper bounds differ in length");
    for (std::size_t k = 0; k < lower_.size(); ++k) {
      if (!std::isfinite(lower_[k]) || !std::isfinite(upper_[k]) || !(lower_[k] < upper_[k])) {
        std::ostringstream msg;
        msg << "axis " << k << ": lower bound must be below upper bound";
        throw ConfigurationError(msg.str());
      }
    }
  }

  static DesignSpace unit_cube(std::size_t dim) {
    return DesignSpace(std::vector<double>(dim, 0.0), std::vector<double>(dim, 1.0));
  }

  std::size_t dim() const noexcept { return lower_.size(); }
  const std::vector<double>& lower() const noexcept { return lower_; }
  const std::vector<double>& upper() const noexcept { return upper_; }
  double width(std::size_t k) const noexcept { return upper_[k] - lower_[k]; }

  bool contains(std::span<const double> raw) const noexcept {
    if (raw.size() != dim()) return false;
    for (std::size_t k = 0; k < dim(); ++k)
      if (!(raw[k] >= lower_[k] && raw[k] <= upper_[k])) return false;
    return true;
  }

  Point normalize(std::span<const double> raw) const {
    check_size(raw);
    Point unit(dim());
    for (std::size_t k = 0; k < dim(); ++k) unit[k] = (raw[k] - lower_[k]) / width(k);
    return unit;
  }

  /// Maps unit-cube coordinates back to the box, clamped against rounding.
  Point denormalize(std::span<const double> unit) const {
    check_size(unit);
    Point raw(dim());
    for (std::size_t k = 0; k < dim(); ++k)
      raw[k] = std::clamp(lower_[k] + unit[k] * width(k), lower_[k], upper_[k]);
    return raw;
  }

  friend bool operator==(const DesignSpace&, const DesignSpace&) = default;

 private:
  void check_size(std::span<const double> x) const {
    if (x.size() != dim()) throw UsageError("coordinate vector has wrong dimension");
  }

  std::vector<double> lower_;
  std::vector<double> upper_;
};

struct EvaluatedPoint {
  Point coords;           // raw coordinates
  double response = 0.0;
  std::size_t iteration = 0;  // 0 = initial design

  friend bool operator==(const EvaluatedPoint&, const EvaluatedPoint&) = default;
};

inline double squared_distance(std::span<const double> a, std::span<const double> b) noexcept {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double diff = a[k] - b[k];
    s += diff * diff;
  }
  return s;
}

inline double distance(std::span<const double> a, std::span<const double> b) noexcept {
  return std::sqrt(squared_distance(a, b));
}

/// Ordered set of evaluated points. Keeps a unit-cube copy of every point so the
/// geometry (distances, Voronoi ownership, neighborhoods) never sees raw scales.
class Design {
 public:
  explicit Design(DesignSpace space) : space_(std::move(space)) {}

  const DesignSpace& space() const noexcept { return space_; }
  std::size_t dim() const noexcept { return space_.dim(); }
  std::size_t size() const noexcept { return points_.size(); }
  bool empty() const noexcept { return points_.empty(); }

  const EvaluatedPoint& operator[](std::size_t i) const { return points_[i]; }
  const std::vector<EvaluatedPoint>& points() const noexcept { return points_; }
  double response(std::size_t i) const { return points_[i].response; }

  std::span<const double> normalized(std::size_t i) const {
    return {unit_.data() + i * dim(), dim()};
  }

  /// Index of the nearest design point (unit cube) and its distance; lowest index wins ties.
  std::pair<std::size_t, double> nearest_normalized(std::span<const double> unit) const {
    if (empty()) throw UsageError("nearest-point query on an empty design");
    std::size_t best = 0;
    double best_sq = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < size(); ++i) {
      const double sq = squared_distance(unit, normalized(i));
      if (sq < best_sq) {
        best_sq = sq;
        best = i;
      }
    }
    return {best, std::sqrt(best_sq)};
  }

  /// Checks bounds and distinctness, then appends in place. Requires exclusive access.
  void append(EvaluatedPoint point) {
    if (point.coords.size() != dim())
      throw UsageError("point dimension does not match the design space");
    if (!space_.contains(point.coords)) {
      std::ostringstream msg;
      msg << "point lies outside the design space bounds";
      throw BoundsError(msg.str());
    }
    const Point unit = space_.normalize(point.coords);
    if (!empty()) {
      const auto [index, dist] = nearest_normalized(unit);
      if (dist <= kDuplicateThreshold) {
        std::ostringstream msg;
        msg << "point duplicates design point " << index << " (normalized distance " << dist
            << ")";
        throw DuplicatePointError(msg.str(), index, dist);
      }
    }
    unit_.insert(unit_.end(), unit.begin(), unit.end());
    points_.push_back(std::move(point));
  }

  friend bool operator==(const Design& a, const Design& b) {
    return a.space_ == b.space_ && a.points_ == b.points_;
  }

 private:
  DesignSpace space_;
  std::vector<EvaluatedPoint> points_;
  std::vector<double> unit_;  // size() * dim(), row-major
};

/// Snapshot-style append: returns a new design and leaves the input untouched.
inline Design validate_and_append(const Design& design, EvaluatedPoint point) {
  Design next = design;
  next.append(std::move(point));
  return next;
}

/// Distance in unit-cube coordinates from a raw candidate to its nearest design point.
inline double min_distance(std::span<const double> candidate, const Design& design) {
  if (design.empty()) throw UsageError("min_distance requires a non-empty design");
  const Point unit = design.space().normalize(candidate);
  return design.nearest_normalized(unit).second;
}

// ---------------------------------------------------------------------------
// Initial designs

struct InitialScheme {
  enum class Kind { corners_center, latin_hypercube };

  Kind kind = Kind::corners_center;
  std::size_t size = 0;  // latin_hypercube only

  static InitialScheme corners_center() { return {Kind::corners_center, 0}; }
  static InitialScheme latin_hypercube(std::size_t n) { return {Kind::latin_hypercube, n}; }

  /// corners_center up to four dimensions, otherwise a 5d-point Latin hypercube.
  static InitialScheme default_for(std::size_t dim) {
    return dim <= 4 ? corners_center() : latin_hypercube(5 * dim);
  }

  std::size_t point_count(std::size_t dim) const {
    return kind == Kind::corners_center ? (std::size_t{1} << dim) + 1 : size;
  }

  friend bool operator==(const InitialScheme&, const InitialScheme&) = default;
};

inline constexpr std::size_t kMaxCornersCenterDim = 10;

/// Raw coordinates of the initial design. Corners are enumerated in binary order with
/// the first axis as the most significant bit, followed by the midpoint.
inline std::vector<Point> initial_design(const DesignSpace& space, const InitialScheme& scheme,
                                         std::uint64_t seed) {
  const std::size_t d = space.dim();
  std::vector<Point> out;

  if (scheme.kind == InitialScheme::Kind::corners_center) {
    if (d > kMaxCornersCenterDim)
      throw ConfigurationError("corners_center is limited to 10 dimensions");
    const std::size_t corners = std::size_t{1} << d;
    out.reserve(corners + 1);
    for (std::size_t c = 0; c < corners; ++c) {
      Point p(d);
      for (std::size_t k = 0; k < d; ++k) {
        const bool high = (c >> (d - 1 - k)) & 1U;
        p[k] = high ? space.upper()[k] : space.lower()[k];
      }
      out.push_back(std::move(p));
    }
    Point mid(d);
    for (std::size_t k = 0; k < d; ++k) mid[k] = 0.5 * (space.lower()[k] + space.upper()[k]);
    out.push_back(std::move(mid));
    return out;
  }

  const std::size_t n = scheme.size;
  if (n < d + 1) throw ConfigurationError("latin_hypercube needs at least d + 1 points");

  Rng rng = make_rng(seed, Stream::initial_design, 0);
  std::uniform_real_distribution<double> jitter(0.0, 1.0);
  std::vector<std::vector<std::size_t>> strata(d, std::vector<std::size_t>(n));
  for (auto& perm : strata) {
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    std::shuffle(perm.begin(), perm.end(), rng);
  }
  out.assign(n, Point(d));
  for (std::size_t j = 0; j < n; ++j) {
    Point unit(d);
    for (std::size_t k = 0; k < d; ++k)
      unit[k] = (static_cast<double>(strata[k][j]) + jitter(rng)) / static_cast<double>(n);
    out[j] = space.denormalize(unit);
  }
  return out;
}

}  // namespace flola
