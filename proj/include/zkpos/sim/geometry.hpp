#pragma once

#include <span>
#include <stdexcept>
#include <vector>

#include "zkpos/sim/time.hpp"

namespace zkpos::sim {

using SpatialPoint = std::vector<Rational>;

/// A point (L, t) in spacetime; t is a rational time, converted to the
/// fixed-point grid whenever it enters a timing computation.
struct SpacetimePoint {
  SpatialPoint L;
  Rational t;

  Time time() const { return Time::from_rational(t); }
  bool operator==(const SpacetimePoint&) const = default;
};

class GeometryError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct TravelTime {
  Time value;
  /// True when the Euclidean distance is a rational number.
  bool exact = false;
};

/// Euclidean distance at unit signal speed, rounded half-even to the
/// fixed-point grid. This is the single rounding routine used by the event
/// engine and by every party computing an expected time.
TravelTime distance(const SpatialPoint& a, const SpatialPoint& b);

Time arrival_time(Time send_time, const SpatialPoint& from, const SpatialPoint& to);

/// Exact decision of p in conv(vertices) over the rationals.
bool in_convex_hull(const SpatialPoint& p, std::span<const SpatialPoint> vertices);

/// d+1 vertices whose hull contains the spatial projection of S with at least
/// `margin` clearance from every face. d = 1 gives the expanded interval;
/// d >= 2 gives a corner simplex around the expanded bounding box.
std::vector<SpatialPoint> enclosing_simplex(std::span<const SpacetimePoint> S, const Rational& margin);

/// True when the points span an affine space of dimension |points| - 1.
bool affinely_independent(std::span<const SpatialPoint> points);

/// p lies on the ray from a through b (a != b), exact.
bool on_ray(const SpatialPoint& p, const SpatialPoint& a, const SpatialPoint& b);

/// Squared Euclidean distance, exact.
Rational squared_distance(const SpatialPoint& a, const SpatialPoint& b);

}  // namespace zkpos::sim
