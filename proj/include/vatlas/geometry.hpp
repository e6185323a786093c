#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <span>
#include <vector>

namespace vatlas {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;

inline constexpr double kPi = std::numbers::pi;

// Exact-sign predicates. A floating-point filter answers almost every call;
// uncertain cases are re-evaluated in exact rational arithmetic.
//   orient2d  > 0 iff a, b, c turn counterclockwise
//   incircle  > 0 iff d lies strictly inside the circle through ccw a, b, c
int orient2d(const Vec2& a, const Vec2& b, const Vec2& c);
int incircle(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d);

inline double cross2(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

// Twice the signed area of a closed polygon (positive when counterclockwise).
double signed_area2(std::span<const Vec2> poly);

inline double signed_area(std::span<const Vec2> poly) { return 0.5 * signed_area2(poly); }

// Crossing-number point-in-polygon test on a closed polyline. Points on the
// boundary give an unspecified answer.
bool point_in_polygon(const Vec2& p, std::span<const Vec2> poly);

// Winding number of a closed polyline around p, computed from accumulated
// turning angle. Independent of point_in_polygon.
int winding_number(const Vec2& p, std::span<const Vec2> poly);

double point_segment_distance(const Vec2& p, const Vec2& a, const Vec2& b);

// Angle in [0, pi] between two undirected-as-given directions.
inline double angle_between(const Vec2& u, const Vec2& v) {
  return std::atan2(std::abs(cross2(u, v)), u.dot(v));
}

// Wraps an angle into (-pi, pi].
inline double wrap_angle(double a) {
  while (a <= -kPi) a += 2 * kPi;
  while (a > kPi) a -= 2 * kPi;
  return a;
}

struct BBox2 {
  Vec2 lo{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
  Vec2 hi{-std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};

  void extend(const Vec2& p) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  double diagonal() const { return (hi - lo).norm(); }
  bool overlaps(const BBox2& o, double pad) const {
    return lo.x() <= o.hi.x() + pad && o.lo.x() <= hi.x() + pad && lo.y() <= o.hi.y() + pad &&
           o.lo.y() <= hi.y() + pad;
  }
};

}  // namespace vatlas
