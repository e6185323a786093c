#include "vatlas/geometry.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <limits>

namespace vatlas {

namespace {

using Rational = boost::multiprecision::cpp_rational;

constexpr double kEps = std::numeric_limits<double>::epsilon() / 2;  // 2^-53
constexpr double kOrientBound = (3.0 + 16.0 * kEps) * kEps;
constexpr double kInCircleBound = (10.0 + 96.0 * kEps) * kEps;

template <typename T>
int sign_of(const T& v) {
  return v > 0 ? 1 : (v < 0 ? -1 : 0);
}

int orient2d_exact(const Vec2& a, const Vec2& b, const Vec2& c) {
  Rational acx = Rational(a.x()) - Rational(c.x());
  Rational bcx = Rational(b.x()) - Rational(c.x());
  Rational acy = Rational(a.y()) - Rational(c.y());
  Rational bcy = Rational(b.y()) - Rational(c.y());
  return sign_of(acx * bcy - acy * bcx);
}

int incircle_exact(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d) {
  Rational adx = Rational(a.x()) - Rational(d.x()), ady = Rational(a.y()) - Rational(d.y());
  Rational bdx = Rational(b.x()) - Rational(d.x()), bdy = Rational(b.y()) - Rational(d.y());
  Rational cdx = Rational(c.x()) - Rational(d.x()), cdy = Rational(c.y()) - Rational(d.y());
  Rational alift = adx * adx + ady * ady;
  Rational blift = bdx * bdx + bdy * bdy;
  Rational clift = cdx * cdx + cdy * cdy;
  Rational det = alift * (bdx * cdy - cdx * bdy) + blift * (cdx * ady - adx * cdy) +
                 clift * (adx * bdy - bdx * ady);
  return sign_of(det);
}

}  // namespace

int orient2d(const Vec2& a, const Vec2& b, const Vec2& c) {
  const double detleft = (a.x() - c.x()) * (b.y() - c.y());
  const double detright = (a.y() - c.y()) * (b.x() - c.x());
  const double det = detleft - detright;
  const double errbound = kOrientBound * (std::abs(detleft) + std::abs(detright));
  if (det > errbound || -det > errbound) return sign_of(det);
  return orient2d_exact(a, b, c);
}

int incircle(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d) {
  const double adx = a.x() - d.x(), ady = a.y() - d.y();
  const double bdx = b.x() - d.x(), bdy = b.y() - d.y();
  const double cdx = c.x() - d.x(), cdy = c.y() - d.y();

  const double bdxcdy = bdx * cdy, cdxbdy = cdx * bdy;
  const double cdxady = cdx * ady, adxcdy = adx * cdy;
  const double adxbdy = adx * bdy, bdxady = bdx * ady;
  const double alift = adx * adx + ady * ady;
  const double blift = bdx * bdx + bdy * bdy;
  const double clift = cdx * cdx + cdy * cdy;

  const double det =
      alift * (bdxcdy - cdxbdy) + blift * (cdxady - adxcdy) + clift * (adxbdy - bdxady);
  const double permanent = (std::abs(bdxcdy) + std::abs(cdxbdy)) * alift +
                           (std::abs(cdxady) + std::abs(adxcdy)) * blift +
                           (std::abs(adxbdy) + std::abs(bdxady)) * clift;
  const double errbound = kInCircleBound * permanent;
  if (det > errbound || -det > errbound) return sign_of(det);
  return incircle_exact(a, b, c, d);
}

double signed_area2(std::span<const Vec2> poly) {
  const std::size_t n = poly.size();
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += cross2(poly[i], poly[(i + 1) % n]);
  return s;
}

bool point_in_polygon(const Vec2& p, std::span<const Vec2> poly) {
  bool inside = false;
  const std::size_t n = poly.size();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const Vec2& a = poly[i];
    const Vec2& b = poly[j];
    if ((a.y() > p.y()) != (b.y() > p.y())) {
      const double x = a.x() + (p.y() - a.y()) * (b.x() - a.x()) / (b.y() - a.y());
      if (p.x() < x) inside = !inside;
    }
  }
  return inside;
}

int winding_number(const Vec2& p, std::span<const Vec2> poly) {
  double total = 0.0;
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 u = poly[i] - p;
    const Vec2 v = poly[(i + 1) % n] - p;
    total += std::atan2(cross2(u, v), u.dot(v));
  }
  return static_cast<int>(std::lround(total / (2 * kPi)));
}

double point_segment_distance(const Vec2& p, const Vec2& a, const Vec2& b) {
  const Vec2 ab = b - a;
  const double len2 = ab.squaredNorm();
  if (len2 == 0.0) return (p - a).norm();
  const double s = std::clamp((p - a).dot(ab) / len2, 0.0, 1.0);
  return (p - (a + s * ab)).norm();
}

}  // namespace vatlas
