#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "vatlas/curves.hpp"
#include "vatlas/error.hpp"
#include "vatlas/triangulate.hpp"

#include <random>

using namespace vatlas;

TEST_CASE("orient2d is exact on nearly collinear input") {
  const Vec2 a(0.5, 0.5), b(12, 12), c(24, 24);
  CHECK(orient2d(a, b, c) == 0);
  CHECK(orient2d(Vec2(0, 0), Vec2(1, 0), Vec2(0, 1)) > 0);
  CHECK(orient2d(Vec2(0, 0), Vec2(0, 1), Vec2(1, 0)) < 0);
  // Perturbation below double rounding of the naive determinant.
  const Vec2 p(0.1, 0.1), q(0.3, 0.3);
  const Vec2 r(0.2, std::nextafter(0.2, 1.0));
  CHECK(orient2d(p, q, r) > 0);
}

TEST_CASE("incircle on the unit circle") {
  const Vec2 a(1, 0), b(0, 1), c(-1, 0);
  CHECK(incircle(a, b, c, Vec2(0, 0)) > 0);
  CHECK(incircle(a, b, c, Vec2(0, -1)) == 0);
  CHECK(incircle(a, b, c, Vec2(2, 2)) < 0);
}

TEST_CASE("point_in_polygon agrees with winding number") {
  const auto poly = sample_ellipse(Vec2(0.3, -0.2), 2.0, 0.7, 0.4, 97);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-3, 3);
  for (int i = 0; i < 2000; ++i) {
    const Vec2 p(u(rng), u(rng));
    CHECK(point_in_polygon(p, poly) == (winding_number(p, poly) != 0));
  }
}

TEST_CASE("signed area of a counterclockwise square") {
  std::vector<Vec2> sq{{0, 0}, {2, 0}, {2, 2}, {0, 2}};
  CHECK(signed_area(sq) == doctest::Approx(4.0));
  std::reverse(sq.begin(), sq.end());
  CHECK(signed_area(sq) == doctest::Approx(-4.0));
}

namespace {

double triangulated_area(const PlanarTriangulation& t) {
  double a = 0;
  for (const auto& tri : t.triangles)
    a += 0.5 * cross2(t.points[tri[1]] - t.points[tri[0]], t.points[tri[2]] - t.points[tri[0]]);
  return a;
}

}  // namespace

TEST_CASE("triangulate a nonconvex polygon without Steiner points") {
  std::vector<std::vector<Vec2>> loops{{{0, 0}, {4, 0}, {4, 3}, {2, 1}, {0, 3}}};
  const auto t = triangulate_domain(loops);
  CHECK(t.triangles.size() == 3);
  CHECK(triangulated_area(t) == doctest::Approx(std::abs(signed_area(loops[0]))));
  for (const auto& tri : t.triangles)
    CHECK(orient2d(t.points[tri[0]], t.points[tri[1]], t.points[tri[2]]) > 0);
}

TEST_CASE("triangulate an annulus with Steiner points") {
  std::vector<std::vector<Vec2>> loops{sample_circle(Vec2(0, 0), 1.0, 64),
                                       sample_circle(Vec2(0, 0), 0.4, 24)};
  const auto t = triangulate_domain(loops, {0.1});
  const double exact = std::abs(signed_area(loops[0])) - std::abs(signed_area(loops[1]));
  CHECK(triangulated_area(t) == doctest::Approx(exact).epsilon(1e-12));
  CHECK(t.points.size() > t.boundary_count + 50);
  CHECK(min_angle_deg(t) > 1.0);
  for (const auto& tri : t.triangles) {
    const Vec2 c = (t.points[tri[0]] + t.points[tri[1]] + t.points[tri[2]]) / 3.0;
    CHECK(c.norm() > 0.39);
  }
}

TEST_CASE("unit disk triangulation quality at h = 0.1") {
  std::vector<std::vector<Vec2>> loops{sample_circle(Vec2(0, 0), 1.0, 63)};
  const auto t = triangulate_domain(loops, {0.1});
  CHECK(min_angle_deg(t) > 1.0);
  // Roughly area / (sqrt(3)/4 h^2) triangles.
  const double expected = kPi / (std::sqrt(3.0) / 4 * 0.01);
  CHECK(t.triangles.size() > 0.5 * expected);
  CHECK(t.triangles.size() < 1.5 * expected);
}

TEST_CASE("load_curve_set accepts parametric and explicit curves") {
  const auto set = load_curve_set(std::string_view(R"({
    "curves_a": [{"circle": {"center": [0, 0], "r": 1, "samples": 256}}],
    "curves_b": [{"circle": {"center": [1, 0], "r": 1, "samples": 256}}]
  })"));
  CHECK(set.curves.size() == 2);
  CHECK(set.count(Family::A) == 1);
  CHECK(set.count(Family::B) == 1);
  CHECK(set.diameter() == doctest::Approx(3.0).epsilon(1e-4));

  const auto tri = load_curve_set(std::string_view(R"({"curves_a": [{"points": [[0,0],[0,1],[1,0]]}]})"));
  CHECK(tri.curves.size() == 1);
  CHECK(signed_area(tri.curves[0].points) > 0);
}

namespace {

ErrorKind kind_of(std::string_view doc) {
  try {
    load_curve_set(doc);
  } catch (const AtlasError& e) {
    return e.kind();
  }
  return ErrorKind::Verification;
}

}  // namespace

TEST_CASE("load_curve_set rejects bad input") {
  CHECK(kind_of("{not json") == ErrorKind::Input);
  CHECK(kind_of(R"({"curves_a": [{"points": [[0,0],[1,1]]}]})") == ErrorKind::Input);
  CHECK(kind_of(R"({"curves_a": [{"points": [[0,0],[1,1],[1,0],[0,1]]}]})") == ErrorKind::Input);
  CHECK(kind_of(R"({"curves_a": [{"circle": {"center": [0,0], "r": 1, "samples": 64}},
                                 {"circle": {"center": [1,0], "r": 1, "samples": 64}}]})") ==
        ErrorKind::Input);
  try {
    load_curve_set(std::string_view(R"({"curves_a": [{"circle": {"center": [0,0], "r": 1, "samples": 64}},
                                 {"circle": {"center": [1,0], "r": 1, "samples": 64}}]})"));
  } catch (const AtlasError& e) {
    CHECK(std::string(e.what()).find("intra-family intersection") != std::string::npos);
  }
}
