#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "../support/fixtures.hpp"
#include "vatlas/error.hpp"
#include "vatlas/mesh_builder.hpp"

using namespace vatlas;

namespace {

// Largest h (halving from diam/40) whose default rho is admissible.
MeshParams params_for(const Arrangement& arr, double t_rel) {
  MeshParams p;
  p.t = t_rel * arr.curves.diameter();
  for (double h = arr.curves.diameter() / 40; h > 1e-4; h *= 0.5) {
    p.h = h;
    try {
      return resolve_mesh_params(arr, p);
    } catch (const AtlasError&) {
    }
  }
  FAIL("no admissible mesh parameters");
  return p;
}

double distance_to_family(const Arrangement& arr, const Vec2& x, Family f) {
  double d = 1e300;
  for (const auto& c : arr.curves.curves) {
    if (c.family != f) continue;
    for (std::size_t i = 0; i < c.size(); ++i) d = std::min(d, point_segment_distance(x, c.point(i), c.point(i + 1)));
  }
  return d;
}

void check_surface(const Arrangement& arr, const SheetComplex& cx, const BuiltSurface& s) {
  const double t = s.params.t;
  REQUIRE(static_cast<int>(s.components.size()) == cx.component_count());
  long chi = 0;
  for (std::size_t k = 0; k < s.components.size(); ++k) {
    const auto& m = s.components[k];
    const auto check = check_mesh(m);
    CHECK_MESSAGE(check.ok(), check.problem);
    CHECK(check.min_angle_deg > 1.0);
    CHECK(check.chi == cx.topology[k].chi);
    CHECK(check.boundary_loops == cx.topology[k].boundary_loops);
    chi += check.chi;
    for (std::size_t v = 0; v < m.vertices.size(); ++v) {
      if (!m.boundary[v]) continue;
      const Family f = m.tags[v] == VertexTag::OnA ? Family::A : Family::B;
      REQUIRE((m.tags[v] == VertexTag::OnA || m.tags[v] == VertexTag::OnB));
      CHECK(m.vertices[v].z() == (f == Family::A ? 0.0 : t));
      CHECK(distance_to_family(arr, m.vertices[v].head<2>(), f) <= arr.eps_geo);
    }
  }
  CHECK(chi == cw_euler_characteristic(cx));
  CHECK(s.z_min >= -1e-12 * t);
  CHECK(s.z_max <= t * (1 + 1e-12));
}

}  // namespace

TEST_CASE("resampling keeps endpoints and corners") {
  const std::vector<Vec2> l{{0, 0}, {1, 0}, {1, 1}};
  const auto r = resample_polyline(l, 0.1);
  CHECK(r.size() == 21);
  CHECK(r.front() == l.front());
  CHECK(r.back() == l.back());
  CHECK(std::find(r.begin(), r.end(), Vec2(1, 0)) != r.end());
}

TEST_CASE("circle exit lands on the circle and on the branch") {
  const std::vector<Vec2> branch{{0, 0}, {0.3, 0.1}, {0.9, 0.2}};
  const auto ex = circle_exit(branch, Vec2(0, 0), 0.5);
  CHECK(ex.point.norm() == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(ex.segment == 1);
  CHECK(point_segment_distance(ex.point, branch[1], branch[2]) < 1e-14);
}

TEST_CASE("orthogonal helicoid insert") {
  const double t = 0.1, rho = 0.05, h = 0.02;
  const std::array<std::vector<Vec2>, 4> br{std::vector<Vec2>{{0, 0}, {1, 0}}, {{0, 0}, {0, 1}},
                                            {{0, 0}, {-1, 0}}, {{0, 0}, {0, -1}}};
  const auto p = insert_helicoid(Vec2(0, 0), br, t, rho, h);
  for (const auto& v : p.mesh.vertices) {
    CHECK(v.z() >= 0.0);
    CHECK(v.z() <= t);
  }
  for (int k = 0; k <= p.ns; ++k) {
    const Vec3& a = p.mesh.vertices[p.rim_plus[k]];
    const Vec3& b = p.mesh.vertices[p.rim_minus[k]];
    CHECK(a.head<2>().norm() == doctest::Approx(rho).epsilon(1e-12));
    CHECK(b.head<2>().norm() == doctest::Approx(rho).epsilon(1e-12));
    CHECK(a.z() == doctest::Approx(b.z()));
    // Lines of constant s through the axis are horizontal: a right helicoid.
    CHECK((a.head<2>() + b.head<2>()).norm() < 1e-12);
  }
  // Standalone, the rims are open boundary without the fixed flag.
  const auto check = check_mesh(p.mesh);
  CHECK(check.manifold);
  CHECK(check.oriented);
  CHECK(check.chi == 1);
  CHECK(check.min_angle_deg > 1.0);

  SUBCASE("swapping A and B mirrors the patch") {
    // Reflecting in the diagonal exchanges the two families.
    auto mirror = [](const std::vector<Vec2>& b) {
      std::vector<Vec2> out;
      for (const auto& x : b) out.emplace_back(x.y(), x.x());
      return out;
    };
    const auto q = insert_helicoid(Vec2(0, 0), {mirror(br[0]), mirror(br[1]), mirror(br[2]), mirror(br[3])}, t,
                                   rho, h);
    REQUIRE(q.mesh.vertices.size() == p.mesh.vertices.size());
    for (std::size_t v = 0; v < p.mesh.vertices.size(); ++v) {
      const Vec3& a = p.mesh.vertices[v];
      const Vec3& b = q.mesh.vertices[v];
      CHECK(std::abs(a.x() - b.y()) < 1e-12);
      CHECK(std::abs(a.y() - b.x()) < 1e-12);
      CHECK(a.z() == b.z());
    }
  }
}

TEST_CASE("helicoid flattens as t goes to zero") {
  const double t = 1e-3;
  const std::array<std::vector<Vec2>, 4> br{std::vector<Vec2>{{0, 0}, {1, 0}}, {{0, 0}, {0, 1}},
                                            {{0, 0}, {-1, 0}}, {{0, 0}, {0, -1}}};
  const auto p = insert_helicoid(Vec2(0, 0), br, t, 0.05, 0.02);
  double zmax = 0;
  for (const auto& v : p.mesh.vertices) zmax = std::max(zmax, std::abs(v.z()));
  CHECK(zmax <= t);
  CHECK(check_mesh(p.mesh).min_angle_deg > 1.0);
}

TEST_CASE("lens=0 builds one annulus-like surface") {
  const auto arr = make_arrangement(fixtures::lens());
  const auto vs = enumerate_varifolds(arr);
  const auto cx = build_complex(arr, vs[0]);
  const auto p = params_for(arr, 0.02);
  const auto s = build_surface(cx, p);
  REQUIRE(s.components.size() == 1);
  const auto check = check_mesh(s.components[0]);
  CHECK(check.chi == 0);
  CHECK(check.boundary_loops == 2);
  CHECK(s.helicoids.size() == 2);
  check_surface(arr, cx, s);
}

TEST_CASE("lens=2 builds two disks") {
  const auto arr = make_arrangement(fixtures::lens());
  const auto vs = enumerate_varifolds(arr);
  const auto cx = build_complex(arr, vs[1]);
  const auto s = build_surface(cx, params_for(arr, 0.02));
  REQUIRE(s.components.size() == 2);
  for (const auto& m : s.components) CHECK(check_mesh(m).chi == 1);
  CHECK(s.double_layers.size() == 1);
  check_surface(arr, cx, s);
}

TEST_CASE("disjoint circles give flat disks at both heights") {
  const auto arr = make_arrangement(fixtures::disjoint_circles());
  const auto cx = build_complex(arr, enumerate_varifolds(arr)[0]);
  MeshParams p;
  p.t = 0.1;
  p.h = 0.1;
  const auto s = build_surface(cx, resolve_mesh_params(arr, p));
  REQUIRE(s.components.size() == 2);
  for (const auto& m : s.components) {
    const double z0 = m.vertices[0].z();
    for (const auto& v : m.vertices) CHECK(v.z() == doctest::Approx(z0).epsilon(1e-12));
  }
  std::vector<double> z{s.components[0].vertices[0].z(), s.components[1].vertices[0].z()};
  std::sort(z.begin(), z.end());
  CHECK(z[0] == doctest::Approx(0.0));
  CHECK(z[1] == doctest::Approx(0.1));
}

TEST_CASE("single A disk stays at height zero") {
  const auto arr = make_arrangement(fixtures::single_circle());
  const auto cx = build_complex(arr, enumerate_varifolds(arr)[0]);
  MeshParams p;
  p.t = 0.1;
  const auto s = build_surface(cx, resolve_mesh_params(arr, p));
  for (const auto& v : s.components.at(0).vertices) CHECK(std::abs(v.z()) < 1e-14);
}

TEST_CASE("rho too large for the crossing spacing is rejected") {
  const auto arr = make_arrangement(fixtures::lens());
  MeshParams p;
  p.t = 0.06;
  p.h = 0.05;
  p.rho = 1.0;  // crossings are sqrt(3) apart
  CHECK_THROWS_AS(resolve_mesh_params(arr, p), AtlasError);
  p.rho = 0;
  p.h = 0.4;  // 3h would exceed half the spacing
  CHECK_THROWS_AS(resolve_mesh_params(arr, p), AtlasError);
}

TEST_CASE("mesh chi matches both oracles on the corpus") {
  for (const auto& cfg : fixtures::oracle_corpus()) {
    CAPTURE(cfg.name);
    const auto arr = make_arrangement(cfg.curves);
    const auto p = params_for(arr, 0.02);
    for (const auto& v : enumerate_varifolds(arr)) {
      const auto cx = build_complex(arr, v);
      const auto s = build_surface(cx, p);
      check_surface(arr, cx, s);
      long chi = 0;
      for (const auto& m : s.components) chi += euler_characteristic(m);
      CHECK(chi == compute_stats(arr, v).chi);
    }
  }
}
