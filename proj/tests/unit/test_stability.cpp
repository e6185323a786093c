#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "../support/fixtures.hpp"
#include "../support/surfaces.hpp"
#include "vatlas/error.hpp"
#include "vatlas/mesh_builder.hpp"
#include "vatlas/relax.hpp"
#include "vatlas/stability.hpp"

#include <Eigen/Eigenvalues>

using namespace vatlas;

namespace {

constexpr double kJ01Squared = 5.783185962946784;  // first zero of J0, squared

double laplace_lambda1(const TriMesh& m) {
  Curvature flat = discrete_curvature(m);
  std::fill(flat.K.begin(), flat.K.end(), 0.0);
  const auto op = assemble_jacobi(m, flat);
  return smallest_eigenvalue(op.S, op.M).lambda;
}

}  // namespace

TEST_CASE("flat disk: K vanishes and lambda1 matches the Bessel zero") {
  const auto m = surfaces::flat_disk(1.0, 0.04);
  const auto k = discrete_curvature(m);
  for (std::size_t v = 0; v < m.vertices.size(); ++v) CHECK(std::abs(k.K[v]) < 1e-9);
  const auto rep = stability_verdict(m);
  CHECK(rep.verdict == Verdict::Stable);
  CHECK(rep.inertia_confirms);
  CHECK(rep.sufficient);
  CHECK(rep.lambda1 == doctest::Approx(kJ01Squared).epsilon(0.05));
  CHECK(rep.residual <= 1e-8);
}

TEST_CASE("inverse iteration agrees with a dense solve on a coarse disk") {
  const auto m = surfaces::flat_disk(1.0, 0.2);
  const auto op = assemble_jacobi(m, discrete_curvature(m));
  REQUIRE(op.interior.size() < 400);
  const auto eig = smallest_eigenvalue(op.S, op.M, 1e-10);
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> dense(Eigen::MatrixXd(op.S), Eigen::MatrixXd(op.M));
  REQUIRE(dense.info() == Eigen::Success);
  CHECK(eig.lambda == doctest::Approx(dense.eigenvalues()[0]).epsilon(1e-8));
  CHECK(dense.eigenvalues()[0] == doctest::Approx(kJ01Squared).epsilon(0.08));
  // eigenvector is the dense one up to sign
  Eigen::VectorXd d = dense.eigenvectors().col(0);
  if (d.dot(op.M * eig.u) < 0) d = -d;
  CHECK((d - eig.u).cwiseAbs().maxCoeff() < 1e-4);
}

TEST_CASE("Rayleigh quotient of the returned vector is the returned eigenvalue") {
  const auto m = surfaces::helicoid(kPi / 2, 0.2, 1.0, 0.08);
  const auto op = assemble_jacobi(m, discrete_curvature(m));
  const Eigen::SparseMatrix<double> Q = op.S + 2.0 * op.C;
  const auto eig = smallest_eigenvalue(Q, op.M);
  const double rq = eig.u.dot(Q * eig.u) / eig.u.dot(op.M * eig.u);
  CHECK(rq == doctest::Approx(eig.lambda).epsilon(1e-10));
}

TEST_CASE("Gauss-Bonnet on a closed sphere") {
  const auto m = surfaces::icosphere(4);
  const auto k = discrete_curvature(m);
  double total = 0;
  for (std::size_t v = 0; v < m.vertices.size(); ++v) total += k.defect[v];
  CHECK(total == doctest::Approx(4 * kPi).epsilon(1e-9));
  double weighted = 0;
  for (std::size_t v = 0; v < m.vertices.size(); ++v) weighted += k.K[v] * k.area[v];
  CHECK(weighted == doctest::Approx(4 * kPi).epsilon(1e-9));
  // pointwise K close to 1
  for (std::size_t v = 0; v < m.vertices.size(); ++v) CHECK(k.K[v] == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("hemisphere Laplace eigenvalue converges to 2") {
  const double e_coarse = std::abs(laplace_lambda1(surfaces::spherical_cap(kPi / 2, 0.1)) - 2.0);
  const double lam = laplace_lambda1(surfaces::spherical_cap(kPi / 2, 0.05));
  const double e_fine = std::abs(lam - 2.0);
  MESSAGE("lambda1 h=0.05: " << lam << ", error h=0.1: " << e_coarse);
  CHECK(lam == doctest::Approx(2.0).epsilon(0.05));
  CHECK(e_fine < e_coarse);
}

TEST_CASE("nested disks: lambda1 decreases as the domain grows") {
  const double small = laplace_lambda1(surfaces::flat_disk(0.5, 0.03));
  const double large = laplace_lambda1(surfaces::flat_disk(1.0, 0.03));
  CHECK(small > large);
  CHECK(small / large == doctest::Approx(4.0).epsilon(0.05));
}

TEST_CASE("cap beyond a hemisphere with K = -1 is unstable") {
  // Q = S - 2M on a geodesic cap of radius 0.6 pi: Laplace lambda1 < 2 there.
  const auto m = surfaces::spherical_cap(0.6 * kPi, 0.06);
  auto k = discrete_curvature(m);
  for (std::size_t v = 0; v < m.vertices.size(); ++v) k.K[v] = m.boundary[v] ? 0.0 : -1.0;
  const auto rep = stability_verdict(m, k);
  CHECK(rep.verdict == Verdict::Unstable);
  CHECK(rep.lambda1 < 0);
  CHECK(rep.inertia_confirms);
  CHECK_FALSE(rep.sufficient);
  CHECK_FALSE(rep.conflict);
}

TEST_CASE("cap inside a hemisphere with K = -1 is stable") {
  const auto m = surfaces::spherical_cap(0.4 * kPi, 0.06);
  auto k = discrete_curvature(m);
  for (std::size_t v = 0; v < m.vertices.size(); ++v) k.K[v] = m.boundary[v] ? 0.0 : -1.0;
  const auto rep = stability_verdict(m, k);
  CHECK(rep.verdict == Verdict::Stable);
  CHECK(rep.inertia_confirms);
}

TEST_CASE("helicoid: negative curvature, stable, small Gauss image") {
  const auto m = surfaces::helicoid(kPi / 2, 0.1, 1.0, 0.05);
  const auto k = discrete_curvature(m);
  int neg = 0, interior = 0;
  for (std::size_t v = 0; v < m.vertices.size(); ++v) {
    if (m.boundary[v]) continue;
    ++interior;
    neg += k.K[v] < 0;
  }
  CHECK(neg > 0.9 * interior);
  const auto rep = stability_verdict(m);
  CHECK(rep.verdict == Verdict::Stable);
  CHECK(rep.gauss_image_area < 2 * kPi);
}

TEST_CASE("concentrated curvature produces a conflict between the tests") {
  // All of the Gauss image at one vertex: the sufficient test says stable,
  // the spectrum says otherwise. This is a discretization failure and must
  // be reported.
  const auto m = surfaces::flat_disk(1.0, 0.03);
  auto k = discrete_curvature(m);
  int center = -1;
  double best = 1e300;
  for (std::size_t v = 0; v < m.vertices.size(); ++v)
    if (!m.boundary[v] && m.vertices[v].norm() < best) best = m.vertices[v].norm(), center = static_cast<int>(v);
  std::fill(k.K.begin(), k.K.end(), 0.0);
  k.K[center] = -5.0 / k.area[center];
  bool verification = false;
  try {
    stability_verdict(m, k);
  } catch (const AtlasError& e) {
    verification = e.kind() == ErrorKind::Verification;
  }
  CHECK(verification);
  const auto rep = stability_verdict(m, k, 1e-8, true);
  CHECK(rep.conflict);
  CHECK(rep.sufficient);
  CHECK(rep.lambda1 < 0);
}

TEST_CASE("relaxed lens surfaces are stable with consistent tests") {
  const auto arr = make_arrangement(fixtures::lens());
  for (const auto& v : enumerate_varifolds(arr)) {
    MeshParams p;
    p.t = 0.02 * arr.curves.diameter();
    p.h = arr.curves.diameter() / 40;
    p = resolve_mesh_params(arr, p);
    auto s = build_surface(build_complex(arr, v), p);
    for (auto& m : s.components) {
      RelaxOptions o;
      o.tol_H = 1e-3 / arr.curves.diameter();
      o.max_step = 0.25 * p.h;
      relax(m, o);
      const auto rep = stability_verdict(m);
      CHECK(rep.verdict == Verdict::Stable);
      CHECK(rep.inertia_confirms);
      CHECK_FALSE(rep.conflict);
      CHECK(rep.gauss_image_area < 2 * kPi);
    }
  }
}
