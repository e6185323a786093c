#include "vatlas/stability.hpp"

#include "vatlas/error.hpp"
#include "vatlas/kernels.hpp"

#include <Eigen/SparseCholesky>

#include <array>

namespace vatlas {

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Stable: return "STABLE";
    case Verdict::Unstable: return "UNSTABLE";
    case Verdict::Indeterminate: return "INDETERMINATE";
  }
  return "?";
}

Curvature discrete_curvature(const TriMesh& m) {
  Curvature k;
  const std::size_t nv = m.vertices.size();
  mixed_areas_serial(m, k.area);
  std::vector<double> angle_sum(nv, 0.0);
  for (const auto& t : m.triangles) {
    for (int c = 0; c < 3; ++c) {
      const Vec3 u = m.vertices[t[(c + 1) % 3]] - m.vertices[t[c]];
      const Vec3 w = m.vertices[t[(c + 2) % 3]] - m.vertices[t[c]];
      const double s = u.cross(w).norm();
      if (s == 0) throw numerical_error("degenerate triangle in curvature computation");
      angle_sum[t[c]] += std::atan2(s, u.dot(w));
    }
  }
  k.K.assign(nv, 0.0);
  k.defect.assign(nv, 0.0);
  for (std::size_t v = 0; v < nv; ++v) {
    if (m.boundary[v]) continue;
    k.defect[v] = 2 * kPi - angle_sum[v];
    k.K[v] = k.area[v] > 0 ? k.defect[v] / k.area[v] : 0.0;
  }
  return k;
}

JacobiOperators assemble_jacobi(const TriMesh& m, const Curvature& k) {
  JacobiOperators op;
  const int nv = static_cast<int>(m.vertices.size());
  std::vector<int> idx(nv, -1);
  for (int v = 0; v < nv; ++v)
    if (!m.boundary[v]) {
      idx[v] = static_cast<int>(op.interior.size());
      op.interior.push_back(v);
    }
  const int n = static_cast<int>(op.interior.size());
  std::vector<Eigen::Triplet<double>> s, mass, c;
  for (const auto& t : m.triangles) {
    for (int q = 0; q < 3; ++q) {
      const int o = t[q], i = t[(q + 1) % 3], j = t[(q + 2) % 3];
      const Vec3 u = m.vertices[i] - m.vertices[o], w = m.vertices[j] - m.vertices[o];
      const double w_ij = 0.5 * u.dot(w) / u.cross(w).norm();
      for (auto [a, b] : {std::pair{i, j}, std::pair{j, i}}) {
        if (idx[a] < 0) continue;
        s.emplace_back(idx[a], idx[a], w_ij);
        if (idx[b] >= 0) s.emplace_back(idx[a], idx[b], -w_ij);
      }
    }
  }
  for (int r = 0; r < n; ++r) {
    const int v = op.interior[r];
    mass.emplace_back(r, r, k.area[v]);
    c.emplace_back(r, r, k.K[v] * k.area[v]);
  }
  op.S.resize(n, n);
  op.M.resize(n, n);
  op.C.resize(n, n);
  op.S.setFromTriplets(s.begin(), s.end());
  op.M.setFromTriplets(mass.begin(), mass.end());
  op.C.setFromTriplets(c.begin(), c.end());
  return op;
}

double pencil_norm(const Eigen::SparseMatrix<double>& A, const Eigen::SparseMatrix<double>& M) {
  const Eigen::VectorXd md = M.diagonal();
  Eigen::VectorXd row = Eigen::VectorXd::Zero(A.rows());
  for (int col = 0; col < A.outerSize(); ++col)
    for (Eigen::SparseMatrix<double>::InnerIterator it(A, col); it; ++it)
      row[it.row()] += std::abs(it.value()) / std::sqrt(md[it.row()] * md[it.col()]);
  return row.size() ? row.maxCoeff() : 0.0;
}

namespace {

using Factor = Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>>;

// Number of negative pivots of A - sigma M (Sylvester inertia), or -1 if the
// factorization broke down.
int negative_pivots(const Eigen::SparseMatrix<double>& A, const Eigen::SparseMatrix<double>& M, double sigma,
                    Factor& f) {
  const Eigen::SparseMatrix<double> shifted = A - sigma * M;
  f.compute(shifted);
  if (f.info() != Eigen::Success) return -1;
  const Eigen::VectorXd d = f.vectorD();
  int neg = 0;
  for (int i = 0; i < d.size(); ++i) {
    if (!std::isfinite(d[i]) || d[i] == 0) return -1;
    neg += d[i] < 0;
  }
  return neg;
}

double gershgorin_lower(const Eigen::SparseMatrix<double>& A, const Eigen::SparseMatrix<double>& M) {
  const Eigen::VectorXd md = M.diagonal();
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(A.rows()), off = Eigen::VectorXd::Zero(A.rows());
  for (int col = 0; col < A.outerSize(); ++col)
    for (Eigen::SparseMatrix<double>::InnerIterator it(A, col); it; ++it) {
      const double v = it.value() / std::sqrt(md[it.row()] * md[it.col()]);
      if (it.row() == it.col()) diag[it.row()] += v;
      else off[it.row()] += std::abs(v);
    }
  return (diag - off).minCoeff();
}

}  // namespace

EigenResult smallest_eigenvalue(const Eigen::SparseMatrix<double>& A, const Eigen::SparseMatrix<double>& M,
                                double tol, int max_iters) {
  const int n = static_cast<int>(A.rows());
  if (n == 0) throw numerical_error("empty eigenvalue problem (no interior vertices)");
  for (int i = 0; i < n; ++i)
    if (!(M.coeff(i, i) > 0)) throw numerical_error("mass matrix is not positive");

  EigenResult res;
  res.pencil_norm = pencil_norm(A, M);
  const double scale = std::max(res.pencil_norm, 1e-300);

  double sigma = gershgorin_lower(A, M) - 1e-3 * scale;
  // two factor slots; the shifted pencil is refactored into the spare one
  std::array<Factor, 2> fac;
  int cur = 0;
  if (negative_pivots(A, M, sigma, fac[0]) != 0) throw numerical_error("factorization of the shifted pencil failed");

  Eigen::VectorXd u = Eigen::VectorXd::Ones(n);
  u /= std::sqrt(u.dot(M * u));
  double lambda = u.dot(A * u);
  for (int it = 1; it <= max_iters; ++it) {
    Eigen::VectorXd w = fac[cur].solve(M * u);
    if (fac[cur].info() != Eigen::Success || !w.allFinite()) throw numerical_error("shifted solve failed");
    u = w / std::sqrt(w.dot(M * w));
    const Eigen::VectorXd Au = A * u, Mu = M * u;
    lambda = u.dot(Au);
    const Eigen::VectorXd r = Au - lambda * Mu;
    res.residual = std::sqrt(r.cwiseQuotient(M.diagonal()).dot(r)) / scale;
    res.iterations = it;
    if (res.residual <= tol) break;
    // Move the shift up behind the Rayleigh quotient if it stays below lambda_1.
    const double gap = lambda - sigma;
    for (double frac : {0.9, 0.5}) {
      const double candidate = lambda - (1 - frac) * gap - 1e-12 * scale;
      if (candidate <= sigma) break;
      if (negative_pivots(A, M, candidate, fac[1 - cur]) == 0) {
        sigma = candidate;
        cur = 1 - cur;
        break;
      }
    }
    if (it == max_iters) throw numerical_error("inverse iteration did not converge");
  }
  res.lambda = lambda;
  res.u = u;
  return res;
}

double gauss_image_area(const Curvature& k, const TriMesh& m) {
  double s = 0;
  for (std::size_t v = 0; v < m.vertices.size(); ++v)
    if (!m.boundary[v]) s += std::abs(k.K[v]) * k.area[v];
  return s;
}

StabilityReport stability_verdict(const TriMesh& m, double tol, bool allow_conflict) {
  return stability_verdict(m, discrete_curvature(m), tol, allow_conflict);
}

StabilityReport stability_verdict(const TriMesh& m, const Curvature& k, double tol, bool allow_conflict) {
  StabilityReport rep;
  const auto op = assemble_jacobi(m, k);
  rep.interior_vertices = static_cast<int>(op.interior.size());
  rep.gauss_image_area = gauss_image_area(k, m);
  rep.sufficient = rep.gauss_image_area < 2 * kPi;
  if (op.interior.empty()) {
    // Nothing to vary: the quadratic form is vacuously positive.
    rep.verdict = Verdict::Stable;
    rep.inertia_confirms = true;
    return rep;
  }
  const Eigen::SparseMatrix<double> Q = op.S + 2.0 * op.C;
  const auto eig = smallest_eigenvalue(Q, op.M, tol);
  rep.lambda1 = eig.lambda;
  rep.iterations = eig.iterations;
  rep.residual = eig.residual;
  rep.pencil_norm = eig.pencil_norm;
  rep.margin = 10 * tol * eig.pencil_norm;
  if (rep.lambda1 > rep.margin) rep.verdict = Verdict::Stable;
  else if (rep.lambda1 < -rep.margin) rep.verdict = Verdict::Unstable;
  else rep.verdict = Verdict::Indeterminate;

  Factor f;
  const int neg = negative_pivots(Q, op.M, rep.verdict == Verdict::Unstable ? -rep.margin : rep.margin, f);
  rep.inertia_confirms = rep.verdict == Verdict::Stable     ? neg == 0
                         : rep.verdict == Verdict::Unstable ? neg > 0
                                                            : true;

  if (rep.sufficient && rep.verdict != Verdict::Stable) {
    rep.conflict = true;
    if (!allow_conflict)
      throw verification_error("stability tests disagree: gauss image area " + std::to_string(rep.gauss_image_area) +
                               " < 2 pi but lambda1 = " + std::to_string(rep.lambda1));
    rep.verdict = Verdict::Stable;
  }
  return rep;
}

}  // namespace vatlas
