#pragma once

#include "vatlas/trimesh.hpp"

#include <Eigen/Sparse>

#include <optional>
#include <vector>

namespace vatlas {

struct Curvature {
  std::vector<double> K;       // angle defect / mixed area; 0 on boundary vertices
  std::vector<double> area;    // mixed vertex area
  std::vector<double> defect;  // angle defect; 0 on boundary vertices
};

Curvature discrete_curvature(const TriMesh& m);

// Operators restricted to interior vertices (Dirichlet rows and columns removed).
struct JacobiOperators {
  Eigen::SparseMatrix<double> S;  // cotangent stiffness
  Eigen::SparseMatrix<double> M;  // lumped (mixed) mass
  Eigen::SparseMatrix<double> C;  // mass scaled by K
  std::vector<int> interior;      // interior index -> mesh vertex
};

JacobiOperators assemble_jacobi(const TriMesh& m, const Curvature& k);

struct EigenResult {
  double lambda = 0.0;
  Eigen::VectorXd u;      // M-normalized
  int iterations = 0;
  double residual = 0.0;  // |A u - lambda M u|_{M^-1} / |pencil|
  double pencil_norm = 0.0;
  int below_margin = -1;  // eigenvalues under the margin, from the LDLT inertia (-1 = not checked)
};

// Gershgorin bound on the spectral radius of M^-1 A.
double pencil_norm(const Eigen::SparseMatrix<double>& A, const Eigen::SparseMatrix<double>& M);

// Smallest eigenvalue of A u = lambda M u (A symmetric, M positive diagonal)
// by shifted inverse iteration from the M-normalized all-ones vector. The
// shift starts at a Gershgorin lower bound and moves up behind the Rayleigh
// quotient whenever an LDLT inertia count shows it is still below lambda_1.
EigenResult smallest_eigenvalue(const Eigen::SparseMatrix<double>& A, const Eigen::SparseMatrix<double>& M,
                                double tol = 1e-8, int max_iters = 1000);

// Sum of |K| times vertex area over interior vertices.
double gauss_image_area(const Curvature& k, const TriMesh& m);

enum class Verdict { Stable, Unstable, Indeterminate };
const char* to_string(Verdict v);

struct StabilityReport {
  double lambda1 = 0.0;
  double gauss_image_area = 0.0;
  bool sufficient = false;  // gauss image area < 2 pi
  Verdict verdict = Verdict::Indeterminate;
  double margin = 0.0;
  int iterations = 0;
  double residual = 0.0;
  double pencil_norm = 0.0;
  bool inertia_confirms = false;  // LDLT of (S + 2C) - margin M agrees with the verdict
  bool conflict = false;          // sufficient test true but spectral verdict not STABLE
  int interior_vertices = 0;
};

// Jacobi pencil (S + 2C, M). Throws a verification error on a conflict
// between the two tests unless `allow_conflict` is set.
StabilityReport stability_verdict(const TriMesh& m, double tol = 1e-8, bool allow_conflict = false);

// Same with caller-supplied curvature (test fixtures that pose a Jacobi
// problem on a surface other than the one being minimized).
StabilityReport stability_verdict(const TriMesh& m, const Curvature& k, double tol = 1e-8,
                                  bool allow_conflict = false);

}  // namespace vatlas
