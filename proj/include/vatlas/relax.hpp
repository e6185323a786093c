#pragma once

#include "vatlas/trimesh.hpp"

#include <span>
#include <string>
#include <vector>

namespace vatlas {

struct RelaxOptions {
  double tol_H = 1e-3;    // stop when max |H| over interior vertices is below this (1/length)
  int max_iters = 20000;
  double max_step = 0.0;  // cap on any vertex displacement per iteration; <= 0 disables
  bool parallel = true;
  bool preconditioned = true;  // cotangent-Laplacian solve for the descent direction
};

struct RelaxReport {
  int iterations = 0;
  double initial_residual = 0.0;
  double residual = 0.0;
  double initial_area = 0.0;
  double final_area = 0.0;
  std::vector<double> area_history;      // initial area, then one entry per accepted step
  std::vector<double> residual_history;  // same indexing
  bool converged = false;
  std::string stop_reason;
  double min_angle_deg = 0.0;
};

// Mean curvature magnitude |grad A_i| / (2 A_mixed,i) per vertex; 0 on boundary vertices.
std::vector<double> mean_curvature(const TriMesh& m);
double max_mean_curvature(const TriMesh& m);

// Area descent with fixed boundary. Each step moves interior vertices along
// the preconditioned direction (or minus the area gradient as a fallback)
// with a backtracking line search that only accepts area decrease.
RelaxReport relax(TriMesh& m, const RelaxOptions& opts);

struct GraphCheck {
  bool pass = true;
  double worst = 1.0;  // smallest |n_z| among checked triangles
  Vec3 worst_at{0, 0, 0};
  int checked = 0;
};

// |n_z| >= x_threshold on every triangle whose centroid lies outside all disks.
GraphCheck graph_check(const TriMesh& m, std::span<const Vec2> disk_centers, double rho, double x_threshold);

struct HelicoidFit {
  double residual = 0.0;  // RMS distance / t
  double pitch = 0.0;     // dz / dtheta
  double phase = 0.0;
  int samples = 0;
};

// Least-squares right helicoid z = pitch * theta + phase with vertical axis
// through `center`, fitted to the vertices inside the rho-cylinder.
HelicoidFit helicoid_fit(const TriMesh& m, const Vec2& center, double rho, double t);

struct SeparationCheck {
  bool pass = false;
  double min_gap = 0.0;
  int samples = 0;
};

// Vertical gap between two layers given by triangle sheet ids: each layer's
// vertices are located in the other layer's projection.
SeparationCheck layer_separation(const TriMesh& top, int top_sheet, const TriMesh& bottom, int bottom_sheet);

}  // namespace vatlas
