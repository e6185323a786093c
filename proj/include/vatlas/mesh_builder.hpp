#pragma once

#include "vatlas/sheet_complex.hpp"
#include "vatlas/trimesh.hpp"

#include <array>
#include <span>
#include <string>
#include <vector>

namespace vatlas {

struct MeshParams {
  double t = 0.0;            // plane separation
  double h = 0.0;            // target edge length
  double rho = 0.0;          // crossing cutout radius; <= 0 picks the default
  double corner_deg = 20.0;  // polyline vertices turning more than this survive resampling
};

// Fills in the default rho = max(3h, 5t), clamped below half the crossing
// spacing and the distance to non-incident edges (clamping adds a warning).
// Throws a geometry error when no admissible rho >= 3h exists.
MeshParams resolve_mesh_params(const Arrangement& arr, MeshParams p, std::vector<std::string>* warnings = nullptr);

// First point where a polyline leaving `center` reaches distance r, and the
// index of the segment holding it.
struct CircleExit {
  Vec2 point;
  int segment = 0;
};
CircleExit circle_exit(std::span<const Vec2> outward, const Vec2& center, double r);

// Arclength resampling at spacing close to h. Endpoints and sharp corners are kept.
std::vector<Vec2> resample_polyline(std::span<const Vec2> pts, double h, double corner_deg = 20.0);

// Helicoid insert over two opposite wedges at one crossing. Branches are
// polylines leaving the center: {A, B} bounding the r > 0 wedge, then {A, B}
// bounding the r < 0 wedge. z = t*s where s in [0, 1] is the fraction of the
// wedge angle swept from the A branch, so every line of constant s through the
// axis is horizontal (a right helicoid piece of pitch t / wedge angle).
struct HelicoidPatch {
  TriMesh mesh;
  int nr = 0;  // radial steps per side
  int ns = 0;  // angular steps per wedge
  Vec2 center{0, 0};
  double t = 0.0, rho = 0.0;
  std::vector<int> rim_plus, rim_minus;  // rim vertices, s from 0 (A) to 1 (B)

  int index(int j, int k) const { return (j + nr) * (ns + 1) + k; }  // j in [-nr, nr]
};

HelicoidPatch insert_helicoid(const Vec2& center, const std::array<std::vector<Vec2>, 4>& branches, double t,
                              double rho, double h);

struct HelicoidSite {
  int crossing = -1;
  int band = -1;        // seam index
  int component = -1;
  Vec2 center{0, 0};
  double rho = 0.0;
  double wedge_angle = 0.0;
};

// A multiplicity-2 face: the two layers over it, for the separation check.
struct DoubleLayer {
  int face = -1;
  int top_sheet = -1, bottom_sheet = -1;
  int top_component = -1, bottom_component = -1;
};

struct BuiltSurface {
  MeshParams params;
  std::vector<TriMesh> components;   // ordered as the sheet complex components
  std::vector<HelicoidSite> helicoids;
  std::vector<DoubleLayer> double_layers;
  double z_min = 0.0, z_max = 0.0;   // range of the harmonic initial heights
};

// Triangulates every sheet, solves harmonic heights, inserts helicoids and
// welds everything into one mesh per component.
BuiltSurface build_surface(const SheetComplex& c, const MeshParams& p);

}  // namespace vatlas
