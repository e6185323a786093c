#pragma once

#include "vatlas/geometry.hpp"

#include <array>
#include <cstdint>
#include <span>
#include <vector>

namespace vatlas {

struct PlanarTriangulation {
  std::vector<Vec2> points;                   // loop points in input order, then Steiner points
  std::vector<std::array<int, 3>> triangles;  // counterclockwise
  std::size_t boundary_count = 0;
};

struct TriangulateOptions {
  double h = 0.0;  // Steiner lattice spacing; <= 0 triangulates the boundary only
  std::uint64_t seed = 0x5eed5eedULL;
};

// Constrained Delaunay triangulation of the region bounded by closed loops
// (even-odd rule, so holes need no particular orientation). With h > 0 a
// jittered hexagonal lattice of Steiner points is added away from the
// boundary. Loops must be simple and pairwise disjoint.
PlanarTriangulation triangulate_domain(std::span<const std::vector<Vec2>> loops,
                                       const TriangulateOptions& opts = {});

// Smallest interior angle (degrees) over a planar triangulation.
double min_angle_deg(const PlanarTriangulation& tri);

}  // namespace vatlas
