#pragma once

#include "vatlas/trimesh.hpp"

#include <vector>

namespace vatlas {

// Threads used by the parallel kernels: VARIFOLD_ATLAS_THREADS if set, else
// the OpenMP default. set_thread_cap overrides both (0 restores the default).
int kernel_threads();
void set_thread_cap(int n);

// Vertex -> incident triangles, CSR layout. The parallel kernels gather over
// it so each vertex is written by one thread only.
struct VertexStar {
  std::vector<int> offset;  // size V + 1
  std::vector<int> tris;
  std::vector<unsigned char> corner;  // which corner of the triangle the vertex is

  explicit VertexStar(const TriMesh& m);
};

// Serial reference versions scatter triangle contributions; parallel versions
// gather per vertex. Results agree to rounding.
double area_serial(const TriMesh& m);
double area_parallel(const TriMesh& m);

void area_gradient_serial(const TriMesh& m, std::vector<Vec3>& grad);
void area_gradient_parallel(const TriMesh& m, const VertexStar& star, std::vector<Vec3>& grad);

// Mixed (Voronoi with obtuse clamping) vertex areas.
void mixed_areas_serial(const TriMesh& m, std::vector<double>& area);
void mixed_areas_parallel(const TriMesh& m, const VertexStar& star, std::vector<double>& area);

// Per-corner contributions, shared by both variants.
Vec3 corner_area_gradient(const Vec3& p, const Vec3& q, const Vec3& r);  // d area(p,q,r) / dp
double corner_mixed_area(const Vec3& p, const Vec3& q, const Vec3& r);   // share of p

}  // namespace vatlas
