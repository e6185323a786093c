#pragma once

#include "vatlas/geometry.hpp"

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace vatlas {

enum class VertexTag : std::uint8_t { OnA, OnB, Interior, Seam, Helicoid };

const char* to_string(VertexTag t);

struct TriMesh {
  std::vector<Vec3> vertices;
  std::vector<std::array<int, 3>> triangles;
  std::vector<char> boundary;      // fixed vertices (on A at z=0 or on B at z=t)
  std::vector<VertexTag> tags;
  std::vector<int> tri_sheet;      // owning sheet id, or -1 - band for helicoid triangles

  std::size_t vertex_count() const { return vertices.size(); }
  std::size_t triangle_count() const { return triangles.size(); }
};

struct MeshCheck {
  bool manifold = true;
  bool oriented = true;
  bool boundary_flags_match = true;
  double min_angle_deg = 180.0;
  int boundary_loops = 0;
  long chi = 0;
  std::string problem;  // first defect found, empty when clean

  bool ok() const { return manifold && oriented && boundary_flags_match && problem.empty(); }
};

// V - E + F over unique undirected edges.
long euler_characteristic(const TriMesh& m);

MeshCheck check_mesh(const TriMesh& m);

double triangle_area(const TriMesh& m, int t);
double total_area(const TriMesh& m);
double min_angle_deg(const TriMesh& m);

// Splits into connected components (through shared vertices).
std::vector<TriMesh> split_components(const TriMesh& m);

// Wavefront OBJ: `v x y z` and 1-based `f i j k`.
void write_obj(const TriMesh& m, const std::filesystem::path& path);

}  // namespace vatlas
