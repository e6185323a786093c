#pragma once

// Analytic test surfaces as TriMesh.

#include "vatlas/curves.hpp"
#include "vatlas/mesh_builder.hpp"
#include "vatlas/triangulate.hpp"
#include "vatlas/trimesh.hpp"

#include <map>

namespace vatlas::surfaces {

inline TriMesh from_planar(const PlanarTriangulation& tri) {
  TriMesh m;
  for (const auto& p : tri.points) m.vertices.emplace_back(p.x(), p.y(), 0.0);
  m.triangles = tri.triangles;
  m.boundary.assign(m.vertices.size(), 0);
  for (std::size_t i = 0; i < tri.boundary_count; ++i) m.boundary[i] = 1;
  m.tags.assign(m.vertices.size(), VertexTag::Interior);
  m.tri_sheet.assign(m.triangles.size(), 0);
  return m;
}

inline TriMesh flat_disk(double radius, double h) {
  const int n = std::max(12, static_cast<int>(std::ceil(2 * kPi * radius / h)));
  std::vector<std::vector<Vec2>> loops{sample_circle(Vec2(0, 0), radius, n)};
  return from_planar(triangulate_domain(loops, {h}));
}

// Geodesic disk of the unit sphere around the north pole, radius `angle`,
// mapped from the plane by the azimuthal equidistant projection.
inline TriMesh spherical_cap(double angle, double h) {
  TriMesh m = flat_disk(angle, h);
  for (auto& v : m.vertices) {
    const double r = std::hypot(v.x(), v.y());
    const double phi = std::atan2(v.y(), v.x());
    v = Vec3(std::sin(r) * std::cos(phi), std::sin(r) * std::sin(phi), std::cos(r));
  }
  return m;
}

inline TriMesh icosphere(int subdivisions) {
  const double g = (1 + std::sqrt(5.0)) / 2;
  TriMesh m;
  m.vertices = {{-1, g, 0}, {1, g, 0}, {-1, -g, 0}, {1, -g, 0}, {0, -1, g}, {0, 1, g},
                {0, -1, -g}, {0, 1, -g}, {g, 0, -1}, {g, 0, 1}, {-g, 0, -1}, {-g, 0, 1}};
  m.triangles = {{0, 11, 5}, {0, 5, 1}, {0, 1, 7}, {0, 7, 10}, {0, 10, 11}, {1, 5, 9}, {5, 11, 4},
                 {11, 10, 2}, {10, 7, 6}, {7, 1, 8}, {3, 9, 4}, {3, 4, 2}, {3, 2, 6}, {3, 6, 8},
                 {3, 8, 9}, {4, 9, 5}, {2, 4, 11}, {6, 2, 10}, {8, 6, 7}, {9, 8, 1}};
  for (auto& v : m.vertices) v.normalize();
  for (int s = 0; s < subdivisions; ++s) {
    std::map<std::pair<int, int>, int> mid;
    auto midpoint = [&](int a, int b) {
      const auto key = std::minmax(a, b);
      const auto it = mid.find(key);
      if (it != mid.end()) return it->second;
      m.vertices.push_back((m.vertices[a] + m.vertices[b]).normalized());
      return mid[key] = static_cast<int>(m.vertices.size()) - 1;
    };
    std::vector<std::array<int, 3>> next;
    for (const auto& t : m.triangles) {
      const int a = midpoint(t[0], t[1]), b = midpoint(t[1], t[2]), c = midpoint(t[2], t[0]);
      next.push_back({t[0], a, c});
      next.push_back({t[1], b, a});
      next.push_back({t[2], c, b});
      next.push_back({a, b, c});
    }
    m.triangles = std::move(next);
  }
  m.boundary.assign(m.vertices.size(), 0);
  m.tags.assign(m.vertices.size(), VertexTag::Interior);
  m.tri_sheet.assign(m.triangles.size(), 0);
  return m;
}

// Right helicoid z = t * theta / beta over two opposite wedges of opening
// beta, sampled exactly; rims and rulings at the wedge edges are fixed.
inline TriMesh helicoid(double beta, double t, double rho, double h) {
  const std::array<std::vector<Vec2>, 4> br{
      std::vector<Vec2>{{0, 0}, {2 * rho, 0}}, {{0, 0}, {2 * rho * std::cos(beta), 2 * rho * std::sin(beta)}},
      {{0, 0}, {-2 * rho, 0}}, {{0, 0}, {-2 * rho * std::cos(beta), -2 * rho * std::sin(beta)}}};
  auto p = insert_helicoid(Vec2(0, 0), br, t, rho, h);
  for (int k = 0; k <= p.ns; ++k) {
    p.mesh.boundary[p.rim_plus[k]] = 1;
    p.mesh.boundary[p.rim_minus[k]] = 1;
  }
  return p.mesh;
}

// Catenoid band r = cosh(z) for z in [-height, height], on a structured grid.
inline TriMesh catenoid(double height, double h) {
  const int nu = std::max(2, static_cast<int>(std::ceil(2 * height / h)));
  const int nv = std::max(8, static_cast<int>(std::ceil(2 * kPi / h)));
  TriMesh m;
  for (int i = 0; i <= nu; ++i) {
    const double z = -height + 2 * height * i / nu;
    for (int j = 0; j < nv; ++j) {
      const double a = 2 * kPi * j / nv;
      m.vertices.emplace_back(std::cosh(z) * std::cos(a), std::cosh(z) * std::sin(a), z);
      m.boundary.push_back(i == 0 || i == nu);
    }
  }
  auto id = [&](int i, int j) { return i * nv + (j % nv); };
  for (int i = 0; i < nu; ++i)
    for (int j = 0; j < nv; ++j) {
      m.triangles.push_back({id(i, j), id(i, j + 1), id(i + 1, j + 1)});
      m.triangles.push_back({id(i, j), id(i + 1, j + 1), id(i + 1, j)});
    }
  m.tags.assign(m.vertices.size(), VertexTag::Interior);
  m.tri_sheet.assign(m.triangles.size(), 0);
  return m;
}

}  // namespace vatlas::surfaces
