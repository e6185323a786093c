#include "vatlas/kernels.hpp"

#include <omp.h>

#include <atomic>
#include <cstdlib>
#include <string>

namespace vatlas {

namespace {

std::atomic<int> g_cap{0};

int env_threads() {
  const char* s = std::getenv("VARIFOLD_ATLAS_THREADS");
  if (!s || !*s) return 0;
  try {
    return std::max(0, std::stoi(s));
  } catch (...) {
    return 0;
  }
}

}  // namespace

int kernel_threads() {
  if (const int cap = g_cap.load(); cap > 0) return cap;
  if (const int env = env_threads(); env > 0) return std::min(env, omp_get_max_threads());
  return omp_get_max_threads();
}

void set_thread_cap(int n) { g_cap.store(std::max(0, n)); }

VertexStar::VertexStar(const TriMesh& m) {
  const std::size_t nv = m.vertices.size();
  offset.assign(nv + 1, 0);
  for (const auto& t : m.triangles)
    for (int v : t) ++offset[v + 1];
  for (std::size_t v = 0; v < nv; ++v) offset[v + 1] += offset[v];
  tris.resize(offset.back());
  corner.resize(offset.back());
  std::vector<int> fill(offset.begin(), offset.end() - 1);
  for (int t = 0; t < static_cast<int>(m.triangles.size()); ++t) {
    for (int k = 0; k < 3; ++k) {
      const int v = m.triangles[t][k];
      tris[fill[v]] = t;
      corner[fill[v]] = static_cast<unsigned char>(k);
      ++fill[v];
    }
  }
}

Vec3 corner_area_gradient(const Vec3& p, const Vec3& q, const Vec3& r) {
  const Vec3 n = (q - p).cross(r - p);
  const double len = n.norm();
  if (len == 0) return Vec3::Zero();
  return 0.5 * (n / len).cross(r - q);
}

double corner_mixed_area(const Vec3& p, const Vec3& q, const Vec3& r) {
  const Vec3 pq = q - p, pr = r - p, qr = r - q;
  const double area = 0.5 * pq.cross(pr).norm();
  if (area == 0) return 0.0;
  const double dp = pq.dot(pr), dq = -pq.dot(qr), dr = pr.dot(qr);
  if (dp < 0) return 0.5 * area;
  if (dq < 0 || dr < 0) return 0.25 * area;
  // cot at q = dq / (2 area), cot at r = dr / (2 area)
  return (pr.squaredNorm() * dq + pq.squaredNorm() * dr) / (16.0 * area);
}

double area_serial(const TriMesh& m) {
  double a = 0;
  for (const auto& t : m.triangles)
    a += 0.5 * (m.vertices[t[1]] - m.vertices[t[0]]).cross(m.vertices[t[2]] - m.vertices[t[0]]).norm();
  return a;
}

double area_parallel(const TriMesh& m) {
  const long nt = static_cast<long>(m.triangles.size());
  double a = 0;
#pragma omp parallel for reduction(+ : a) num_threads(kernel_threads()) schedule(static)
  for (long i = 0; i < nt; ++i) {
    const auto& t = m.triangles[i];
    a += 0.5 * (m.vertices[t[1]] - m.vertices[t[0]]).cross(m.vertices[t[2]] - m.vertices[t[0]]).norm();
  }
  return a;
}

void area_gradient_serial(const TriMesh& m, std::vector<Vec3>& grad) {
  grad.assign(m.vertices.size(), Vec3::Zero());
  for (const auto& t : m.triangles)
    for (int k = 0; k < 3; ++k)
      grad[t[k]] += corner_area_gradient(m.vertices[t[k]], m.vertices[t[(k + 1) % 3]], m.vertices[t[(k + 2) % 3]]);
}

void area_gradient_parallel(const TriMesh& m, const VertexStar& star, std::vector<Vec3>& grad) {
  const long nv = static_cast<long>(m.vertices.size());
  grad.resize(nv);
#pragma omp parallel for num_threads(kernel_threads()) schedule(static)
  for (long v = 0; v < nv; ++v) {
    Vec3 g = Vec3::Zero();
    for (int i = star.offset[v]; i < star.offset[v + 1]; ++i) {
      const auto& t = m.triangles[star.tris[i]];
      const int k = star.corner[i];
      g += corner_area_gradient(m.vertices[t[k]], m.vertices[t[(k + 1) % 3]], m.vertices[t[(k + 2) % 3]]);
    }
    grad[v] = g;
  }
}

void mixed_areas_serial(const TriMesh& m, std::vector<double>& area) {
  area.assign(m.vertices.size(), 0.0);
  for (const auto& t : m.triangles)
    for (int k = 0; k < 3; ++k)
      area[t[k]] += corner_mixed_area(m.vertices[t[k]], m.vertices[t[(k + 1) % 3]], m.vertices[t[(k + 2) % 3]]);
}

void mixed_areas_parallel(const TriMesh& m, const VertexStar& star, std::vector<double>& area) {
  const long nv = static_cast<long>(m.vertices.size());
  area.resize(nv);
#pragma omp parallel for num_threads(kernel_threads()) schedule(static)
  for (long v = 0; v < nv; ++v) {
    double a = 0;
    for (int i = star.offset[v]; i < star.offset[v + 1]; ++i) {
      const auto& t = m.triangles[star.tris[i]];
      const int k = star.corner[i];
      a += corner_mixed_area(m.vertices[t[k]], m.vertices[t[(k + 1) % 3]], m.vertices[t[(k + 2) % 3]]);
    }
    area[v] = a;
  }
}

}  // namespace vatlas
