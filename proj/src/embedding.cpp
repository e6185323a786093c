#include "vatlas/embedding.hpp"

#include <boost/functional/hash.hpp>

#include <unordered_map>

namespace vatlas {

namespace {

struct Tri {
  int mesh, index;
  Vec3 p[3];
  std::array<int, 3> v;
};

double orient3(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d) { return (b - a).cross(c - a).dot(d - a); }

int sign(double x, double eps) { return x > eps ? 1 : (x < -eps ? -1 : 0); }

// Segment pq crosses the interior of triangle abc (strictly, up to eps).
bool segment_hits(const Vec3& p, const Vec3& q, const Vec3& a, const Vec3& b, const Vec3& c, double eps3,
                  Vec3* hit) {
  const int sp = sign(orient3(a, b, c, p), eps3), sq = sign(orient3(a, b, c, q), eps3);
  if (sp == 0 || sq == 0 || sp == sq) return false;
  const int s1 = sign(orient3(p, q, a, b), eps3), s2 = sign(orient3(p, q, b, c), eps3),
            s3 = sign(orient3(p, q, c, a), eps3);
  if (s1 == 0 || s2 == 0 || s3 == 0 || s1 != s2 || s2 != s3) return false;
  if (hit) {
    const double dp = orient3(a, b, c, p), dq = orient3(a, b, c, q);
    *hit = p + dp / (dp - dq) * (q - p);
  }
  return true;
}

bool intersect(const Tri& x, const Tri& y, double eps3, Vec3* hit) {
  for (int k = 0; k < 3; ++k) {
    if (segment_hits(x.p[k], x.p[(k + 1) % 3], y.p[0], y.p[1], y.p[2], eps3, hit)) return true;
    if (segment_hits(y.p[k], y.p[(k + 1) % 3], x.p[0], x.p[1], x.p[2], eps3, hit)) return true;
  }
  return false;
}

}  // namespace

EmbeddingCheck check_embedded(std::span<const TriMesh> meshes, double cell, double eps) {
  EmbeddingCheck out;
  std::vector<Tri> tris;
  for (int mi = 0; mi < static_cast<int>(meshes.size()); ++mi) {
    const auto& m = meshes[mi];
    for (int t = 0; t < static_cast<int>(m.triangles.size()); ++t) {
      Tri tr{mi, t, {}, m.triangles[t]};
      for (int k = 0; k < 3; ++k) tr.p[k] = m.vertices[m.triangles[t][k]];
      tris.push_back(tr);
    }
  }
  using Key = std::array<long, 3>;
  std::unordered_map<Key, std::vector<int>, boost::hash<Key>> grid;
  auto key_of = [&](const Vec3& p) {
    return Key{static_cast<long>(std::floor(p.x() / cell)), static_cast<long>(std::floor(p.y() / cell)),
               static_cast<long>(std::floor(p.z() / cell))};
  };
  for (int i = 0; i < static_cast<int>(tris.size()); ++i) {
    Vec3 lo = tris[i].p[0].cwiseMin(tris[i].p[1]).cwiseMin(tris[i].p[2]);
    Vec3 hi = tris[i].p[0].cwiseMax(tris[i].p[1]).cwiseMax(tris[i].p[2]);
    const Key a = key_of(lo), b = key_of(hi);
    for (long x = a[0]; x <= b[0]; ++x)
      for (long y = a[1]; y <= b[1]; ++y)
        for (long z = a[2]; z <= b[2]; ++z) grid[{x, y, z}].push_back(i);
  }
  // cubic tolerance for orientation determinants
  const double eps3 = eps * cell * cell;
  std::unordered_map<long long, char> seen;
  for (const auto& [key, bucket] : grid) {
    for (std::size_t u = 0; u < bucket.size(); ++u) {
      for (std::size_t w = u + 1; w < bucket.size(); ++w) {
        const Tri& x = tris[bucket[u]];
        const Tri& y = tris[bucket[w]];
        if (x.mesh == y.mesh) {
          bool shared = false;
          for (int a : x.v)
            for (int b : y.v) shared |= a == b;
          if (shared) continue;
        }
        const long long id = static_cast<long long>(std::min(bucket[u], bucket[w])) * static_cast<long long>(tris.size()) +
                             std::max(bucket[u], bucket[w]);
        if (!seen.emplace(id, 1).second) continue;
        ++out.pairs_tested;
        Vec3 hit;
        if (intersect(x, y, eps3, &hit)) {
          if (out.intersecting_pairs == 0) out.first_hit = hit;
          ++out.intersecting_pairs;
        }
      }
    }
  }
  out.embedded = out.intersecting_pairs == 0;
  return out;
}

}  // namespace vatlas
