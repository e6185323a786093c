#include "vatlas/trimesh.hpp"

#include "vatlas/error.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <iomanip>
#include <map>
#include <numeric>
#include <unordered_map>

namespace vatlas {

const char* to_string(VertexTag t) {
  switch (t) {
    case VertexTag::OnA: return "ON_A";
    case VertexTag::OnB: return "ON_B";
    case VertexTag::Interior: return "INTERIOR";
    case VertexTag::Seam: return "SEAM";
    case VertexTag::Helicoid: return "HELICOID";
  }
  return "?";
}

namespace {

std::uint64_t key(int a, int b) {
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) | static_cast<std::uint32_t>(b);
}

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(int a, int b) { parent[find(a)] = find(b); }
};

}  // namespace

long euler_characteristic(const TriMesh& m) {
  std::unordered_map<std::uint64_t, int> edges;
  for (const auto& t : m.triangles)
    for (int k = 0; k < 3; ++k) edges[key(std::min(t[k], t[(k + 1) % 3]), std::max(t[k], t[(k + 1) % 3]))]++;
  return static_cast<long>(m.vertices.size()) - static_cast<long>(edges.size()) +
         static_cast<long>(m.triangles.size());
}

double triangle_area(const TriMesh& m, int t) {
  const auto& tri = m.triangles[t];
  return 0.5 * (m.vertices[tri[1]] - m.vertices[tri[0]]).cross(m.vertices[tri[2]] - m.vertices[tri[0]]).norm();
}

double total_area(const TriMesh& m) {
  double a = 0;
  for (int t = 0; t < static_cast<int>(m.triangles.size()); ++t) a += triangle_area(m, t);
  return a;
}

double min_angle_deg(const TriMesh& m) {
  double best = 180.0;
  for (const auto& t : m.triangles) {
    for (int k = 0; k < 3; ++k) {
      const Vec3 u = m.vertices[t[(k + 1) % 3]] - m.vertices[t[k]];
      const Vec3 v = m.vertices[t[(k + 2) % 3]] - m.vertices[t[k]];
      const double ang = std::atan2(u.cross(v).norm(), u.dot(v));
      best = std::min(best, ang * 180.0 / kPi);
    }
  }
  return best;
}

MeshCheck check_mesh(const TriMesh& m) {
  MeshCheck r;
  r.chi = euler_characteristic(m);
  r.min_angle_deg = min_angle_deg(m);
  const int nv = static_cast<int>(m.vertices.size());

  std::unordered_map<std::uint64_t, int> directed;
  std::unordered_map<std::uint64_t, int> undirected;
  for (const auto& t : m.triangles) {
    if (t[0] == t[1] || t[1] == t[2] || t[0] == t[2]) {
      r.manifold = false;
      r.problem = "degenerate triangle";
    }
    for (int k = 0; k < 3; ++k) {
      const int a = t[k], b = t[(k + 1) % 3];
      if (++directed[key(a, b)] > 1) {
        r.oriented = false;
        if (r.problem.empty()) r.problem = "edge used twice in the same direction";
      }
      ++undirected[key(std::min(a, b), std::max(a, b))];
    }
  }
  std::vector<int> bdeg(nv, 0);
  UnionFind uf(nv);
  for (const auto& [k, count] : undirected) {
    if (count > 2) {
      r.manifold = false;
      if (r.problem.empty()) r.problem = "edge shared by more than two triangles";
    }
    if (count == 1) {
      const int a = static_cast<int>(k >> 32), b = static_cast<int>(k & 0xffffffffu);
      ++bdeg[a];
      ++bdeg[b];
      uf.unite(a, b);
    }
  }

  // Each vertex's link must be a single path (boundary) or cycle (interior).
  std::vector<std::vector<std::pair<int, int>>> link(nv);
  for (const auto& t : m.triangles)
    for (int k = 0; k < 3; ++k) link[t[k]].emplace_back(t[(k + 1) % 3], t[(k + 2) % 3]);
  for (int v = 0; v < nv && r.manifold; ++v) {
    if (link[v].empty()) {
      r.manifold = false;
      r.problem = "isolated vertex " + std::to_string(v);
      break;
    }
    if (bdeg[v] != 0 && bdeg[v] != 2) {
      r.manifold = false;
      r.problem = "boundary vertex with " + std::to_string(bdeg[v]) + " boundary edges";
      break;
    }
    std::map<int, int> deg;
    for (auto [a, b] : link[v]) {
      ++deg[a];
      ++deg[b];
    }
    const long link_edges = static_cast<long>(link[v].size());
    const long link_vertices = static_cast<long>(deg.size());
    // A connected path has V = E + 1, a cycle V = E.
    std::map<int, int> parent;
    for (const auto& [x, d] : deg) parent[x] = x;
    std::function<int(int)> find = [&](int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
    for (auto [a, b] : link[v]) parent[find(a)] = find(b);
    int pieces = 0;
    for (const auto& [x, d] : deg) pieces += find(x) == x;
    const bool single = pieces == 1 && (link_vertices == link_edges || link_vertices == link_edges + 1);
    if (!single) {
      r.manifold = false;
      r.problem = "non-manifold vertex " + std::to_string(v);
    }
  }

  std::vector<char> counted(nv, 0);
  for (int v = 0; v < nv; ++v) {
    if (bdeg[v] == 0) continue;
    const int root = uf.find(v);
    if (!counted[root]) {
      counted[root] = 1;
      ++r.boundary_loops;
    }
  }
  if (m.boundary.size() == m.vertices.size()) {
    for (int v = 0; v < nv; ++v) {
      if ((bdeg[v] > 0) != static_cast<bool>(m.boundary[v])) {
        r.boundary_flags_match = false;
        if (r.problem.empty()) r.problem = "boundary flag mismatch at vertex " + std::to_string(v);
        break;
      }
    }
  }
  return r;
}

std::vector<TriMesh> split_components(const TriMesh& m) {
  const int nv = static_cast<int>(m.vertices.size());
  UnionFind uf(nv);
  for (const auto& t : m.triangles) {
    uf.unite(t[0], t[1]);
    uf.unite(t[1], t[2]);
  }
  std::map<int, int> comp;
  for (const auto& t : m.triangles) comp.emplace(uf.find(t[0]), static_cast<int>(comp.size()));
  std::vector<TriMesh> out(comp.size());
  std::vector<int> local(nv, -1);
  for (int v = 0; v < nv; ++v) {
    const auto it = comp.find(uf.find(v));
    if (it == comp.end()) continue;
    auto& part = out[it->second];
    local[v] = static_cast<int>(part.vertices.size());
    part.vertices.push_back(m.vertices[v]);
    part.boundary.push_back(m.boundary.empty() ? 0 : m.boundary[v]);
    part.tags.push_back(m.tags.empty() ? VertexTag::Interior : m.tags[v]);
  }
  for (std::size_t t = 0; t < m.triangles.size(); ++t) {
    const auto& tri = m.triangles[t];
    auto& part = out[comp.at(uf.find(tri[0]))];
    part.triangles.push_back({local[tri[0]], local[tri[1]], local[tri[2]]});
    part.tri_sheet.push_back(m.tri_sheet.empty() ? 0 : m.tri_sheet[t]);
  }
  return out;
}

void write_obj(const TriMesh& m, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw input_error("cannot write " + path.string());
  out << std::setprecision(17);
  for (const auto& v : m.vertices) out << "v " << v.x() << ' ' << v.y() << ' ' << v.z() << '\n';
  for (const auto& t : m.triangles) out << "f " << t[0] + 1 << ' ' << t[1] + 1 << ' ' << t[2] + 1 << '\n';
}

}  // namespace vatlas
