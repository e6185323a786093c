#include "vatlas/sheet_complex.hpp"

#include "vatlas/error.hpp"

#include <numeric>

namespace vatlas {

const char* to_string(Layer l) {
  switch (l) {
    case Layer::Only: return "ONLY";
    case Layer::Top: return "TOP";
    case Layer::Bottom: return "BOTTOM";
  }
  return "?";
}

const char* to_string(SeamKind k) {
  switch (k) {
    case SeamKind::SmoothContinuation: return "SMOOTH_CONTINUATION";
    case SeamKind::HelicoidalBand: return "HELICOIDAL_BAND";
    case SeamKind::Boundary: return "BOUNDARY";
  }
  return "?";
}

int SheetComplex::sheet_of(int face, Layer layer) const {
  for (const auto& s : sheets)
    if (s.face == face && s.layer == layer) return s.id;
  return -1;
}

int SheetComplex::seam_at(int s, int he) const {
  const auto it = slot_seam.find({s, he});
  return it == slot_seam.end() ? -1 : it->second;
}

namespace {

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(int a, int b) { parent[find(a)] = find(b); }
};

[[noreturn]] void bookkeeping(const std::string& what) {
  throw verification_error("sheet complex bookkeeping inconsistency: " + what);
}

}  // namespace

SheetComplex build_complex(const Arrangement& arr, const Varifold& v) {
  SheetComplex c;
  c.arr = &arr;
  c.varifold = v;
  for (const auto& x : arr.crossings) c.crossing_types.push_back(classify_crossing(arr, v, x.id));

  std::vector<int> only(arr.faces.size(), -1), top(arr.faces.size(), -1), bottom(arr.faces.size(), -1);
  auto add_sheet = [&](int face, Layer layer) {
    const int id = static_cast<int>(c.sheets.size());
    c.sheets.push_back({id, face, layer, -1});
    return id;
  };
  for (const auto& f : arr.faces) {
    const int m = v.m[f.id];
    if (m == 1) only[f.id] = add_sheet(f.id, Layer::Only);
    if (m == 2) {
      top[f.id] = add_sheet(f.id, Layer::Top);
      bottom[f.id] = add_sheet(f.id, Layer::Bottom);
    }
  }

  auto add_seam = [&](Seam s) {
    c.seams.push_back(s);
    const int id = static_cast<int>(c.seams.size()) - 1;
    if (s.kind == SeamKind::Boundary) {
      if (!c.slot_seam.emplace(std::pair{s.sheet_a, s.half_edge}, id).second) bookkeeping("slot covered twice");
    } else if (s.kind == SeamKind::SmoothContinuation) {
      if (!c.slot_seam.emplace(std::pair{s.sheet_a, s.half_edge}, id).second) bookkeeping("slot covered twice");
      if (!c.slot_seam.emplace(std::pair{s.sheet_b, twin(s.half_edge)}, id).second)
        bookkeeping("slot covered twice");
    }
  };

  for (const auto& e : arr.edges) {
    const int hl = 2 * e.id, hr = 2 * e.id + 1;
    const int fl = arr.left_face(e.id), fr = arr.right_face(e.id);
    const int ml = v.m[fl], mr = v.m[fr];
    if (std::max(ml, mr) == 1) {
      const int he = ml == 1 ? hl : hr;
      add_seam({SeamKind::Boundary, e.id, he, -1, only[arr.half_edges[he].face], -1});
      continue;
    }
    // 1|2 edge: one layer of the double face continues, the other ends on the curve.
    const int h2 = ml == 2 ? hl : hr;
    const int f2 = arr.half_edges[h2].face;
    const int f1 = arr.half_edges[twin(h2)].face;
    const bool on_a = e.family == Family::A;
    const int cont = on_a ? top[f2] : bottom[f2];
    const int ends = on_a ? bottom[f2] : top[f2];
    add_seam({SeamKind::SmoothContinuation, e.id, h2, -1, cont, only[f1]});
    add_seam({SeamKind::Boundary, e.id, h2, -1, ends, -1});
  }

  c.band_of_crossing.assign(arr.crossings.size(), -1);
  for (const auto& x : arr.crossings) {
    if (c.crossing_types[x.id] != CrossingType::Helicoidal) continue;
    const auto faces = arr.crossing_faces(x.id);
    int k = 0;
    while (v.m[faces[k]] != 1) ++k;
    c.band_of_crossing[x.id] = static_cast<int>(c.seams.size());
    add_seam({SeamKind::HelicoidalBand, -1, -1, x.id, only[faces[k]], only[faces[(k + 2) % 4]]});
  }

  // Every sheet edge must be covered exactly once.
  long slot_count = 0;
  for (const auto& s : c.sheets)
    for (const auto& loop : arr.faces[s.face].boundary_loops)
      for (int he : loop) {
        ++slot_count;
        if (c.seam_at(s.id, he) < 0) bookkeeping("uncovered sheet edge");
      }
  if (slot_count != static_cast<long>(c.slot_seam.size())) bookkeeping("stray seam slot");

  // Components over sheets.
  UnionFind sheet_uf(c.sheets.size());
  for (const auto& s : c.seams)
    if (s.kind != SeamKind::Boundary) sheet_uf.unite(s.sheet_a, s.sheet_b);
  std::map<int, int> comp_id;
  for (auto& s : c.sheets) {
    const int root = sheet_uf.find(s.id);
    const auto it = comp_id.emplace(root, static_cast<int>(comp_id.size())).first;
    s.component = it->second;
  }
  c.topology.assign(comp_id.size(), {});
  for (const auto& s : c.sheets) c.topology[s.component].sheets.push_back(s.id);

  // Corners: corner (s, h) sits at dest(h) between h and next(h).
  std::map<std::pair<int, int>, int> corner;
  std::vector<std::pair<int, int>> corner_key;
  for (const auto& s : c.sheets)
    for (const auto& loop : arr.faces[s.face].boundary_loops)
      for (int he : loop) {
        corner.emplace(std::pair{s.id, he}, static_cast<int>(corner_key.size()));
        corner_key.emplace_back(s.id, he);
      }
  UnionFind corner_uf(corner_key.size());
  for (const auto& s : c.seams) {
    if (s.kind != SeamKind::SmoothContinuation) continue;
    const int h1 = s.half_edge, h2 = twin(h1);
    corner_uf.unite(corner.at({s.sheet_a, h1}), corner.at({s.sheet_b, arr.half_edges[h2].prev}));
    corner_uf.unite(corner.at({s.sheet_a, arr.half_edges[h1].prev}), corner.at({s.sheet_b, h2}));
  }
  auto helicoidal_at = [&](int vertex) {
    return vertex < static_cast<int>(arr.crossings.size()) &&
           c.crossing_types[vertex] == CrossingType::Helicoidal;
  };

  // Lifted vertex ids: one per corner class; split corners get an A end and a B end.
  std::vector<int> class_vertex(corner_key.size(), -1);
  std::vector<std::array<int, 2>> split_ends(corner_key.size(), {-1, -1});
  std::vector<int> vertex_component;
  std::vector<int> class_size(corner_key.size(), 0);
  for (std::size_t k = 0; k < corner_key.size(); ++k) ++class_size[corner_uf.find(static_cast<int>(k))];
  for (std::size_t k = 0; k < corner_key.size(); ++k) {
    const auto [s, he] = corner_key[k];
    const int comp = c.sheets[s].component;
    if (helicoidal_at(arr.dest(he))) {
      if (class_size[corner_uf.find(static_cast<int>(k))] != 1)
        bookkeeping("helicoidal corner glued to another corner");
      split_ends[k] = {static_cast<int>(vertex_component.size()),
                       static_cast<int>(vertex_component.size()) + 1};
      vertex_component.push_back(comp);
      vertex_component.push_back(comp);
      continue;
    }
    const int root = corner_uf.find(static_cast<int>(k));
    if (class_vertex[root] < 0) {
      class_vertex[root] = static_cast<int>(vertex_component.size());
      vertex_component.push_back(comp);
    }
    class_vertex[k] = class_vertex[root];
  }
  // Vertex of corner k as seen from an edge of the given family.
  auto lifted = [&](int k, Family family) {
    if (split_ends[k][0] >= 0) return split_ends[k][family == Family::A ? 0 : 1];
    return class_vertex[k];
  };

  const long nv = static_cast<long>(vertex_component.size());
  std::vector<long> comp_v(c.topology.size(), 0), comp_e(c.topology.size(), 0),
      comp_f(c.topology.size(), 0);
  for (int comp : vertex_component) ++comp_v[comp];

  std::vector<int> degree(nv, 0);
  UnionFind boundary_uf(nv);
  auto boundary_edge = [&](int a, int b) {
    ++degree[a];
    ++degree[b];
    boundary_uf.unite(a, b);
  };

  long ne = 0, nf = 0;
  for (const auto& s : c.seams) {
    if (s.kind == SeamKind::Boundary) {
      const int he = s.half_edge;
      const Family fam = arr.edges[arr.half_edges[he].edge].family;
      const int from = lifted(corner.at({s.sheet_a, arr.half_edges[he].prev}), fam);
      const int to = lifted(corner.at({s.sheet_a, he}), fam);
      boundary_edge(from, to);
      ++ne;
      ++comp_e[c.sheets[s.sheet_a].component];
    } else if (s.kind == SeamKind::SmoothContinuation) {
      ++ne;
      ++comp_e[c.sheets[s.sheet_a].component];
    } else {
      // Band quad: two rims (shared with the sheets) and two chords on A and B.
      const auto out = arr.crossing_half_edges(s.crossing);
      std::array<int, 2> corner_k{};
      int found = 0;
      for (int k = 0; k < 4; ++k) {
        const int face = arr.half_edges[out[k]].face;
        if (v.m[face] != 1) continue;
        const int into = twin(out[(k + 1) % 4]);
        corner_k[found++] = corner.at({only[face], into});
      }
      if (found != 2) bookkeeping("helicoidal crossing without two multiplicity-1 corners");
      boundary_edge(lifted(corner_k[0], Family::A), lifted(corner_k[1], Family::A));
      boundary_edge(lifted(corner_k[0], Family::B), lifted(corner_k[1], Family::B));
      ne += 4;
      nf += 1;
      comp_e[c.sheets[s.sheet_a].component] += 4;
      comp_f[c.sheets[s.sheet_a].component] += 1;
    }
  }
  for (const auto& s : c.sheets) {
    const long loops = static_cast<long>(arr.faces[s.face].boundary_loops.size());
    ne += loops - 1;  // cuts turning a face with holes into a disk
    nf += 1;
    comp_e[s.component] += loops - 1;
    comp_f[s.component] += 1;
  }
  c.cells = {nv, ne, nf};

  std::vector<std::map<int, int>> loops_per_comp(c.topology.size());
  int total_loops = 0;
  std::vector<char> seen(nv, 0);
  for (long k = 0; k < nv; ++k) {
    if (degree[k] == 0) continue;
    if (degree[k] != 2) bookkeeping("boundary vertex of degree " + std::to_string(degree[k]));
    const int root = boundary_uf.find(static_cast<int>(k));
    if (!seen[root]) {
      seen[root] = 1;
      ++total_loops;
      ++c.topology[vertex_component[k]].boundary_loops;
    }
  }
  if (total_loops != static_cast<int>(arr.curves.curves.size()))
    bookkeeping("boundary loop count " + std::to_string(total_loops) + " differs from curve count");

  for (std::size_t i = 0; i < c.topology.size(); ++i) {
    auto& t = c.topology[i];
    t.chi = comp_v[i] - comp_e[i] + comp_f[i];
    const long twice_genus = 2 - t.chi - t.boundary_loops;
    if (twice_genus < 0 || twice_genus % 2 != 0)
      throw verification_error("non-integral or negative genus in component " + std::to_string(i));
    t.genus = static_cast<int>(twice_genus / 2);
  }
  return c;
}

long cw_euler_characteristic(const SheetComplex& c) { return c.cells.chi(); }

const std::vector<ComponentTopology>& genus_and_boundaries(const SheetComplex& c) {
  return c.topology;
}

}  // namespace vatlas
