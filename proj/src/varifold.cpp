#include "vatlas/varifold.hpp"

#include "vatlas/error.hpp"
#include "vatlas/sheet_complex.hpp"

#include <algorithm>
#include <numeric>

namespace vatlas {

const char* to_string(CrossingType t) {
  return t == CrossingType::Helicoidal ? "HELICOIDAL" : "DOUBLE_GRAPH";
}

namespace {

void require_signed(const Arrangement& arr) {
  if (!arr.signed_) throw input_error("arrangement faces carry no signs yet");
}

std::pair<int, int> minus_pair(const Arrangement& arr, int crossing) {
  const auto f = arr.crossing_faces(crossing);
  if (arr.faces[f[0]].sign == Sign::Minus) return {f[0], f[2]};
  return {f[1], f[3]};
}

}  // namespace

bool is_admissible(const Arrangement& arr, const std::vector<int>& m) {
  if (m.size() != arr.faces.size()) return false;
  if (m[arr.unbounded_face()] != 0) return false;
  for (const auto& f : arr.faces) {
    const int x = m[f.id];
    if (x < 0 || x > 2) return false;
    if (f.sign == Sign::Plus && x != 1) return false;
    if (f.sign == Sign::Minus && x == 1) return false;
  }
  for (const auto& e : arr.edges)
    if (std::abs(m[arr.left_face(e.id)] - m[arr.right_face(e.id)]) != 1) return false;
  for (const auto& c : arr.crossings) {
    const auto f = arr.crossing_faces(c.id);
    if (std::none_of(f.begin(), f.end(), [&](int id) { return m[id] == 0; })) return false;
  }
  return true;
}

std::vector<Varifold> enumerate_varifolds(const Arrangement& arr) {
  require_signed(arr);
  const int nf = static_cast<int>(arr.faces.size());

  std::vector<int> base(nf, 0);
  std::vector<int> unknowns;
  for (const auto& f : arr.faces) {
    if (f.sign == Sign::Plus) base[f.id] = 1;
    else if (!f.is_unbounded) unknowns.push_back(f.id);
  }

  // conflicts[f]: MINUS faces that may not be 2 together with f.
  std::vector<std::vector<int>> conflicts(nf);
  std::vector<char> forced_zero(nf, 0);
  for (const auto& c : arr.crossings) {
    const auto [x, y] = minus_pair(arr, c.id);
    if (x == y) {
      forced_zero[x] = 1;
      continue;
    }
    conflicts[x].push_back(y);
    conflicts[y].push_back(x);
  }
  std::stable_sort(unknowns.begin(), unknowns.end(), [&](int a, int b) {
    return conflicts[a].size() > conflicts[b].size();
  });

  // domain bit 0: value 0 allowed; bit 1: value 2 allowed.
  std::vector<int> domain(nf, 3);
  for (int f : unknowns)
    if (forced_zero[f]) domain[f] = 1;

  std::vector<int> m = base;
  std::vector<Varifold> out;
  std::vector<std::pair<int, int>> trail;  // (face, previous domain)

  auto recurse = [&](auto&& self, std::size_t k) -> void {
    if (k == unknowns.size()) {
      out.push_back({m});
      return;
    }
    const int f = unknowns[k];
    for (int value : {0, 2}) {
      if (!(domain[f] & (value == 0 ? 1 : 2))) continue;
      const std::size_t mark = trail.size();
      bool ok = true;
      if (value == 2) {
        for (int g : conflicts[f]) {
          if (arr.faces[g].is_unbounded) continue;
          if (domain[g] != 1) {
            trail.emplace_back(g, domain[g]);
            domain[g] &= 1;
          }
          if (domain[g] == 0) ok = false;
        }
      }
      m[f] = value;
      if (ok) self(self, k + 1);
      m[f] = 0;
      while (trail.size() > mark) {
        domain[trail.back().first] = trail.back().second;
        trail.pop_back();
      }
    }
  };
  recurse(recurse, 0);

  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  for (const auto& v : out)
    if (!is_admissible(arr, v.m)) throw verification_error("enumerator produced an inadmissible assignment");
  return out;
}

std::vector<Varifold> brute_force_enumerate(const Arrangement& arr, std::size_t face_limit) {
  require_signed(arr);
  const std::size_t nb = arr.bounded_face_count();
  if (nb > face_limit)
    throw input_error("brute-force oracle limited to " + std::to_string(face_limit) +
                      " bounded faces (have " + std::to_string(nb) + ")");
  std::vector<int> m(arr.faces.size(), 0);
  std::vector<Varifold> out;
  // Odometer over the bounded faces 1..nb.
  while (true) {
    if (is_admissible(arr, m)) out.push_back({m});
    std::size_t k = 1;
    while (k <= nb && m[k] == 2) m[k++] = 0;
    if (k > nb) break;
    ++m[k];
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::array<int, 4> crossing_pattern(const Arrangement& arr, const Varifold& v, int crossing) {
  const auto f = arr.crossing_faces(crossing);
  return {v.m[f[0]], v.m[f[1]], v.m[f[2]], v.m[f[3]]};
}

CrossingType classify_crossing(const Arrangement& arr, const Varifold& v, int crossing) {
  const auto p = crossing_pattern(arr, v, crossing);
  for (int r = 0; r < 4; ++r) {
    const std::array<int, 4> q{p[r], p[(r + 1) % 4], p[(r + 2) % 4], p[(r + 3) % 4]};
    if (q == std::array<int, 4>{0, 1, 0, 1}) return CrossingType::Helicoidal;
    if (q == std::array<int, 4>{0, 1, 2, 1}) return CrossingType::DoubleGraph;
  }
  throw verification_error("crossing " + std::to_string(crossing) + " has pattern (" +
                           std::to_string(p[0]) + "," + std::to_string(p[1]) + "," +
                           std::to_string(p[2]) + "," + std::to_string(p[3]) +
                           "), not a rotation of (0,1,0,1) or (0,1,2,1)");
}

int edge_multiplicity(const Arrangement& arr, const Varifold& v, int edge) {
  return std::max(v.m[arr.left_face(edge)], v.m[arr.right_face(edge)]);
}

VarifoldStats compute_stats(const Arrangement& arr, const Varifold& v) {
  VarifoldStats s;
  long chi = 0;
  for (const auto& c : arr.crossings) {
    if (classify_crossing(arr, v, c.id) == CrossingType::Helicoidal) {
      ++s.v1;
      chi += 1;
    } else {
      ++s.v2;
      chi += 2;
    }
  }
  std::vector<int> edge_m(arr.edges.size());
  for (const auto& e : arr.edges) {
    edge_m[e.id] = edge_multiplicity(arr, v, e.id);
    (edge_m[e.id] == 1 ? s.e1 : s.e2) += 1;
    chi -= edge_m[e.id];
  }
  // A synthetic vertex carries the multiplicity of its loop edge.
  for (int vid : arr.synthetic_vertices) {
    const int he = arr.vertices[vid].outgoing.front();
    chi += edge_m[arr.half_edges[he].edge];
  }
  for (const auto& f : arr.faces) {
    const int m = v.m[f.id];
    if (m == 1) ++s.f1;
    if (m == 2) ++s.f2;
    // An open face with k boundary loops has Euler characteristic 2 - k.
    chi += static_cast<long>(m) * (2 - static_cast<long>(f.boundary_loops.size()));
    s.area += m * f.area;
    if (!f.is_unbounded && f.sign == Sign::Minus) {
      if (f.region_class == RegionClass::InsideBoth) ++s.fi_minus;
      if (f.region_class == RegionClass::OutsideBoth) ++s.fo_minus;
    }
  }
  s.chi = chi;
  return s;
}

std::size_t least_area_varifold(const Arrangement& arr, const std::vector<Varifold>& vs) {
  if (vs.empty()) throw input_error("empty varifold list");
  std::vector<std::size_t> zero_f2;
  std::vector<VarifoldStats> stats;
  for (std::size_t i = 0; i < vs.size(); ++i) {
    stats.push_back(compute_stats(arr, vs[i]));
    if (stats.back().f2 == 0) zero_f2.push_back(i);
  }
  if (zero_f2.size() != 1)
    throw verification_error("expected exactly one varifold without multiplicity-2 faces, found " +
                             std::to_string(zero_f2.size()));
  const std::size_t k = zero_f2.front();
  long genus_k = 0;
  for (const auto& c : build_complex(arr, vs[k]).topology) genus_k += c.genus;
  for (std::size_t i = 0; i < vs.size(); ++i) {
    if (i == k) continue;
    if (!(stats[k].area < stats[i].area))
      throw verification_error("least-area varifold is not the strict area minimizer");
    long genus_i = 0;
    for (const auto& c : build_complex(arr, vs[i]).topology) genus_i += c.genus;
    if (genus_i > genus_k)
      throw verification_error("least-area varifold does not have the largest genus");
  }
  return k;
}

std::uint64_t upper_bound(const Arrangement& arr) {
  require_signed(arr);
  int fi = 0, fo = 0;
  for (const auto& f : arr.faces) {
    if (f.is_unbounded || f.sign != Sign::Minus) continue;
    if (f.region_class == RegionClass::InsideBoth) ++fi;
    if (f.region_class == RegionClass::OutsideBoth) ++fo;
  }
  if (fi > 62 || fo > 62) throw input_error("counting bound exceeds 64-bit range");
  return (std::uint64_t{1} << fi) + (std::uint64_t{1} << fo);
}

}  // namespace vatlas
