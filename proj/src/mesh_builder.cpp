#include "vatlas/mesh_builder.hpp"

#include "vatlas/error.hpp"
#include "vatlas/triangulate.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include <map>
#include <numeric>
#include <unordered_set>

namespace vatlas {

namespace {

Vec2 unit(double a) { return {std::cos(a), std::sin(a)}; }

double angle_of(const Vec2& v) { return std::atan2(v.y(), v.x()); }

double height_of(Family f, double t) { return f == Family::A ? 0.0 : t; }

VertexTag tag_of(Family f) { return f == Family::A ? VertexTag::OnA : VertexTag::OnB; }

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(int a, int b) { parent[find(a)] = find(b); }
};

double polyline_distance(const Vec2& p, const std::vector<Vec2>& poly) {
  double d = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < poly.size(); ++i) d = std::min(d, point_segment_distance(p, poly[i], poly[i + 1]));
  return d;
}

bool is_helicoidal(const SheetComplex& c, int vertex) {
  return vertex < static_cast<int>(c.crossing_types.size()) && c.crossing_types[vertex] == CrossingType::Helicoidal;
}

std::uint64_t edge_key(int a, int b) {
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) | static_cast<std::uint32_t>(b);
}

}  // namespace

MeshParams resolve_mesh_params(const Arrangement& arr, MeshParams p, std::vector<std::string>* warnings) {
  if (!(p.t > 0)) throw input_error("plane separation t must be positive");
  if (p.h <= 0) p.h = arr.curves.diameter() / 60.0;

  double limit = std::numeric_limits<double>::infinity();
  const auto& xs = arr.crossings;
  for (std::size_t i = 0; i < xs.size(); ++i)
    for (std::size_t j = i + 1; j < xs.size(); ++j)
      limit = std::min(limit, 0.5 * (xs[i].position - xs[j].position).norm());
  for (const auto& x : xs) {
    for (const auto& e : arr.edges) {
      if (e.v_from == x.id || e.v_to == x.id) continue;
      limit = std::min(limit, polyline_distance(x.position, e.polyline));
    }
  }

  if (p.rho <= 0) {
    p.rho = std::max(3 * p.h, 5 * p.t);
    if (p.rho >= 0.9 * limit) {
      const double clamped = 0.9 * limit;
      if (warnings)
        warnings->push_back("rho clamped from " + std::to_string(p.rho) + " to " + std::to_string(clamped) +
                            " to keep crossing disks apart");
      p.rho = clamped;
    }
  } else if (p.rho >= limit) {
    throw geometry_error("rho = " + std::to_string(p.rho) + " reaches another crossing or a non-incident edge (limit " +
                         std::to_string(limit) + ")");
  }
  if (p.rho < 3 * p.h * (1 - 1e-12))
    throw geometry_error("rho = " + std::to_string(p.rho) + " is below 3h = " + std::to_string(3 * p.h) +
                         "; refine h or move the crossings apart");
  return p;
}

CircleExit circle_exit(std::span<const Vec2> outward, const Vec2& center, double r) {
  for (std::size_t i = 0; i + 1 < outward.size(); ++i) {
    const Vec2& a = outward[i];
    const Vec2& b = outward[i + 1];
    if ((b - center).norm() < r) continue;
    const Vec2 d = b - a, f = a - center;
    const double qa = d.squaredNorm(), qb = 2 * f.dot(d), qc = f.squaredNorm() - r * r;
    const double disc = std::max(0.0, qb * qb - 4 * qa * qc);
    const double u = std::clamp((-qb + std::sqrt(disc)) / (2 * qa), 0.0, 1.0);
    return {a + u * d, static_cast<int>(i)};
  }
  throw geometry_error("curve branch does not leave the crossing disk of radius " + std::to_string(r));
}

std::vector<Vec2> resample_polyline(std::span<const Vec2> pts, double h, double corner_deg) {
  if (pts.size() < 2) throw geometry_error("cannot resample a polyline with fewer than 2 points");
  const double corner = corner_deg * kPi / 180.0;
  std::vector<std::size_t> keep{0};
  for (std::size_t i = 1; i + 1 < pts.size(); ++i)
    if (angle_between(pts[i] - pts[i - 1], pts[i + 1] - pts[i]) > corner) keep.push_back(i);
  keep.push_back(pts.size() - 1);

  std::vector<Vec2> out{pts[0]};
  for (std::size_t piece = 0; piece + 1 < keep.size(); ++piece) {
    const std::size_t k0 = keep[piece], k1 = keep[piece + 1];
    std::vector<double> acc{0.0};
    for (std::size_t i = k0; i < k1; ++i) acc.push_back(acc.back() + (pts[i + 1] - pts[i]).norm());
    const double len = acc.back();
    const int n = std::max(1, static_cast<int>(std::lround(len / h)));
    std::size_t seg = 0;
    for (int q = 1; q < n; ++q) {
      const double target = len * q / n;
      while (seg + 1 < acc.size() - 1 && acc[seg + 1] < target) ++seg;
      const double span = acc[seg + 1] - acc[seg];
      const double u = span > 0 ? (target - acc[seg]) / span : 0.0;
      out.push_back(pts[k0 + seg] + u * (pts[k0 + seg + 1] - pts[k0 + seg]));
    }
    out.push_back(pts[k1]);
  }
  return out;
}

HelicoidPatch insert_helicoid(const Vec2& center, const std::array<std::vector<Vec2>, 4>& branches, double t,
                              double rho, double h) {
  if (!(t > 0) || !(rho > 0) || !(h > 0)) throw input_error("helicoid insert needs positive t, rho and h");
  HelicoidPatch p;
  p.center = center;
  p.t = t;
  p.rho = rho;

  auto sweep_at = [&](int wedge, double r, Vec2& ea, Vec2& eb) {
    ea = circle_exit(branches[2 * wedge], center, r).point;
    eb = circle_exit(branches[2 * wedge + 1], center, r).point;
    return wrap_angle(angle_of(eb - center) - angle_of(ea - center));
  };
  Vec2 ea, eb;
  const double beta = std::max(std::abs(sweep_at(0, rho, ea, eb)), std::abs(sweep_at(1, rho, ea, eb)));
  p.ns = std::max(2, static_cast<int>(std::ceil(rho * beta / h)));
  p.nr = std::max(2, static_cast<int>(std::ceil(rho / std::min(h, t))));

  const int rows = 2 * p.nr + 1, cols = p.ns + 1;
  auto& m = p.mesh;
  m.vertices.resize(static_cast<std::size_t>(rows) * cols);
  m.boundary.assign(m.vertices.size(), 0);
  m.tags.assign(m.vertices.size(), VertexTag::Helicoid);
  for (int j = -p.nr; j <= p.nr; ++j) {
    Vec2 a = center, b = center;
    double theta_a = 0, sweep = 0;
    if (j != 0) {
      const double r = rho * std::abs(j) / p.nr;
      sweep = sweep_at(j > 0 ? 0 : 1, r, a, b);
      theta_a = angle_of(a - center);
    }
    for (int k = 0; k <= p.ns; ++k) {
      const double s = static_cast<double>(k) / p.ns;
      Vec2 xy = center;
      if (j != 0) {
        const double r = rho * std::abs(j) / p.nr;
        xy = k == 0 ? a : k == p.ns ? b : Vec2(center + r * unit(theta_a + s * sweep));
      }
      const int v = p.index(j, k);
      m.vertices[v] = Vec3(xy.x(), xy.y(), k == p.ns ? t : t * s);
      if (k == 0 || k == p.ns) {
        m.boundary[v] = 1;
        m.tags[v] = k == 0 ? VertexTag::OnA : VertexTag::OnB;
      } else if (std::abs(j) == p.nr) {
        m.tags[v] = VertexTag::Seam;
      }
    }
  }
  for (int j = -p.nr; j < p.nr; ++j) {
    for (int k = 0; k < p.ns; ++k) {
      const int v00 = p.index(j, k), v10 = p.index(j + 1, k), v11 = p.index(j + 1, k + 1), v01 = p.index(j, k + 1);
      const double d1 = (m.vertices[v00] - m.vertices[v11]).squaredNorm();
      const double d2 = (m.vertices[v10] - m.vertices[v01]).squaredNorm();
      if (d1 <= d2) {
        m.triangles.push_back({v00, v10, v11});
        m.triangles.push_back({v00, v11, v01});
      } else {
        m.triangles.push_back({v00, v10, v01});
        m.triangles.push_back({v10, v11, v01});
      }
    }
  }
  m.tri_sheet.assign(m.triangles.size(), -1);
  for (int k = 0; k <= p.ns; ++k) {
    p.rim_plus.push_back(p.index(p.nr, k));
    p.rim_minus.push_back(p.index(-p.nr, k));
  }
  return p;
}

namespace {

struct PatchRecord {
  int crossing = -1;
  int band = -1;
  HelicoidPatch patch;
  std::vector<int> global;             // patch vertex -> mesh vertex
  std::array<int, 4> hes{};            // outgoing half-edges, ccw
  int plus_wedge = 0;                  // wedge index k of the r > 0 side
  int sheet_plus = -1, sheet_minus = -1;
  double beta = 0.0;
};

// Loop point of a face boundary: a resampled edge point (travel index along the
// half-edge) or an interior rim point (s index on the patch rim).
struct LoopPoint {
  bool rim = false;
  int he = -1;
  int idx = 0;
};

class Builder {
 public:
  Builder(const SheetComplex& c, const MeshParams& p) : c_(c), arr_(*c.arr), p_(p) {}

  BuiltSurface run() {
    build_patches();
    resample_edges();
    build_corners();
    build_seam_samples();
    triangulate_faces();
    orient_sheets();
    solve_heights();
    attach_patches();
    return split();
  }

 private:
  const SheetComplex& c_;
  const Arrangement& arr_;
  MeshParams p_;
  TriMesh all_;
  std::vector<char> solved_;  // free in the harmonic solve

  std::vector<PatchRecord> patches_;
  std::vector<int> patch_of_crossing_;
  std::vector<int> exit_vertex_;            // outgoing half-edge at a helicoidal crossing -> rim end
  std::vector<std::vector<Vec2>> samples_;  // per edge, forward
  std::map<std::pair<int, int>, int> corner_index_;
  std::vector<int> corner_vertex_;          // corner index -> mesh vertex
  std::vector<std::vector<int>> seam_ids_;  // per seam, forward sample index -> vertex
  std::vector<std::vector<int>> sheet_tris_;
  std::vector<int> flag_;
  double z_min_ = 0, z_max_ = 0;

  int add_vertex(const Vec3& x, VertexTag tag, bool fixed, bool free_height) {
    all_.vertices.push_back(x);
    all_.tags.push_back(tag);
    all_.boundary.push_back(fixed ? 1 : 0);
    solved_.push_back(free_height ? 1 : 0);
    return static_cast<int>(all_.vertices.size()) - 1;
  }

  Family family_of(int he) const { return arr_.edges[arr_.half_edges[he].edge].family; }

  void build_patches() {
    patch_of_crossing_.assign(arr_.crossings.size(), -1);
    exit_vertex_.assign(arr_.half_edges.size(), -1);
    const auto& m = c_.varifold.m;
    for (const auto& x : arr_.crossings) {
      if (c_.crossing_types[x.id] != CrossingType::Helicoidal) continue;
      PatchRecord rec;
      rec.crossing = x.id;
      rec.band = c_.band_of_crossing[x.id];
      rec.hes = arr_.crossing_half_edges(x.id);
      const auto faces = arr_.crossing_faces(x.id);
      int k = 0;
      while (m[faces[k]] != 1) ++k;
      rec.plus_wedge = k;
      rec.sheet_plus = c_.sheet_of(faces[k], Layer::Only);
      rec.sheet_minus = c_.sheet_of(faces[(k + 2) % 4], Layer::Only);
      auto split = [&](int w, int& a, int& b) {
        const int h0 = rec.hes[w % 4], h1 = rec.hes[(w + 1) % 4];
        const bool first_a = family_of(h0) == Family::A;
        a = first_a ? h0 : h1;
        b = first_a ? h1 : h0;
      };
      int a1, b1, a2, b2;
      split(k, a1, b1);
      split(k + 2, a2, b2);
      rec.patch = insert_helicoid(x.position,
                                  {arr_.half_edge_polyline(a1), arr_.half_edge_polyline(b1),
                                   arr_.half_edge_polyline(a2), arr_.half_edge_polyline(b2)},
                                  p_.t, p_.rho, p_.h);
      const auto& pm = rec.patch.mesh;
      for (std::size_t v = 0; v < pm.vertices.size(); ++v)
        rec.global.push_back(add_vertex(pm.vertices[v], pm.tags[v], pm.boundary[v], false));
      const int nr = rec.patch.nr, ns = rec.patch.ns;
      exit_vertex_[a1] = rec.global[rec.patch.index(nr, 0)];
      exit_vertex_[b1] = rec.global[rec.patch.index(nr, ns)];
      exit_vertex_[a2] = rec.global[rec.patch.index(-nr, 0)];
      exit_vertex_[b2] = rec.global[rec.patch.index(-nr, ns)];
      const Vec2 ea = arr_.half_edge_polyline(a1)[1] - x.position;
      const Vec2 eb = arr_.half_edge_polyline(b1)[1] - x.position;
      rec.beta = angle_between(ea, eb);
      patch_of_crossing_[x.id] = static_cast<int>(patches_.size());
      patches_.push_back(std::move(rec));
    }
  }

  void resample_edges() {
    samples_.resize(arr_.edges.size());
    for (const auto& e : arr_.edges) {
      const auto& poly = e.polyline;
      const int n = static_cast<int>(poly.size());
      const bool cut_start = is_helicoidal(c_, e.v_from);
      const bool cut_end = is_helicoidal(c_, e.v_to);
      if (!cut_start && !cut_end) {
        samples_[e.id] = resample_polyline(poly, p_.h, p_.corner_deg);
        continue;
      }
      int first = 0, last = n - 1;
      Vec2 q0 = poly.front(), q1 = poly.back();
      double u0 = 0, u1 = n - 1;
      if (cut_start) {
        const auto ex = circle_exit(arr_.half_edge_polyline(2 * e.id), arr_.vertices[e.v_from].position, p_.rho);
        q0 = ex.point;
        first = ex.segment + 1;
        u0 = ex.segment + (q0 - poly[ex.segment]).norm() / std::max(1e-300, (poly[ex.segment + 1] - poly[ex.segment]).norm());
      }
      if (cut_end) {
        const auto ex = circle_exit(arr_.half_edge_polyline(2 * e.id + 1), arr_.vertices[e.v_to].position, p_.rho);
        q1 = ex.point;
        last = n - 2 - ex.segment;
        const int seg = n - 2 - ex.segment;  // forward segment holding q1
        u1 = seg + (q1 - poly[seg]).norm() / std::max(1e-300, (poly[seg + 1] - poly[seg]).norm());
      }
      if (!(u0 < u1)) throw geometry_error("edge " + std::to_string(e.id) + " lies inside the crossing disks");
      std::vector<Vec2> trimmed{q0};
      for (int i = first; i <= last; ++i) trimmed.push_back(poly[i]);
      trimmed.push_back(q1);
      // The kept part must stay outside both disks.
      for (std::size_t i = 1; i + 1 < trimmed.size(); ++i) {
        if ((cut_start && (trimmed[i] - arr_.vertices[e.v_from].position).norm() < p_.rho) ||
            (cut_end && (trimmed[i] - arr_.vertices[e.v_to].position).norm() < p_.rho))
          throw geometry_error("edge " + std::to_string(e.id) + " re-enters a crossing disk; reduce rho");
      }
      samples_[e.id] = resample_polyline(trimmed, p_.h, p_.corner_deg);
    }
  }

  int corner(int sheet, int he) const {
    const auto it = corner_index_.find({sheet, he});
    if (it == corner_index_.end()) throw verification_error("mesh weld: missing sheet corner");
    return it->second;
  }

  void build_corners() {
    for (const auto& s : c_.sheets)
      for (const auto& loop : arr_.faces[s.face].boundary_loops)
        for (int he : loop)
          if (!is_helicoidal(c_, arr_.dest(he)))
            corner_index_.emplace(std::pair{s.id, he}, static_cast<int>(corner_index_.size()));
    UnionFind uf(corner_index_.size());
    for (const auto& seam : c_.seams) {
      if (seam.kind != SeamKind::SmoothContinuation) continue;
      const int h1 = seam.half_edge, h2 = twin(h1);
      const int p1 = arr_.half_edges[h1].prev, p2 = arr_.half_edges[h2].prev;
      uf.unite(corner(seam.sheet_a, h1), corner(seam.sheet_b, p2));
      uf.unite(corner(seam.sheet_a, p1), corner(seam.sheet_b, h2));
    }
    // Height of a class comes from any boundary slot touching one of its corners.
    std::vector<int> fam(corner_index_.size(), -1);
    for (const auto& [key, idx] : corner_index_) {
      const auto [s, he] = key;
      for (int slot : {he, arr_.half_edges[he].next}) {
        const auto& seam = c_.seams[c_.seam_at(s, slot)];
        if (seam.kind != SeamKind::Boundary) continue;
        const int f = static_cast<int>(family_of(slot));
        int& cls = fam[uf.find(idx)];
        if (cls >= 0 && cls != f) throw verification_error("mesh weld: corner lies on both boundary curves");
        cls = f;
      }
    }
    corner_vertex_.assign(corner_index_.size(), -1);
    std::vector<int> class_vertex(corner_index_.size(), -1);
    for (const auto& [key, idx] : corner_index_) {
      const int root = uf.find(idx);
      if (class_vertex[root] < 0) {
        const Vec2 xy = arr_.vertices[arr_.dest(key.second)].position;
        if (fam[root] >= 0) {
          const auto f = static_cast<Family>(fam[root]);
          class_vertex[root] = add_vertex(Vec3(xy.x(), xy.y(), height_of(f, p_.t)), tag_of(f), true, false);
        } else {
          class_vertex[root] = add_vertex(Vec3(xy.x(), xy.y(), 0.0), VertexTag::Seam, false, true);
        }
      }
      corner_vertex_[idx] = class_vertex[root];
    }
  }

  void build_seam_samples() {
    seam_ids_.resize(c_.seams.size());
    for (std::size_t i = 0; i < c_.seams.size(); ++i) {
      const auto& seam = c_.seams[i];
      if (seam.kind == SeamKind::HelicoidalBand) continue;
      const auto& e = arr_.edges[seam.edge];
      const auto& pts = samples_[e.id];
      auto& ids = seam_ids_[i];
      ids.assign(pts.size(), -1);
      for (std::size_t k = 1; k + 1 < pts.size(); ++k) {
        if (seam.kind == SeamKind::Boundary)
          ids[k] = add_vertex(Vec3(pts[k].x(), pts[k].y(), height_of(e.family, p_.t)), tag_of(e.family), true, false);
        else
          ids[k] = add_vertex(Vec3(pts[k].x(), pts[k].y(), 0.0), VertexTag::Seam, false, true);
      }
    }
  }

  const PatchRecord& patch_at(int crossing) const { return patches_[patch_of_crossing_[crossing]]; }

  // Rim vertices (by s index) on the side of the face corner after incoming `he`.
  void rim_for(int he, std::vector<int>& out) const {
    const auto& rec = patch_at(arr_.dest(he));
    const int nxt = arr_.half_edges[he].next;
    int w = 0;
    while (rec.hes[w] != nxt) ++w;
    const bool plus = w == rec.plus_wedge;
    if (!plus && w != (rec.plus_wedge + 2) % 4) throw verification_error("mesh weld: rim on an empty wedge");
    const auto& local = plus ? rec.patch.rim_plus : rec.patch.rim_minus;
    out.clear();
    for (int v : local) out.push_back(rec.global[v]);
  }

  int loop_vertex(int sheet, const LoopPoint& lp) const {
    if (lp.rim) {
      std::vector<int> rim;
      rim_for(lp.he, rim);
      return rim[lp.idx];
    }
    const int e = arr_.half_edges[lp.he].edge;
    const int n = static_cast<int>(samples_[e].size()) - 1;
    if (lp.idx == 0) {
      const int o = arr_.half_edges[lp.he].origin;
      if (is_helicoidal(c_, o)) return exit_vertex_[lp.he];
      return corner_vertex_[corner(sheet, arr_.half_edges[lp.he].prev)];
    }
    if (lp.idx == n) return exit_vertex_[twin(lp.he)];
    const int fi = lp.he % 2 == 0 ? lp.idx : n - lp.idx;
    return seam_ids_[c_.seam_at(sheet, lp.he)][fi];
  }

  void triangulate_faces() {
    const auto& m = c_.varifold.m;
    sheet_tris_.resize(c_.sheets.size());
    std::vector<int> rim;
    for (const auto& f : arr_.faces) {
      if (m[f.id] == 0) continue;
      std::vector<std::vector<Vec2>> loops;
      std::vector<LoopPoint> desc;
      for (const auto& loop : f.boundary_loops) {
        std::vector<Vec2> poly;
        for (int he : loop) {
          const int e = arr_.half_edges[he].edge;
          const auto& pts = samples_[e];
          const int n = static_cast<int>(pts.size()) - 1;
          const bool hel = is_helicoidal(c_, arr_.dest(he));
          for (int idx = 0; idx < n + (hel ? 1 : 0); ++idx) {
            poly.push_back(he % 2 == 0 ? pts[idx] : pts[n - idx]);
            desc.push_back({false, he, idx});
          }
          if (!hel) continue;
          rim_for(he, rim);
          const int ns = static_cast<int>(rim.size()) - 1;
          const bool from_a = family_of(he) == Family::A;
          for (int k = 1; k < ns; ++k) {
            const int sidx = from_a ? k : ns - k;
            const Vec3& x = all_.vertices[rim[sidx]];
            poly.emplace_back(x.x(), x.y());
            desc.push_back({true, he, sidx});
          }
        }
        loops.push_back(std::move(poly));
      }
      PlanarTriangulation tri;
      try {
        tri = triangulate_domain(loops, {p_.h, 0x5eed5eedULL + static_cast<std::uint64_t>(f.id)});
      } catch (const AtlasError& err) {
        throw geometry_error("face " + std::to_string(f.id) + " cannot be triangulated at h = " +
                             std::to_string(p_.h) + ": " + err.what());
      }
      if (tri.boundary_count != desc.size()) throw verification_error("triangulation changed the face boundary");

      std::vector<int> sheets;
      if (m[f.id] == 1) sheets.push_back(c_.sheet_of(f.id, Layer::Only));
      else sheets = {c_.sheet_of(f.id, Layer::Top), c_.sheet_of(f.id, Layer::Bottom)};
      for (int s : sheets) {
        std::vector<int> local(tri.points.size());
        for (std::size_t i = 0; i < desc.size(); ++i) local[i] = loop_vertex(s, desc[i]);
        for (std::size_t i = desc.size(); i < tri.points.size(); ++i)
          local[i] = add_vertex(Vec3(tri.points[i].x(), tri.points[i].y(), 0.0), VertexTag::Interior, false, true);
        auto& out = sheet_tris_[s];
        for (const auto& t : tri.triangles) {
          out.push_back(static_cast<int>(all_.triangles.size()));
          all_.triangles.push_back({local[t[0]], local[t[1]], local[t[2]]});
          all_.tri_sheet.push_back(s);
        }
      }
    }
  }

  // Graph sheets glued along a curve keep their side; a helicoidal band turns
  // the surface over, so the two sheets it joins get opposite orientations.
  void orient_sheets() {
    const int ns = static_cast<int>(c_.sheets.size());
    std::vector<std::vector<std::pair<int, int>>> adj(ns);
    for (const auto& seam : c_.seams) {
      if (seam.kind == SeamKind::Boundary) continue;
      const int sign = seam.kind == SeamKind::HelicoidalBand ? -1 : 1;
      adj[seam.sheet_a].emplace_back(seam.sheet_b, sign);
      adj[seam.sheet_b].emplace_back(seam.sheet_a, sign);
    }
    flag_.assign(ns, 0);
    for (int root = 0; root < ns; ++root) {
      if (flag_[root]) continue;
      flag_[root] = 1;
      std::vector<int> stack{root};
      while (!stack.empty()) {
        const int s = stack.back();
        stack.pop_back();
        for (auto [o, sign] : adj[s]) {
          if (!flag_[o]) {
            flag_[o] = flag_[s] * sign;
            stack.push_back(o);
          } else if (flag_[o] != flag_[s] * sign) {
            throw geometry_error("orientation conflict between sheets " + std::to_string(s) + " and " +
                                 std::to_string(o));
          }
        }
      }
    }
    for (int s = 0; s < ns; ++s)
      if (flag_[s] < 0)
        for (int t : sheet_tris_[s]) std::swap(all_.triangles[t][1], all_.triangles[t][2]);
  }

  // Cotangent Laplace equation in the plane metric, Dirichlet on curves and rims.
  void solve_heights() {
    const int nv = static_cast<int>(all_.vertices.size());
    std::vector<int> unknown(nv, -1);
    int nf = 0;
    for (int v = 0; v < nv; ++v)
      if (solved_[v]) unknown[v] = nf++;
    if (nf > 0) {
      std::vector<Eigen::Triplet<double>> trip;
      Eigen::VectorXd rhs = Eigen::VectorXd::Zero(nf);
      for (const auto& tri : all_.triangles) {
        for (int k = 0; k < 3; ++k) {
          const int o = tri[k], i = tri[(k + 1) % 3], j = tri[(k + 2) % 3];
          const Vec2 po = all_.vertices[o].head<2>(), pi = all_.vertices[i].head<2>(), pj = all_.vertices[j].head<2>();
          const Vec2 u = pi - po, w = pj - po;
          const double w_ij = 0.5 * u.dot(w) / std::abs(cross2(u, w));
          for (auto [a, b] : {std::pair{i, j}, std::pair{j, i}}) {
            if (unknown[a] < 0) continue;
            trip.emplace_back(unknown[a], unknown[a], w_ij);
            if (unknown[b] >= 0) trip.emplace_back(unknown[a], unknown[b], -w_ij);
            else rhs[unknown[a]] += w_ij * all_.vertices[b].z();
          }
        }
      }
      Eigen::SparseMatrix<double> L(nf, nf);
      L.setFromTriplets(trip.begin(), trip.end());
      Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver(L);
      if (solver.info() != Eigen::Success) throw numerical_error("harmonic height system is singular");
      const Eigen::VectorXd z = solver.solve(rhs);
      if (solver.info() != Eigen::Success || !z.allFinite()) throw numerical_error("harmonic height solve failed");
      for (int v = 0; v < nv; ++v)
        if (unknown[v] >= 0) all_.vertices[v].z() = z[unknown[v]];
    }
    z_min_ = std::numeric_limits<double>::infinity();
    z_max_ = -z_min_;
    for (const auto& x : all_.vertices) {
      z_min_ = std::min(z_min_, x.z());
      z_max_ = std::max(z_max_, x.z());
    }
  }

  void attach_patches() {
    std::unordered_set<std::uint64_t> directed;
    for (const auto& t : all_.triangles)
      for (int k = 0; k < 3; ++k) directed.insert(edge_key(t[k], t[(k + 1) % 3]));
    for (const auto& rec : patches_) {
      const auto& pm = rec.patch;
      const int a = rec.global[pm.index(pm.nr, 0)], b = rec.global[pm.index(pm.nr, 1)];
      bool flip = false;
      if (directed.count(edge_key(a, b))) flip = true;
      else if (!directed.count(edge_key(b, a))) throw verification_error("helicoid rim is not welded to its sheet");
      for (const auto& t : pm.mesh.triangles) {
        std::array<int, 3> g{rec.global[t[0]], rec.global[t[1]], rec.global[t[2]]};
        if (flip) std::swap(g[1], g[2]);
        all_.triangles.push_back(g);
        all_.tri_sheet.push_back(-1 - rec.band);
      }
    }
  }

  int component_of_triangle(int sheet_code) const {
    if (sheet_code >= 0) return c_.sheets[sheet_code].component;
    return c_.sheets[c_.seams[-1 - sheet_code].sheet_a].component;
  }

  BuiltSurface split() {
    BuiltSurface out;
    out.params = p_;
    out.z_min = z_min_;
    out.z_max = z_max_;
    auto parts = split_components(all_);
    if (static_cast<int>(parts.size()) != c_.component_count())
      throw verification_error("mesh has " + std::to_string(parts.size()) + " components, complex has " +
                               std::to_string(c_.component_count()));
    out.components.resize(parts.size());
    for (auto& part : parts) {
      const int comp = component_of_triangle(part.tri_sheet.front());
      out.components[comp] = std::move(part);
    }
    for (std::size_t k = 0; k < out.components.size(); ++k) {
      const auto check = check_mesh(out.components[k]);
      if (!check.ok()) throw geometry_error("component " + std::to_string(k) + ": " + check.problem);
      if (check.min_angle_deg <= 1.0)
        throw geometry_error("component " + std::to_string(k) + " has a sliver triangle (" +
                             std::to_string(check.min_angle_deg) + " deg); refine h");
    }
    for (const auto& rec : patches_)
      out.helicoids.push_back({rec.crossing, rec.band, c_.sheets[rec.sheet_plus].component,
                               arr_.crossings[rec.crossing].position, p_.rho, rec.beta});
    for (const auto& f : arr_.faces) {
      if (c_.varifold.m[f.id] != 2) continue;
      DoubleLayer d;
      d.face = f.id;
      d.top_sheet = c_.sheet_of(f.id, Layer::Top);
      d.bottom_sheet = c_.sheet_of(f.id, Layer::Bottom);
      d.top_component = c_.sheets[d.top_sheet].component;
      d.bottom_component = c_.sheets[d.bottom_sheet].component;
      out.double_layers.push_back(d);
    }
    return out;
  }
};

}  // namespace

BuiltSurface build_surface(const SheetComplex& c, const MeshParams& p) {
  if (!c.arr) throw input_error("sheet complex without arrangement");
  if (!(p.t > 0) || !(p.h > 0) || !(p.rho > 0)) throw input_error("mesh parameters t, h, rho must be positive");
  if (p.rho < 3 * p.h * (1 - 1e-12)) throw geometry_error("rho must be at least 3h");
  return Builder(c, p).run();
}

}  // namespace vatlas
