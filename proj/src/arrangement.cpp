#include "vatlas/arrangement.hpp"

#include "vatlas/error.hpp"
#include "vatlas/triangulate.hpp"

#include <algorithm>
#include <map>
#include <numeric>

namespace vatlas {

const char* to_string(Sign s) { return s == Sign::Plus ? "PLUS" : "MINUS"; }

const char* to_string(RegionClass r) {
  switch (r) {
    case RegionClass::InsideBoth: return "INSIDE_BOTH";
    case RegionClass::OutsideBoth: return "OUTSIDE_BOTH";
    case RegionClass::AOnly: return "A_ONLY";
    case RegionClass::BOnly: return "B_ONLY";
  }
  return "?";
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

BBox2 curve_box(const JordanCurve& c) {
  BBox2 b;
  for (const auto& p : c.points) b.extend(p);
  return b;
}

// Local picture of a curve passing through a contact point: where it sits
// on the polyline and the two directions leaving the point.
struct LocalBranch {
  CurveParam param;
  Vec2 dir_in;   // towards the previous polyline point
  Vec2 dir_out;  // towards the next polyline point
};

LocalBranch branch_at(const JordanCurve& c, const Vec2& p, int seg_hint) {
  const std::size_t n = c.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (c.points[i] == p) {
      return {{static_cast<int>(i), 0.0}, c.point(i + n - 1) - p, c.point(i + 1) - p};
    }
  }
  const Vec2& a = c.point(seg_hint);
  const Vec2& b = c.point(seg_hint + 1);
  const double s = (p - a).dot(b - a) / (b - a).squaredNorm();
  return {{seg_hint, std::clamp(s, 0.0, std::nextafter(1.0, 0.0))}, a - p, b - p};
}

double direction_angle(const Vec2& d) { return std::atan2(d.y(), d.x()); }

void check_angle(double angle, const ArrangementOptions& opts, const std::string& where) {
  if (angle < opts.theta_min || angle > kPi - opts.theta_min)
    throw geometry_error("tangential contact between " + where + " (crossing angle " +
                         std::to_string(angle) + " rad)");
}

}  // namespace

std::vector<CrossingPoint> compute_crossings(const CurveSet& curves,
                                             const ArrangementOptions& opts) {
  const double eps = curves.eps_geo(opts.eps_geo_rel);
  std::vector<CrossingPoint> out;

  for (const auto& ca : curves.curves) {
    if (ca.family != Family::A) continue;
    const BBox2 box_a = curve_box(ca);
    for (const auto& cb : curves.curves) {
      if (cb.family != Family::B) continue;
      if (!box_a.overlaps(curve_box(cb), eps)) continue;
      const std::string where = ca.name() + " and " + cb.name();

      // Contacts at polyline vertices, keyed by the exact contact point.
      std::map<std::pair<double, double>, std::pair<int, int>> contacts;
      const std::size_t na = ca.size(), nb = cb.size();
      for (std::size_t i = 0; i < na; ++i) {
        const Vec2& a0 = ca.point(i);
        const Vec2& a1 = ca.point(i + 1);
        BBox2 sa;
        sa.extend(a0);
        sa.extend(a1);
        for (std::size_t j = 0; j < nb; ++j) {
          const Vec2& b0 = cb.point(j);
          const Vec2& b1 = cb.point(j + 1);
          BBox2 sb;
          sb.extend(b0);
          sb.extend(b1);
          if (!sa.overlaps(sb, 0.0)) continue;
          const int o1 = orient2d(a0, a1, b0);
          const int o2 = orient2d(a0, a1, b1);
          const int o3 = orient2d(b0, b1, a0);
          const int o4 = orient2d(b0, b1, a1);
          if (o1 * o2 < 0 && o3 * o4 < 0) {
            const Vec2 da = a1 - a0, db = b1 - b0;
            const double den = cross2(da, db);
            const double s = std::clamp(cross2(b0 - a0, db) / den, 0.0, std::nextafter(1.0, 0.0));
            const double u = std::clamp(cross2(b0 - a0, da) / den, 0.0, std::nextafter(1.0, 0.0));
            CrossingPoint c;
            c.position = a0 + s * da;
            c.curve_a = ca.id;
            c.curve_b = cb.id;
            c.angle = angle_between(da, db);
            c.on_a = {static_cast<int>(i), s};
            c.on_b = {static_cast<int>(j), u};
            check_angle(c.angle, opts, where);
            out.push_back(c);
            continue;
          }
          if (!segments_intersect(a0, a1, b0, b1)) continue;
          if (o1 == 0 && o2 == 0)
            throw geometry_error("tangential contact between " + where + " (collinear overlap)");
          // Touching at an endpoint of one of the segments.
          Vec2 p;
          if (o1 == 0 && segments_intersect(a0, a1, b0, b0))
            p = b0;
          else if (o2 == 0 && segments_intersect(a0, a1, b1, b1))
            p = b1;
          else if (o3 == 0)
            p = a0;
          else
            p = a1;
          contacts.emplace(std::pair{p.x(), p.y()}, std::pair{static_cast<int>(i), static_cast<int>(j)});
        }
      }

      for (const auto& [key, segs] : contacts) {
        const Vec2 p(key.first, key.second);
        const LocalBranch la = branch_at(ca, p, segs.first);
        const LocalBranch lb = branch_at(cb, p, segs.second);
        // The curves cross iff their four directions alternate around p.
        std::array<std::pair<double, int>, 4> dirs{{{direction_angle(la.dir_in), 0},
                                                    {direction_angle(la.dir_out), 0},
                                                    {direction_angle(lb.dir_in), 1},
                                                    {direction_angle(lb.dir_out), 1}}};
        for (const Vec2& da : {la.dir_in, la.dir_out})
          for (const Vec2& db : {lb.dir_in, lb.dir_out})
            if (orient2d(Vec2::Zero(), da, db) == 0 && da.dot(db) > 0)
              throw geometry_error("tangential contact between " + where + " (collinear overlap)");
        std::sort(dirs.begin(), dirs.end());
        const bool alternating = dirs[0].second != dirs[1].second && dirs[1].second != dirs[2].second &&
                                 dirs[2].second != dirs[3].second;
        if (!alternating)
          throw geometry_error("tangential contact between " + where + " at (" +
                               std::to_string(p.x()) + ", " + std::to_string(p.y()) + ")");
        CrossingPoint c;
        c.position = p;
        c.curve_a = ca.id;
        c.curve_b = cb.id;
        c.angle = angle_between(la.dir_out - la.dir_in, lb.dir_out - lb.dir_in);
        c.on_a = la.param;
        c.on_b = lb.param;
        check_angle(c.angle, opts, where);
        out.push_back(c);
      }
    }
  }

  if (static_cast<int>(out.size()) > opts.max_crossings)
    throw geometry_error("too many crossings (" + std::to_string(out.size()) + " > " +
                         std::to_string(opts.max_crossings) + ")");

  std::sort(out.begin(), out.end(), [](const CrossingPoint& x, const CrossingPoint& y) {
    if (x.curve_a != y.curve_a) return x.curve_a < y.curve_a;
    if (x.on_a.segment != y.on_a.segment || x.on_a.s != y.on_a.s) return x.on_a < y.on_a;
    if (x.curve_b != y.curve_b) return x.curve_b < y.curve_b;
    return x.on_b < y.on_b;
  });
  for (std::size_t k = 0; k < out.size(); ++k) out[k].id = static_cast<int>(k);

  // Intersections closer than eps_geo along a curve are rejected, not merged.
  for (const auto& c : curves.curves) {
    std::vector<const CrossingPoint*> on;
    for (const auto& x : out)
      if (x.curve_a == c.id || x.curve_b == c.id) on.push_back(&x);
    for (std::size_t i = 0; i < on.size(); ++i)
      for (std::size_t j = i + 1; j < on.size(); ++j)
        if ((on[i]->position - on[j]->position).norm() < eps)
          throw geometry_error("near-degenerate configuration: crossings " +
                               std::to_string(on[i]->id) + " and " + std::to_string(on[j]->id) +
                               " closer than eps_geo");
  }
  return out;
}

std::vector<Vec2> Arrangement::half_edge_polyline(int he) const {
  const auto& poly = edges[half_edges[he].edge].polyline;
  if (he % 2 == 0) return poly;
  return {poly.rbegin(), poly.rend()};
}

std::vector<Vec2> Arrangement::loop_polygon(const std::vector<int>& loop) const {
  std::vector<Vec2> out;
  for (int he : loop) {
    const auto pts = half_edge_polyline(he);
    out.insert(out.end(), pts.begin(), pts.end() - 1);
  }
  return out;
}

std::array<int, 4> Arrangement::crossing_half_edges(int crossing) const {
  const auto& out = vertices.at(crossing).outgoing;
  if (out.size() != 4) throw verification_error("crossing without 4 incident half-edges");
  std::array<int, 4> r{};
  // Rotate so the list starts with the forward half-edge along the A curve.
  int start = 0;
  for (int k = 0; k < 4; ++k) {
    const int he = out[k];
    if (he % 2 == 0 && edges[half_edges[he].edge].family == Family::A) start = k;
  }
  for (int k = 0; k < 4; ++k) r[k] = out[(start + k) % 4];
  return r;
}

std::array<int, 4> Arrangement::crossing_faces(int crossing) const {
  const auto hes = crossing_half_edges(crossing);
  std::array<int, 4> r{};
  for (int k = 0; k < 4; ++k) r[k] = half_edges[hes[k]].face;
  return r;
}

namespace {

Vec2 leaving_direction(const Arrangement& arr, int he) {
  const auto& poly = arr.edges[arr.half_edges[he].edge].polyline;
  if (he % 2 == 0) return poly[1] - poly[0];
  return poly[poly.size() - 2] - poly.back();
}

// Point strictly inside the face bordered on the left by `he`: offset from
// the midpoint of its longest segment by less than the clearance to any
// other curve segment.
Vec2 offset_point(const Arrangement& arr, int he) {
  const auto poly = arr.half_edge_polyline(he);
  std::size_t best = 0;
  for (std::size_t i = 0; i + 1 < poly.size(); ++i)
    if ((poly[i + 1] - poly[i]).squaredNorm() > (poly[best + 1] - poly[best]).squaredNorm()) best = i;
  const Vec2 a = poly[best], b = poly[best + 1];
  const Vec2 m = 0.5 * (a + b);
  const Vec2 d = b - a;
  const Vec2 normal = Vec2(-d.y(), d.x()).normalized();
  double clearance = 0.5 * d.norm();
  for (const auto& c : arr.curves.curves) {
    for (std::size_t i = 0; i < c.size(); ++i) {
      const Vec2& p = c.point(i);
      const Vec2& q = c.point(i + 1);
      const double dist = point_segment_distance(m, p, q);
      if (dist > 0) clearance = std::min(clearance, dist);
    }
  }
  return m + 0.5 * clearance * normal;
}

Vec2 representative_point(const Arrangement& arr, const ArrangementFace& f) {
  std::vector<std::vector<Vec2>> loops;
  for (const auto& loop : f.boundary_loops) loops.push_back(arr.loop_polygon(loop));
  try {
    const auto tri = triangulate_domain(loops);
    double best = -1;
    Vec2 rep = Vec2::Zero();
    for (const auto& t : tri.triangles) {
      const Vec2& p = tri.points[t[0]];
      const Vec2& q = tri.points[t[1]];
      const Vec2& r = tri.points[t[2]];
      const double a = cross2(q - p, r - p);
      if (a > best) {
        best = a;
        rep = (p + q + r) / 3.0;
      }
    }
    if (best > 0) return rep;
  } catch (const AtlasError&) {
    // Pinched boundaries (a loop visiting one vertex twice) defeat the CDT.
  }
  return offset_point(arr, f.boundary_loops.front().front());
}

}  // namespace

Arrangement build_arrangement(const CurveSet& curves, std::vector<CrossingPoint> crossings,
                              const ArrangementOptions& opts) {
  Arrangement arr;
  arr.curves = curves;
  arr.crossings = std::move(crossings);
  arr.eps_geo = curves.eps_geo(opts.eps_geo_rel);

  for (const auto& c : arr.crossings) arr.vertices.push_back({c.position, c.id, -1, {}});

  for (const auto& curve : arr.curves.curves) {
    const int n = static_cast<int>(curve.size());
    std::vector<std::pair<CurveParam, int>> on;  // (param, vertex)
    for (const auto& c : arr.crossings) {
      if (c.curve_a == curve.id) on.emplace_back(c.on_a, c.id);
      if (c.curve_b == curve.id) on.emplace_back(c.on_b, c.id);
    }
    if (on.empty()) {
      const int v = static_cast<int>(arr.vertices.size());
      arr.vertices.push_back({curve.points.front(), -1, curve.id, {}});
      arr.synthetic_vertices.push_back(v);
      ArrangementEdge e;
      e.id = static_cast<int>(arr.edges.size());
      e.curve = curve.id;
      e.family = curve.family;
      e.v_from = e.v_to = v;
      e.polyline = curve.points;
      e.polyline.push_back(curve.points.front());
      arr.edges.push_back(std::move(e));
      continue;
    }
    std::sort(on.begin(), on.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
    const int k = static_cast<int>(on.size());
    for (int i = 0; i < k; ++i) {
      const auto& [p0, v0] = on[i];
      const auto& [p1, v1] = on[(i + 1) % k];
      ArrangementEdge e;
      e.id = static_cast<int>(arr.edges.size());
      e.curve = curve.id;
      e.family = curve.family;
      e.v_from = v0;
      e.v_to = v1;
      e.polyline.push_back(arr.vertices[v0].position);
      int end_seg = p1.segment;
      if (i + 1 >= k) end_seg += n;
      const int j0 = p0.segment + 1;
      const int j1 = end_seg + (p1.s > 0 ? 1 : 0);
      for (int j = j0; j < j1; ++j) e.polyline.push_back(curve.point(static_cast<std::size_t>(j % n)));
      e.polyline.push_back(arr.vertices[v1].position);
      arr.edges.push_back(std::move(e));
    }
  }

  for (auto& e : arr.edges) {
    e.length = 0;
    for (std::size_t i = 0; i + 1 < e.polyline.size(); ++i)
      e.length += (e.polyline[i + 1] - e.polyline[i]).norm();
    if (e.polyline.size() < 2 || e.length == 0)
      throw numerical_error("arrangement: degenerate edge on curve " + std::to_string(e.curve));
  }

  arr.half_edges.resize(2 * arr.edges.size());
  for (const auto& e : arr.edges) {
    arr.half_edges[2 * e.id] = {e.id, e.v_from, -1, -1, -1};
    arr.half_edges[2 * e.id + 1] = {e.id, e.v_to, -1, -1, -1};
    arr.vertices[e.v_from].outgoing.push_back(2 * e.id);
    arr.vertices[e.v_to].outgoing.push_back(2 * e.id + 1);
  }
  for (auto& v : arr.vertices) {
    std::vector<std::pair<double, int>> keyed;
    for (int he : v.outgoing) keyed.emplace_back(direction_angle(leaving_direction(arr, he)), he);
    std::sort(keyed.begin(), keyed.end());
    for (std::size_t i = 0; i + 1 < keyed.size(); ++i)
      if (keyed[i].first == keyed[i + 1].first)
        throw numerical_error("arrangement: coincident edge directions at a vertex");
    v.outgoing.clear();
    for (const auto& [a, he] : keyed) v.outgoing.push_back(he);
  }
  for (int h = 0; h < static_cast<int>(arr.half_edges.size()); ++h) {
    const auto& out = arr.vertices[arr.dest(h)].outgoing;
    const auto it = std::find(out.begin(), out.end(), twin(h));
    const int pos = static_cast<int>(it - out.begin());
    const int deg = static_cast<int>(out.size());
    const int nxt = out[(pos + deg - 1) % deg];
    arr.half_edges[h].next = nxt;
    arr.half_edges[nxt].prev = h;
  }

  // Trace half-edge cycles.
  std::vector<std::vector<int>> cycles;
  std::vector<int> cycle_of(arr.half_edges.size(), -1);
  for (int h = 0; h < static_cast<int>(arr.half_edges.size()); ++h) {
    if (cycle_of[h] >= 0) continue;
    std::vector<int> cyc;
    int cur = h;
    do {
      if (cycle_of[cur] >= 0 || cyc.size() > arr.half_edges.size())
        throw numerical_error("arrangement: inconsistent half-edge cycle");
      cycle_of[cur] = static_cast<int>(cycles.size());
      cyc.push_back(cur);
      cur = arr.half_edges[cur].next;
    } while (cur != h);
    cycles.push_back(std::move(cyc));
  }

  UnionFind uf(arr.vertices.size());
  for (const auto& e : arr.edges) uf.unite(e.v_from, e.v_to);
  std::map<int, int> comp_index;
  for (int v = 0; v < static_cast<int>(arr.vertices.size()); ++v)
    comp_index.emplace(uf.find(v), static_cast<int>(comp_index.size()));
  arr.components = static_cast<int>(comp_index.size());
  auto comp_of_cycle = [&](int c) {
    return comp_index.at(uf.find(arr.half_edges[cycles[c].front()].origin));
  };

  std::vector<double> cyc_area(cycles.size());
  std::vector<std::vector<Vec2>> cyc_poly(cycles.size());
  for (std::size_t c = 0; c < cycles.size(); ++c) {
    cyc_poly[c] = arr.loop_polygon(cycles[c]);
    cyc_area[c] = signed_area(cyc_poly[c]);
    if (cyc_area[c] == 0) throw numerical_error("arrangement: zero-area boundary cycle");
  }

  arr.faces.push_back({});
  arr.faces[0].id = 0;
  arr.faces[0].is_unbounded = true;
  std::vector<int> face_of_cycle(cycles.size(), -1);
  for (std::size_t c = 0; c < cycles.size(); ++c) {
    if (cyc_area[c] <= 0) continue;
    ArrangementFace f;
    f.id = static_cast<int>(arr.faces.size());
    f.boundary_loops.push_back(cycles[c]);
    f.area = cyc_area[c];
    face_of_cycle[c] = f.id;
    arr.faces.push_back(std::move(f));
  }
  for (std::size_t c = 0; c < cycles.size(); ++c) {
    if (cyc_area[c] > 0) continue;
    const Vec2 probe = cyc_poly[c].front();
    const int comp = comp_of_cycle(static_cast<int>(c));
    int best = -1;
    for (std::size_t d = 0; d < cycles.size(); ++d) {
      if (cyc_area[d] <= 0 || comp_of_cycle(static_cast<int>(d)) == comp) continue;
      if (!point_in_polygon(probe, cyc_poly[d])) continue;
      if (best < 0 || cyc_area[d] < cyc_area[best]) best = static_cast<int>(d);
    }
    const int face = best < 0 ? 0 : face_of_cycle[best];
    face_of_cycle[c] = face;
    arr.faces[face].boundary_loops.push_back(cycles[c]);
    if (face != 0) arr.faces[face].area += cyc_area[c];
  }
  for (std::size_t c = 0; c < cycles.size(); ++c)
    for (int h : cycles[c]) arr.half_edges[h].face = face_of_cycle[c];

  const long V = static_cast<long>(arr.vertices.size());
  const long E = static_cast<long>(arr.edges.size());
  const long F = static_cast<long>(arr.faces.size());
  if (V - E + F != 1 + arr.components)
    throw numerical_error("arrangement: Euler formula violated (V=" + std::to_string(V) +
                          ", E=" + std::to_string(E) + ", F=" + std::to_string(F) +
                          ", components=" + std::to_string(arr.components) + ")");

  const BBox2 box = arr.curves.bbox();
  arr.faces[0].representative = box.lo - Vec2(1, 1) * std::max(box.diagonal(), 1.0);
  for (std::size_t f = 1; f < arr.faces.size(); ++f)
    arr.faces[f].representative = representative_point(arr, arr.faces[f]);
  return arr;
}

Arrangement assign_signs(Arrangement arr) {
  for (auto& f : arr.faces) {
    f.containment.clear();
    bool in_a = false, in_b = false;
    if (!f.is_unbounded) {
      for (const auto& c : arr.curves.curves) {
        if (point_in_polygon(f.representative, c.points)) {
          f.containment.push_back(c.id);
          (c.family == Family::A ? in_a : in_b) = true;
        }
      }
    }
    f.sign = f.containment.size() % 2 == 0 ? Sign::Minus : Sign::Plus;
    f.region_class = in_a ? (in_b ? RegionClass::InsideBoth : RegionClass::AOnly)
                          : (in_b ? RegionClass::BOnly : RegionClass::OutsideBoth);
  }
  for (const auto& e : arr.edges) {
    if (arr.faces[arr.left_face(e.id)].sign == arr.faces[arr.right_face(e.id)].sign)
      throw verification_error("checkerboard violation across edge " + std::to_string(e.id));
  }
  for (const auto& c : arr.crossings) {
    const auto faces = arr.crossing_faces(c.id);
    for (int k = 0; k < 4; ++k)
      if (arr.faces[faces[k]].sign == arr.faces[faces[(k + 1) % 4]].sign)
        throw verification_error("sign pattern does not alternate at crossing " +
                                 std::to_string(c.id));
  }
  arr.signed_ = true;
  return arr;
}

Arrangement make_arrangement(const CurveSet& curves, const ArrangementOptions& opts) {
  return assign_signs(build_arrangement(curves, compute_crossings(curves, opts), opts));
}

}  // namespace vatlas
