#include "vatlas/triangulate.hpp"

#include "vatlas/error.hpp"

#include <algorithm>
#include <deque>
#include <random>
#include <unordered_map>
#include <unordered_set>

namespace vatlas {

namespace {

inline int nx(int i) { return i == 2 ? 0 : i + 1; }
inline int pv(int i) { return i == 0 ? 2 : i - 1; }

inline std::uint64_t edge_key(int a, int b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) |
         static_cast<std::uint32_t>(b);
}

// Incremental Delaunay triangulation with Lawson flips, followed by
// constraint recovery (Sloan) and constrained-Delaunay restoration.
class Cdt {
public:
  explicit Cdt(std::vector<Vec2> pts) : pts_(std::move(pts)) {
    BBox2 box;
    for (const auto& p : pts_) box.extend(p);
    const Vec2 c = 0.5 * (box.lo + box.hi);
    const double d = std::max({box.hi.x() - box.lo.x(), box.hi.y() - box.lo.y(), 1e-12});
    n_real_ = static_cast<int>(pts_.size());
    pts_.emplace_back(c.x() - 40 * d, c.y() - 30 * d);
    pts_.emplace_back(c.x() + 40 * d, c.y() - 30 * d);
    pts_.emplace_back(c.x(), c.y() + 40 * d);
    vert_tri_.assign(pts_.size(), -1);
    add_tri({n_real_, n_real_ + 1, n_real_ + 2}, {-1, -1, -1});
  }

  void insert_all() {
    for (int i = 0; i < n_real_; ++i) insert(i);
  }

  void insert_constraint(int a, int b);
  void restore_delaunay();
  std::vector<std::array<int, 3>> inside_triangles() const;

private:
  struct Tri {
    std::array<int, 3> v;
    std::array<int, 3> n;  // n[i] lies across the edge opposite v[i]
  };

  int add_tri(std::array<int, 3> v, std::array<int, 3> n) {
    tris_.push_back({v, n});
    const int t = static_cast<int>(tris_.size()) - 1;
    for (int k : v) vert_tri_[k] = t;
    return t;
  }
  void set_tri(int t, std::array<int, 3> v, std::array<int, 3> n) {
    tris_[t] = {v, n};
    for (int k : v) vert_tri_[k] = t;
  }
  void relink(int nbr, int from, int to) {
    if (nbr < 0) return;
    for (int& x : tris_[nbr].n)
      if (x == from) {
        x = to;
        return;
      }
  }
  int index_of(int t, int v) const {
    for (int i = 0; i < 3; ++i)
      if (tris_[t].v[i] == v) return i;
    return -1;
  }
  bool constrained(int a, int b) const { return constraints_.count(edge_key(a, b)) != 0; }

  void insert(int p);
  void legalize(int t, int i);
  void flip(int t, int i);
  bool find_edge(int a, int b, int& t, int& i) const;

  std::vector<Vec2> pts_;
  int n_real_ = 0;
  std::vector<Tri> tris_;
  std::vector<int> vert_tri_;
  std::unordered_set<std::uint64_t> constraints_;
  int last_ = 0;
  std::minstd_rand walk_rng_{12345};
};

void Cdt::insert(int p) {
  const Vec2& P = pts_[p];
  int t = last_;
  int on_edge = -1;
  for (std::size_t guard = 0;; ++guard) {
    if (guard > 4 * tris_.size() + 100) throw numerical_error("triangulation: point location failed");
    const int start = static_cast<int>(walk_rng_() % 3);
    bool moved = false;
    int zeros = 0;
    on_edge = -1;
    for (int k = 0; k < 3; ++k) {
      const int i = (start + k) % 3;
      const auto& T = tris_[t];
      const int o = orient2d(pts_[T.v[nx(i)]], pts_[T.v[pv(i)]], P);
      if (o < 0) {
        t = T.n[i];
        moved = true;
        break;
      }
      if (o == 0) {
        ++zeros;
        on_edge = i;
      }
    }
    if (!moved) {
      if (zeros >= 2) throw geometry_error("triangulation: duplicate point");
      break;
    }
  }

  if (on_edge < 0) {
    const auto T = tris_[t];
    const int a = T.v[0], b = T.v[1], c = T.v[2];
    const int t1 = add_tri({b, c, p}, {-1, -1, -1});
    const int t2 = add_tri({c, a, p}, {-1, -1, -1});
    set_tri(t, {a, b, p}, {t1, t2, T.n[2]});
    tris_[t1].n = {t2, t, T.n[0]};
    tris_[t2].n = {t, t1, T.n[1]};
    relink(T.n[0], t, t1);
    relink(T.n[1], t, t2);
    last_ = t;
    legalize(t, 2);
    legalize(t1, 2);
    legalize(t2, 2);
    return;
  }

  const int i = on_edge;
  const auto T = tris_[t];
  const int a = T.v[i], b = T.v[nx(i)], c = T.v[pv(i)];
  const int u = T.n[i];
  if (u < 0) throw numerical_error("triangulation: point on outer hull");
  const auto U = tris_[u];
  int j = -1;
  for (int k = 0; k < 3; ++k)
    if (U.n[k] == t) j = k;
  const int d = U.v[j];
  const int n_ab = T.n[pv(i)], n_ca = T.n[nx(i)];
  const int u_bd = U.n[nx(j)], u_dc = U.n[pv(j)];
  const int t1 = add_tri({a, p, c}, {-1, -1, -1});
  const int t3 = add_tri({d, p, b}, {-1, -1, -1});
  set_tri(t, {a, b, p}, {t3, t1, n_ab});
  tris_[t1].n = {u, n_ca, t};
  set_tri(u, {d, c, p}, {t1, t3, u_dc});
  tris_[t3].n = {t, u_bd, u};
  relink(n_ca, t, t1);
  relink(u_bd, u, t3);
  last_ = t;
  legalize(t, 2);
  legalize(t1, 1);
  legalize(u, 2);
  legalize(t3, 1);
}

void Cdt::flip(int t, int i) {
  const auto T = tris_[t];
  const int p = T.v[i], b = T.v[nx(i)], c = T.v[pv(i)];
  const int u = T.n[i];
  const auto U = tris_[u];
  int j = -1;
  for (int k = 0; k < 3; ++k)
    if (U.n[k] == t) j = k;
  const int d = U.v[j];
  const int n_pb = T.n[pv(i)], n_cp = T.n[nx(i)];
  const int n_bd = U.n[nx(j)], n_dc = U.n[pv(j)];
  set_tri(t, {p, b, d}, {n_bd, u, n_pb});
  set_tri(u, {p, d, c}, {n_dc, n_cp, t});
  relink(n_bd, u, t);
  relink(n_cp, t, u);
}

void Cdt::legalize(int t, int i) {
  std::vector<std::pair<int, int>> stack{{t, i}};
  while (!stack.empty()) {
    auto [tt, ii] = stack.back();
    stack.pop_back();
    const auto& T = tris_[tt];
    const int u = T.n[ii];
    if (u < 0) continue;
    const int p = T.v[ii];
    if (constrained(T.v[nx(ii)], T.v[pv(ii)])) continue;
    int j = -1;
    for (int k = 0; k < 3; ++k)
      if (tris_[u].n[k] == tt) j = k;
    const int d = tris_[u].v[j];
    if (incircle(pts_[T.v[0]], pts_[T.v[1]], pts_[T.v[2]], pts_[d]) > 0) {
      flip(tt, ii);
      // p sits at index 0 of both triangles after the flip.
      (void)p;
      stack.push_back({tt, 0});
      stack.push_back({u, 0});
    }
  }
}

bool Cdt::find_edge(int a, int b, int& t, int& i) const {
  int start = vert_tri_[a];
  if (start >= 0) {
    int cur = start;
    for (int guard = 0; guard < 1000; ++guard) {
      const int k = index_of(cur, a);
      if (k < 0) break;
      const auto& T = tris_[cur];
      if (T.v[nx(k)] == b) {
        t = cur;
        i = pv(k);
        return true;
      }
      if (T.v[pv(k)] == b) {
        t = cur;
        i = nx(k);
        return true;
      }
      cur = T.n[nx(k)];
      if (cur < 0 || cur == start) break;
    }
  }
  for (int cur = 0; cur < static_cast<int>(tris_.size()); ++cur) {
    const auto& T = tris_[cur];
    for (int k = 0; k < 3; ++k) {
      if (T.v[k] == a && (T.v[nx(k)] == b || T.v[pv(k)] == b)) {
        t = cur;
        i = T.v[nx(k)] == b ? pv(k) : nx(k);
        return true;
      }
    }
  }
  return false;
}

void Cdt::insert_constraint(int a, int b) {
  int t, i;
  if (find_edge(a, b, t, i)) {
    constraints_.insert(edge_key(a, b));
    return;
  }
  const Vec2& A = pts_[a];
  const Vec2& B = pts_[b];

  // Collect edges crossing segment ab, walking from a.
  std::deque<std::pair<int, int>> crossing;
  int cur = -1;
  for (int tt = 0; tt < static_cast<int>(tris_.size()) && cur < 0; ++tt) {
    const int k = index_of(tt, a);
    if (k < 0) continue;
    const auto& T = tris_[tt];
    const int v1 = T.v[nx(k)], v2 = T.v[pv(k)];
    const int o1 = orient2d(A, pts_[v1], B);
    const int o2 = orient2d(A, pts_[v2], B);
    if ((o1 == 0 && (pts_[v1] - A).dot(B - A) > 0) || (o2 == 0 && (pts_[v2] - A).dot(B - A) > 0))
      throw geometry_error("triangulation: point lies on a constraint segment");
    if (o1 > 0 && o2 < 0) {
      cur = tt;
      crossing.emplace_back(v1, v2);
    }
  }
  if (cur < 0) throw numerical_error("triangulation: cannot start constraint walk");
  int right = crossing.back().first, left = crossing.back().second;
  for (std::size_t guard = 0;; ++guard) {
    if (guard > tris_.size()) throw numerical_error("triangulation: constraint walk failed");
    const auto& T = tris_[cur];
    int k = -1;
    for (int m = 0; m < 3; ++m)
      if (T.v[m] != right && T.v[m] != left) k = m;
    const int u = T.n[k];
    int j = -1;
    for (int m = 0; m < 3; ++m)
      if (tris_[u].v[m] != right && tris_[u].v[m] != left) j = m;
    const int w = tris_[u].v[j];
    if (w == b) break;
    const int o = orient2d(A, B, pts_[w]);
    if (o == 0) throw geometry_error("triangulation: point lies on a constraint segment");
    if (o > 0)
      left = w;
    else
      right = w;
    crossing.emplace_back(right, left);
    cur = u;
  }

  std::size_t stall = 0;
  while (!crossing.empty()) {
    auto [x, y] = crossing.front();
    crossing.pop_front();
    int tt, ii;
    if (!find_edge(x, y, tt, ii)) throw numerical_error("triangulation: lost crossing edge");
    const auto T = tris_[tt];
    const int p = T.v[ii];
    const int u = T.n[ii];
    int j = -1;
    for (int m = 0; m < 3; ++m)
      if (tris_[u].n[m] == tt) j = m;
    const int d = tris_[u].v[j];
    const int s1 = orient2d(pts_[p], pts_[d], pts_[x]);
    const int s2 = orient2d(pts_[p], pts_[d], pts_[y]);
    if (s1 * s2 >= 0) {
      crossing.emplace_back(x, y);
      if (++stall > 4 * crossing.size() + 100)
        throw numerical_error("triangulation: constraint recovery stalled");
      continue;
    }
    stall = 0;
    flip(tt, ii);
    if (p != a && p != b && d != a && d != b &&
        orient2d(A, B, pts_[p]) * orient2d(A, B, pts_[d]) < 0)
      crossing.emplace_back(p, d);
  }
  constraints_.insert(edge_key(a, b));
}

void Cdt::restore_delaunay() {
  for (int pass = 0; pass < 100; ++pass) {
    bool flipped = false;
    for (int t = 0; t < static_cast<int>(tris_.size()); ++t) {
      for (int i = 0; i < 3; ++i) {
        const auto& T = tris_[t];
        const int u = T.n[i];
        if (u < 0 || constrained(T.v[nx(i)], T.v[pv(i)])) continue;
        int j = -1;
        for (int m = 0; m < 3; ++m)
          if (tris_[u].n[m] == t) j = m;
        const int d = tris_[u].v[j];
        if (incircle(pts_[T.v[0]], pts_[T.v[1]], pts_[T.v[2]], pts_[d]) > 0) {
          // A non-Delaunay edge of a triangulation always has a convex quad.
          flip(t, i);
          flipped = true;
        }
      }
    }
    if (!flipped) return;
  }
  throw numerical_error("triangulation: Delaunay restoration did not converge");
}

std::vector<std::array<int, 3>> Cdt::inside_triangles() const {
  std::vector<int> label(tris_.size(), -1);
  std::deque<int> queue;
  for (int t = 0; t < static_cast<int>(tris_.size()); ++t) {
    for (int k : tris_[t].v)
      if (k >= n_real_) {
        label[t] = 0;
        queue.push_back(t);
        break;
      }
  }
  while (!queue.empty()) {
    const int t = queue.front();
    queue.pop_front();
    const auto& T = tris_[t];
    for (int i = 0; i < 3; ++i) {
      const int u = T.n[i];
      if (u < 0) continue;
      const int want = constrained(T.v[nx(i)], T.v[pv(i)]) ? 1 - label[t] : label[t];
      if (label[u] < 0) {
        label[u] = want;
        queue.push_back(u);
      } else if (label[u] != want) {
        throw numerical_error("triangulation: inconsistent inside/outside labeling");
      }
    }
  }
  std::vector<std::array<int, 3>> out;
  for (int t = 0; t < static_cast<int>(tris_.size()); ++t)
    if (label[t] == 1) out.push_back(tris_[t].v);
  return out;
}

// Uniform grid over boundary segments for clearance queries.
class SegmentGrid {
public:
  SegmentGrid(const std::vector<std::pair<Vec2, Vec2>>& segs, double cell) : segs_(segs), cell_(cell) {
    for (std::size_t s = 0; s < segs_.size(); ++s) {
      BBox2 b;
      b.extend(segs_[s].first);
      b.extend(segs_[s].second);
      for (long ix = key(b.lo.x()); ix <= key(b.hi.x()); ++ix)
        for (long iy = key(b.lo.y()); iy <= key(b.hi.y()); ++iy) cells_[pack(ix, iy)].push_back(s);
    }
  }

  // True when p keeps distance >= clearance from every segment and stays
  // outside every segment's (inflated) diametral circle.
  bool clear(const Vec2& p, double clearance) const {
    const long r = static_cast<long>(std::ceil(clearance / cell_)) + 1;
    const long cx = key(p.x()), cy = key(p.y());
    for (long ix = cx - r; ix <= cx + r; ++ix) {
      for (long iy = cy - r; iy <= cy + r; ++iy) {
        auto it = cells_.find(pack(ix, iy));
        if (it == cells_.end()) continue;
        for (std::size_t s : it->second) {
          const auto& [a, b] = segs_[s];
          if (point_segment_distance(p, a, b) < clearance) return false;
          if ((p - 0.5 * (a + b)).norm() < 0.55 * (b - a).norm()) return false;
        }
      }
    }
    return true;
  }

private:
  long key(double v) const { return static_cast<long>(std::floor(v / cell_)); }
  static std::uint64_t pack(long x, long y) {
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(x)) << 32) |
           static_cast<std::uint32_t>(y);
  }

  const std::vector<std::pair<Vec2, Vec2>>& segs_;
  double cell_;
  std::unordered_map<std::uint64_t, std::vector<std::size_t>> cells_;
};

bool inside_even_odd(const Vec2& p, std::span<const std::vector<Vec2>> loops) {
  bool in = false;
  for (const auto& loop : loops)
    if (point_in_polygon(p, loop)) in = !in;
  return in;
}

}  // namespace

PlanarTriangulation triangulate_domain(std::span<const std::vector<Vec2>> loops,
                                       const TriangulateOptions& opts) {
  PlanarTriangulation out;
  std::vector<std::pair<int, int>> constraints;
  std::vector<std::pair<Vec2, Vec2>> segs;
  for (const auto& loop : loops) {
    if (loop.size() < 3) throw geometry_error("triangulation: loop with fewer than 3 points");
    const int base = static_cast<int>(out.points.size());
    const int n = static_cast<int>(loop.size());
    for (int i = 0; i < n; ++i) {
      out.points.push_back(loop[i]);
      constraints.emplace_back(base + i, base + (i + 1) % n);
      segs.emplace_back(loop[i], loop[(i + 1) % n]);
    }
  }
  out.boundary_count = out.points.size();

  if (opts.h > 0) {
    BBox2 box;
    for (const auto& p : out.points) box.extend(p);
    const double h = opts.h;
    const double dy = h * std::sqrt(3.0) / 2;
    SegmentGrid grid(segs, h);
    std::mt19937_64 rng(opts.seed);
    std::uniform_real_distribution<double> jitter(-1e-3 * h, 1e-3 * h);
    int row = 0;
    for (double y = box.lo.y() + 0.5 * dy; y < box.hi.y(); y += dy, ++row) {
      const double x0 = box.lo.x() + ((row % 2) ? 0.5 * h : 0.0) + 0.25 * h;
      for (double x = x0; x < box.hi.x(); x += h) {
        const Vec2 p(x + jitter(rng), y + jitter(rng));
        if (!inside_even_odd(p, loops)) continue;
        if (!grid.clear(p, 0.55 * h)) continue;
        out.points.push_back(p);
      }
    }
  }

  Cdt cdt(out.points);
  cdt.insert_all();
  for (auto [a, b] : constraints) cdt.insert_constraint(a, b);
  cdt.restore_delaunay();
  out.triangles = cdt.inside_triangles();
  return out;
}

double min_angle_deg(const PlanarTriangulation& tri) {
  double best = 180.0;
  for (const auto& t : tri.triangles) {
    for (int k = 0; k < 3; ++k) {
      const Vec2 u = tri.points[t[(k + 1) % 3]] - tri.points[t[k]];
      const Vec2 v = tri.points[t[(k + 2) % 3]] - tri.points[t[k]];
      best = std::min(best, angle_between(u, v) * 180.0 / kPi);
    }
  }
  return best;
}

}  // namespace vatlas
