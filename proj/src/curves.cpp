#include "vatlas/curves.hpp"

#include "vatlas/error.hpp"

#include <algorithm>

namespace vatlas {

namespace {

bool on_segment(const Vec2& a, const Vec2& b, const Vec2& p) {
  return std::min(a.x(), b.x()) <= p.x() && p.x() <= std::max(a.x(), b.x()) &&
         std::min(a.y(), b.y()) <= p.y() && p.y() <= std::max(a.y(), b.y());
}

Vec2 parse_point(const nlohmann::json& j, const std::string& what) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw input_error(what + ": expected [x, y]");
  return {j[0].get<double>(), j[1].get<double>()};
}

int parse_samples(const nlohmann::json& j, const std::string& what) {
  if (!j.contains("samples") || !j["samples"].is_number_integer())
    throw input_error(what + ": missing integer 'samples'");
  const int n = j["samples"].get<int>();
  if (n < 3) throw input_error(what + ": 'samples' must be at least 3");
  return n;
}

double parse_positive(const nlohmann::json& j, const char* key, const std::string& what) {
  if (!j.contains(key) || !j[key].is_number()) throw input_error(what + ": missing '" + key + "'");
  const double v = j[key].get<double>();
  if (!(v > 0)) throw input_error(what + ": '" + key + "' must be positive");
  return v;
}

struct Segment {
  Vec2 a, b;
  BBox2 box;
};

std::vector<Segment> segments_of(const JordanCurve& c) {
  std::vector<Segment> segs;
  segs.reserve(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) {
    Segment s{c.point(i), c.point(i + 1), {}};
    s.box.extend(s.a);
    s.box.extend(s.b);
    segs.push_back(s);
  }
  return segs;
}

void check_simple(const JordanCurve& c) {
  const std::size_t n = c.size();
  if (n < 3) throw input_error("curve " + c.name() + ": a closed polyline needs at least 3 points");
  for (std::size_t i = 0; i < n; ++i) {
    if (c.point(i) == c.point(i + 1))
      throw input_error("curve " + c.name() + ": repeated consecutive point");
  }
  if (std::abs(signed_area2(c.points)) == 0.0)
    throw input_error("curve " + c.name() + ": polyline encloses no area");

  const auto segs = segments_of(c);
  for (std::size_t i = 0; i < n; ++i) {
    // Consecutive segments share a vertex; they must not fold back onto each other.
    const Vec2& p = c.point(i);
    const Vec2& q = c.point(i + 1);
    const Vec2& r = c.point(i + 2);
    if (orient2d(p, q, r) == 0 && (q - p).dot(r - q) < 0)
      throw input_error("curve " + c.name() + ": self-intersecting polyline (fold-back)");
    for (std::size_t j = i + 2; j < n; ++j) {
      if (i == 0 && j == n - 1) continue;
      if (!segs[i].box.overlaps(segs[j].box, 0.0)) continue;
      if (segments_intersect(segs[i].a, segs[i].b, segs[j].a, segs[j].b))
        throw input_error("curve " + c.name() + ": self-intersecting polyline");
    }
  }
}

void check_disjoint(const JordanCurve& c1, const JordanCurve& c2) {
  const auto s1 = segments_of(c1);
  const auto s2 = segments_of(c2);
  BBox2 b2;
  for (const auto& p : c2.points) b2.extend(p);
  for (const auto& a : s1) {
    if (!a.box.overlaps(b2, 0.0)) continue;
    for (const auto& b : s2) {
      if (!a.box.overlaps(b.box, 0.0)) continue;
      if (segments_intersect(a.a, a.b, b.a, b.b))
        throw input_error("intra-family intersection between curves " + c1.name() + " and " +
                          c2.name());
    }
  }
}

}  // namespace

bool segments_intersect(const Vec2& a0, const Vec2& a1, const Vec2& b0, const Vec2& b1) {
  const int o1 = orient2d(a0, a1, b0);
  const int o2 = orient2d(a0, a1, b1);
  const int o3 = orient2d(b0, b1, a0);
  const int o4 = orient2d(b0, b1, a1);
  if (o1 * o2 < 0 && o3 * o4 < 0) return true;
  if (o1 == 0 && on_segment(a0, a1, b0)) return true;
  if (o2 == 0 && on_segment(a0, a1, b1)) return true;
  if (o3 == 0 && on_segment(b0, b1, a0)) return true;
  if (o4 == 0 && on_segment(b0, b1, a1)) return true;
  return false;
}

std::size_t CurveSet::count(Family f) const {
  return static_cast<std::size_t>(
      std::count_if(curves.begin(), curves.end(), [f](const auto& c) { return c.family == f; }));
}

BBox2 CurveSet::bbox() const {
  BBox2 box;
  for (const auto& c : curves)
    for (const auto& p : c.points) box.extend(p);
  return box;
}

double CurveSet::diameter() const {
  std::vector<Vec2> pts;
  for (const auto& c : curves) pts.insert(pts.end(), c.points.begin(), c.points.end());
  double best = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j)
      best = std::max(best, (pts[i] - pts[j]).squaredNorm());
  return std::sqrt(best);
}

std::vector<Vec2> sample_circle(const Vec2& center, double r, int samples, double phase) {
  std::vector<Vec2> pts;
  pts.reserve(samples);
  for (int k = 0; k < samples; ++k) {
    const double a = phase + 2 * kPi * k / samples;
    pts.emplace_back(center.x() + r * std::cos(a), center.y() + r * std::sin(a));
  }
  return pts;
}

std::vector<Vec2> sample_ellipse(const Vec2& center, double rx, double ry, double angle,
                                 int samples) {
  std::vector<Vec2> pts;
  pts.reserve(samples);
  const double ca = std::cos(angle), sa = std::sin(angle);
  for (int k = 0; k < samples; ++k) {
    const double a = 2 * kPi * k / samples;
    const double x = rx * std::cos(a), y = ry * std::sin(a);
    pts.emplace_back(center.x() + ca * x - sa * y, center.y() + sa * x + ca * y);
  }
  return pts;
}

JordanCurve parse_curve_entry(const nlohmann::json& entry, Family family, int id) {
  JordanCurve c;
  c.id = id;
  c.family = family;
  const std::string what = std::string("curve entry ") + to_string(family) + std::to_string(id);
  if (!entry.is_object()) throw input_error(what + ": expected an object");
  if (entry.contains("points")) {
    const auto& pts = entry["points"];
    if (!pts.is_array()) throw input_error(what + ": 'points' must be an array");
    for (const auto& p : pts) c.points.push_back(parse_point(p, what));
    if (c.points.size() >= 2 && c.points.front() == c.points.back()) c.points.pop_back();
    if (c.points.size() < 3) throw input_error(what + ": open polyline (fewer than 3 points)");
  } else if (entry.contains("circle")) {
    const auto& j = entry["circle"];
    if (!j.contains("center")) throw input_error(what + ": circle needs 'center'");
    c.points = sample_circle(parse_point(j["center"], what), parse_positive(j, "r", what),
                             parse_samples(j, what), j.value("phase", 0.0));
  } else if (entry.contains("ellipse")) {
    const auto& j = entry["ellipse"];
    if (!j.contains("center")) throw input_error(what + ": ellipse needs 'center'");
    c.points = sample_ellipse(parse_point(j["center"], what), parse_positive(j, "rx", what),
                              parse_positive(j, "ry", what), j.value("angle", 0.0),
                              parse_samples(j, what));
  } else {
    throw input_error(what + ": expected 'points', 'circle' or 'ellipse'");
  }
  return c;
}

void validate_curve_set(CurveSet& set) {
  std::stable_sort(set.curves.begin(), set.curves.end(),
                   [](const auto& x, const auto& y) { return x.family < y.family; });
  for (std::size_t i = 0; i < set.curves.size(); ++i) {
    auto& c = set.curves[i];
    c.id = static_cast<int>(i);
    check_simple(c);
    if (signed_area2(c.points) < 0) std::reverse(c.points.begin(), c.points.end());
  }
  for (std::size_t i = 0; i < set.curves.size(); ++i)
    for (std::size_t j = i + 1; j < set.curves.size(); ++j)
      if (set.curves[i].family == set.curves[j].family)
        check_disjoint(set.curves[i], set.curves[j]);
}

CurveSet load_curve_set(const nlohmann::json& doc) {
  if (!doc.is_object()) throw input_error("config: expected a JSON object");
  CurveSet set;
  int id = 0;
  for (auto [key, fam] : {std::pair{"curves_a", Family::A}, std::pair{"curves_b", Family::B}}) {
    if (!doc.contains(key)) continue;
    if (!doc[key].is_array()) throw input_error(std::string("config: '") + key + "' must be a list");
    for (const auto& entry : doc[key]) set.curves.push_back(parse_curve_entry(entry, fam, id++));
  }
  if (set.curves.empty()) throw input_error("config: no curves given");
  validate_curve_set(set);
  return set;
}

CurveSet load_curve_set(std::string_view json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw input_error(std::string("malformed document: ") + e.what());
  }
  return load_curve_set(doc);
}

CurveSet make_curve_set(std::vector<std::vector<Vec2>> a, std::vector<std::vector<Vec2>> b) {
  CurveSet set;
  for (auto& pts : a) set.curves.push_back({0, Family::A, std::move(pts)});
  for (auto& pts : b) set.curves.push_back({0, Family::B, std::move(pts)});
  validate_curve_set(set);
  return set;
}

}  // namespace vatlas
