#pragma once

#include "vatlas/geometry.hpp"

#include <json.hpp>

#include <string>
#include <string_view>
#include <vector>

namespace vatlas {

enum class Family { A, B };

inline const char* to_string(Family f) { return f == Family::A ? "A" : "B"; }

struct JordanCurve {
  int id = 0;
  Family family = Family::A;
  std::vector<Vec2> points;  // closed polyline, counterclockwise after normalization

  std::size_t size() const { return points.size(); }
  const Vec2& point(std::size_t i) const { return points[i % points.size()]; }
  std::string name() const { return std::string(to_string(family)) + std::to_string(id); }
};

struct CurveSet {
  std::vector<JordanCurve> curves;  // ids are indices; A curves first, then B curves

  std::size_t count(Family f) const;
  BBox2 bbox() const;
  // Largest distance between two curve points.
  double diameter() const;
  // Coincidence tolerance: 1e-9 of the bounding-box diagonal by default.
  double eps_geo(double rel = 1e-9) const { return rel * bbox().diagonal(); }
};

// Shape of one curve entry in a config document:
//   {"points": [[x, y], ...]}
//   {"circle": {"center": [x, y], "r": r, "samples": n}}
//   {"ellipse": {"center": [x, y], "rx": a, "ry": b, "angle": radians, "samples": n}}
JordanCurve parse_curve_entry(const nlohmann::json& entry, Family family, int id);

// Builds a validated CurveSet from a document carrying `curves_a` / `curves_b`.
// Throws AtlasError(Input) for malformed entries, open or self-intersecting
// polylines, and intersecting curves of the same family.
CurveSet load_curve_set(const nlohmann::json& doc);
CurveSet load_curve_set(std::string_view json_text);

// Validates and normalizes (counterclockwise orientation, ids) in place.
void validate_curve_set(CurveSet& set);

CurveSet make_curve_set(std::vector<std::vector<Vec2>> a, std::vector<std::vector<Vec2>> b);

std::vector<Vec2> sample_circle(const Vec2& center, double r, int samples, double phase = 0.0);
std::vector<Vec2> sample_ellipse(const Vec2& center, double rx, double ry, double angle,
                                 int samples);

// Closed-segment intersection test with exact predicates (touching counts).
bool segments_intersect(const Vec2& a0, const Vec2& a1, const Vec2& b0, const Vec2& b1);

}  // namespace vatlas
