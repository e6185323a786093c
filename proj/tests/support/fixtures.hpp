#pragma once

// Curve configurations shared by unit and acceptance tests.

#include "vatlas/curves.hpp"

#include <random>
#include <string>
#include <vector>

namespace vatlas::fixtures {

struct NamedConfig {
  std::string name;
  CurveSet curves;
};

inline CurveSet lens(int samples = 256) {
  return make_curve_set({sample_circle(Vec2(0, 0), 1.0, samples)},
                        {sample_circle(Vec2(1, 0), 1.0, samples)});
}

inline CurveSet disjoint_circles(int samples = 128) {
  return make_curve_set({sample_circle(Vec2(0, 0), 1.0, samples)},
                        {sample_circle(Vec2(3, 0), 1.0, samples)});
}

inline CurveSet single_circle(int samples = 128) {
  return make_curve_set({sample_circle(Vec2(0, 0), 1.0, samples)}, {});
}

// Circle against a long ellipse: 4 crossings.
inline CurveSet circle_ellipse(int samples = 256) {
  return make_curve_set({sample_circle(Vec2(0, 0), 1.0, samples)},
                        {sample_ellipse(Vec2(0, 0), 1.6, 0.55, 0.0, samples)});
}

inline std::vector<Vec2> square(double half) {
  return {{-half, -half}, {half, -half}, {half, half}, {-half, half}};
}

inline std::vector<Vec2> diamond(double r) { return {{r, 0}, {0, r}, {-r, 0}, {0, -r}}; }

// Axis-aligned square against a rotated square: 8 crossings.
inline CurveSet squares() { return make_curve_set({square(1.0)}, {diamond(1.3)}); }

// Closed curve r(theta) = radius * (1 + sum of small harmonics).
inline std::vector<Vec2> perturbed_circle(std::mt19937_64& rng, const Vec2& center, double radius,
                                          int samples) {
  std::uniform_real_distribution<double> amp(-0.06, 0.06);
  std::uniform_real_distribution<double> phase(0, 2 * kPi);
  double a[3], ph[3];
  for (int k = 0; k < 3; ++k) {
    a[k] = amp(rng);
    ph[k] = phase(rng);
  }
  std::vector<Vec2> pts;
  for (int i = 0; i < samples; ++i) {
    const double th = 2 * kPi * i / samples;
    double r = 1.0;
    for (int k = 0; k < 3; ++k) r += a[k] * std::cos((k + 2) * th + ph[k]);
    pts.emplace_back(center.x() + radius * r * std::cos(th), center.y() + radius * r * std::sin(th));
  }
  return pts;
}

// One A and one B perturbed circle with overlapping disks.
inline CurveSet random_pair(std::uint64_t seed, int samples = 160) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> off(0.6, 1.4);
  std::uniform_real_distribution<double> ang(0, 2 * kPi);
  std::uniform_real_distribution<double> rad(0.8, 1.2);
  const double d = off(rng), th = ang(rng);
  auto a = perturbed_circle(rng, Vec2(0, 0), 1.0, samples);
  auto b = perturbed_circle(rng, Vec2(d * std::cos(th), d * std::sin(th)), rad(rng), samples + 7);
  return make_curve_set({std::move(a)}, {std::move(b)});
}

inline std::vector<std::uint64_t> random_seeds() {
  return {42, 7, 11, 19, 23, 101, 202, 303, 404, 505, 606, 707, 808, 909, 1001, 1234};
}

// Two convex curves per configuration, spanning 2 to 8 crossings.
inline std::vector<NamedConfig> convex_pairs() {
  return {
      {"lens", lens(128)},
      {"circle_ellipse", circle_ellipse(128)},
      {"squares", squares()},
      {"crossed_ellipses",
       make_curve_set({sample_ellipse(Vec2(0, 0), 1.5, 0.6, 0.0, 128)},
                      {sample_ellipse(Vec2(0, 0), 1.5, 0.6, kPi / 2, 128)})},
      {"triangle_hexagon",
       make_curve_set({sample_circle(Vec2(0, 0), 1.0, 3, kPi / 2)},
                      {sample_circle(Vec2(0, 0), 0.75, 6, 0.1)})},
      {"offset_ellipses",
       make_curve_set({sample_ellipse(Vec2(0, 0), 1.2, 0.7, 0.3, 128)},
                      {sample_ellipse(Vec2(0.5, 0.2), 1.0, 0.5, -0.4, 128)})},
  };
}

// Configurations for the enumeration oracle: hand-built plus seeded random pairs.
inline std::vector<NamedConfig> oracle_corpus() {
  std::vector<NamedConfig> out{
      {"lens", lens()},
      {"disjoint_circles", disjoint_circles()},
      {"single_circle", single_circle()},
      {"circle_ellipse", circle_ellipse()},
      {"squares", squares()},
  };
  for (const auto& c : convex_pairs())
    if (c.name != "lens" && c.name != "circle_ellipse" && c.name != "squares") out.push_back(c);
  out.push_back({"nested_a_with_b",
                 make_curve_set({sample_circle(Vec2(0, 0), 2.0, 128), sample_circle(Vec2(0, 0), 0.6, 64)},
                                {sample_circle(Vec2(0.9, 0), 0.9, 96)})});
  for (auto seed : random_seeds()) out.push_back({"random_" + std::to_string(seed), random_pair(seed)});
  return out;
}

}  // namespace vatlas::fixtures
