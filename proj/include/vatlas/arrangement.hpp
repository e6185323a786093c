#pragma once

#include "vatlas/curves.hpp"

#include <array>
#include <vector>

namespace vatlas {

// Position along a closed polyline: segment index plus fraction in [0, 1).
struct CurveParam {
  int segment = 0;
  double s = 0.0;

  double value() const { return segment + s; }
  friend bool operator<(const CurveParam& a, const CurveParam& b) {
    return a.segment != b.segment ? a.segment < b.segment : a.s < b.s;
  }
};

struct CrossingPoint {
  int id = 0;
  Vec2 position;
  int curve_a = 0;
  int curve_b = 0;
  double angle = 0.0;  // radians in (0, pi)
  CurveParam on_a;
  CurveParam on_b;
};

struct ArrangementOptions {
  double theta_min = 1e-3;     // transversality band [theta_min, pi - theta_min]
  double eps_geo_rel = 1e-9;   // relative to the bounding-box diagonal
  int max_crossings = 10000;
};

enum class Sign { Plus, Minus };
enum class RegionClass { InsideBoth, OutsideBoth, AOnly, BOnly };

const char* to_string(Sign s);
const char* to_string(RegionClass r);

struct ArrangementVertex {
  Vec2 position;
  int crossing = -1;            // crossing id, or -1 for a synthetic vertex
  int curve = -1;               // carrying curve of a synthetic vertex
  std::vector<int> outgoing;    // outgoing half-edges, counterclockwise
};

struct ArrangementEdge {
  int id = 0;
  int curve = 0;
  Family family = Family::A;
  int v_from = 0;
  int v_to = 0;
  std::vector<Vec2> polyline;   // along the curve orientation, endpoints included
  double length = 0.0;
};

// Half-edge 2e runs along edge e in curve direction, 2e+1 against it. The
// face of a half-edge lies on its left.
struct HalfEdge {
  int edge = 0;
  int origin = 0;
  int next = -1;
  int prev = -1;
  int face = -1;
};

inline int twin(int he) { return he ^ 1; }

struct ArrangementFace {
  int id = 0;
  std::vector<std::vector<int>> boundary_loops;  // half-edge cycles
  Sign sign = Sign::Minus;
  bool is_unbounded = false;
  double area = 0.0;                             // undefined (0) for the unbounded face
  std::vector<int> containment;                  // curve ids whose interior holds the face
  RegionClass region_class = RegionClass::OutsideBoth;
  Vec2 representative{0, 0};
};

struct Arrangement {
  CurveSet curves;
  std::vector<CrossingPoint> crossings;   // vertex i < crossings.size() is crossing i
  std::vector<ArrangementVertex> vertices;
  std::vector<ArrangementEdge> edges;
  std::vector<HalfEdge> half_edges;
  std::vector<ArrangementFace> faces;     // face 0 is the unbounded face
  std::vector<int> synthetic_vertices;
  int components = 0;                     // connected components of the curve graph
  double eps_geo = 0.0;
  bool signed_ = false;

  int unbounded_face() const { return 0; }
  std::size_t bounded_face_count() const { return faces.size() - 1; }
  int dest(int he) const { return half_edges[twin(he)].origin; }

  // Points of a half-edge in its direction of travel.
  std::vector<Vec2> half_edge_polyline(int he) const;
  // Closed polygon traced by one boundary loop.
  std::vector<Vec2> loop_polygon(const std::vector<int>& loop) const;

  // Four outgoing half-edges at a crossing in counterclockwise order.
  std::array<int, 4> crossing_half_edges(int crossing) const;
  // Faces meeting at a crossing, counterclockwise; face k lies between
  // outgoing half-edges k and k+1.
  std::array<int, 4> crossing_faces(int crossing) const;

  int left_face(int edge) const { return half_edges[2 * edge].face; }
  int right_face(int edge) const { return half_edges[2 * edge + 1].face; }
};

std::vector<CrossingPoint> compute_crossings(const CurveSet& curves,
                                             const ArrangementOptions& opts = {});

Arrangement build_arrangement(const CurveSet& curves, std::vector<CrossingPoint> crossings,
                              const ArrangementOptions& opts = {});

Arrangement assign_signs(Arrangement arr);

// compute_crossings + build_arrangement + assign_signs.
Arrangement make_arrangement(const CurveSet& curves, const ArrangementOptions& opts = {});

}  // namespace vatlas
