#pragma once

#include "vatlas/arrangement.hpp"

#include <cstdint>
#include <vector>

namespace vatlas {

// Multiplicity per face id (face 0 is the unbounded face).
struct Varifold {
  std::vector<int> m;

  friend bool operator==(const Varifold&, const Varifold&) = default;
  friend auto operator<=>(const Varifold& a, const Varifold& b) { return a.m <=> b.m; }
};

enum class CrossingType { Helicoidal, DoubleGraph };

const char* to_string(CrossingType t);

struct VarifoldStats {
  int v1 = 0, v2 = 0;  // helicoidal / double-graph crossings
  int e1 = 0, e2 = 0;  // edges of multiplicity 1 / 2
  int f1 = 0, f2 = 0;  // faces of multiplicity 1 / 2
  long chi = 0;
  double area = 0.0;
  int fi_minus = 0;    // bounded MINUS faces inside both regions
  int fo_minus = 0;    // bounded MINUS faces outside both regions
};

// Checks the raw admissibility conditions on a full assignment.
bool is_admissible(const Arrangement& arr, const std::vector<int>& m);

// Backtracking over bounded MINUS faces, canonical (lexicographic) order.
std::vector<Varifold> enumerate_varifolds(const Arrangement& arr);

// Exhaustive reference over {0,1,2}^(bounded faces). Throws when the arrangement
// has more than `face_limit` bounded faces.
std::vector<Varifold> brute_force_enumerate(const Arrangement& arr, std::size_t face_limit = 16);

// Multiplicities around a crossing, in crossing_faces order.
std::array<int, 4> crossing_pattern(const Arrangement& arr, const Varifold& v, int crossing);
CrossingType classify_crossing(const Arrangement& arr, const Varifold& v, int crossing);

int edge_multiplicity(const Arrangement& arr, const Varifold& v, int edge);

VarifoldStats compute_stats(const Arrangement& arr, const Varifold& v);

// Index of the unique varifold without multiplicity-2 faces. Verifies that it
// has strictly least area and a genus sum at least that of every other one.
std::size_t least_area_varifold(const Arrangement& arr, const std::vector<Varifold>& vs);

// 2^fi_minus + 2^fo_minus.
std::uint64_t upper_bound(const Arrangement& arr);

}  // namespace vatlas
