#pragma once

#include "vatlas/varifold.hpp"

#include <map>
#include <vector>

namespace vatlas {

enum class Layer { Only, Top, Bottom };

const char* to_string(Layer l);

struct Sheet {
  int id = 0;
  int face = 0;
  Layer layer = Layer::Only;
  int component = -1;
};

enum class SeamKind { SmoothContinuation, HelicoidalBand, Boundary };

const char* to_string(SeamKind k);

// BOUNDARY: sheet_a ends along half_edge (in sheet_a's face) on its curve.
// SMOOTH_CONTINUATION: sheet_a across half_edge meets sheet_b across twin(half_edge).
// HELICOIDAL_BAND: joins the multiplicity-1 sheets sheet_a, sheet_b at crossing.
struct Seam {
  SeamKind kind = SeamKind::Boundary;
  int edge = -1;
  int half_edge = -1;
  int crossing = -1;
  int sheet_a = -1;
  int sheet_b = -1;
};

struct CellCounts {
  long vertices = 0;
  long edges = 0;
  long faces = 0;
  long chi() const { return vertices - edges + faces; }
};

struct ComponentTopology {
  long chi = 0;
  int boundary_loops = 0;
  int genus = 0;
  std::vector<int> sheets;
};

struct SheetComplex {
  const Arrangement* arr = nullptr;
  Varifold varifold;
  std::vector<CrossingType> crossing_types;
  std::vector<Sheet> sheets;
  std::vector<Seam> seams;
  CellCounts cells;
  std::vector<ComponentTopology> topology;  // one record per connected component

  // Sheet over `face` at `layer`, or -1.
  int sheet_of(int face, Layer layer) const;
  // Seam index covering sheet `s` along half-edge `he` of its face.
  int seam_at(int s, int he) const;
  int component_count() const { return static_cast<int>(topology.size()); }

  std::map<std::pair<int, int>, int> slot_seam;  // (sheet, half-edge) -> seam
  std::vector<int> band_of_crossing;             // seam index or -1
};

// Builds sheets and seams, then counts cells of the lifted complex directly.
SheetComplex build_complex(const Arrangement& arr, const Varifold& v);

long cw_euler_characteristic(const SheetComplex& c);

// Per-component {chi, boundary_loops, genus}.
const std::vector<ComponentTopology>& genus_and_boundaries(const SheetComplex& c);

}  // namespace vatlas
