#pragma once

#include "vatlas/trimesh.hpp"

#include <span>

namespace vatlas {

struct EmbeddingCheck {
  bool embedded = true;
  long pairs_tested = 0;
  long intersecting_pairs = 0;
  Vec3 first_hit{0, 0, 0};
};

// Triangle-triangle intersection spot check over a uniform spatial hash.
// Triangles sharing a vertex (same mesh) are skipped; touching within `eps`
// counts as disjoint.
EmbeddingCheck check_embedded(std::span<const TriMesh> meshes, double cell, double eps);

}  // namespace vatlas
