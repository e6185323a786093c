#pragma once

#include "vatlas/arrangement.hpp"
#include "vatlas/mesh_builder.hpp"
#include "vatlas/relax.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>
#include <vector>

namespace vatlas {

// Run configuration. Every tolerance has a default; the resolved values are
// echoed into reports.
//
//   {
//     "name": "lens",
//     "curves_a": [...], "curves_b": [...],          // see parse_curve_entry
//     "t": 0.04,  or  "t_relative": 0.02,            // absolute or times diameter
//     "mesh": {"h": ..., "h_relative": ..., "rho": ..., "corner_deg": 20,
//              "tol_H": ..., "max_iters": 20000},
//     "tolerances": {"theta_min": 1e-3, "eps_geo_rel": 1e-9, "max_crossings": 10000,
//                    "oracle_face_limit": 16, "eigen_tol": 1e-8,
//                    "graph_x": 0.9, "helicoid_fit_max": 0.1}
//   }
struct RunConfig {
  std::string name;
  CurveSet curves;
  double diameter = 0.0;

  double t = 0.0;
  MeshParams mesh;          // h may be 0 (auto), rho may be 0 (default)
  bool h_explicit = false;
  RelaxOptions relax;
  ArrangementOptions arrangement;
  std::size_t oracle_face_limit = 16;
  double eigen_tol = 1e-8;
  double graph_x = 0.9;
  double helicoid_fit_max = 0.1;

  std::string hash;         // SHA-256 of the compact dump of the input document
  std::vector<std::string> warnings;

  nlohmann::ordered_json echo() const;
};

RunConfig load_config(const nlohmann::json& doc, const std::string& fallback_name = "config");
RunConfig load_config_file(const std::filesystem::path& path);

std::string sha256_hex(const std::string& bytes);

}  // namespace vatlas
