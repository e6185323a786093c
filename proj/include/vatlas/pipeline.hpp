#pragma once

#include "vatlas/config.hpp"
#include "vatlas/mesh_builder.hpp"
#include "vatlas/relax.hpp"
#include "vatlas/stability.hpp"

#include <json.hpp>

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace vatlas {

const char* version();

// Mesh parameters from the config. Without an explicit h the default
// diameter/60 is halved until the default rho fits between the crossings.
MeshParams choose_mesh_params(const RunConfig& cfg, const Arrangement& arr, std::vector<std::string>* warnings);

// Everything computed for one varifold: combinatorics always, geometry when built.
struct VarifoldRun {
  std::size_t index = 0;
  Varifold varifold;
  VarifoldStats stats;
  SheetComplex complex;
  bool built = false;
  BuiltSurface surface;               // relaxed in place
  std::vector<RelaxReport> relax;     // per component
  std::vector<StabilityReport> stability;
  std::vector<MeshCheck> mesh_checks;
  std::vector<HelicoidFit> helicoid_fits;       // per surface.helicoids entry
  std::vector<GraphCheck> graph_checks;         // per component
  std::vector<SeparationCheck> separations;     // per surface.double_layers entry
  bool boundary_fixed = true;                   // boundary vertices bit-identical through relaxation
  double area = 0.0;                            // relaxed total area
  std::string error;                            // set when building failed
  int error_kind = -1;
};

struct RunOptions {
  bool stability = true;
  bool parallel_varifolds = true;
};

VarifoldRun combinatorics(const Arrangement& arr, const Varifold& v, std::size_t index);
void build_varifold(const RunConfig& cfg, const MeshParams& p, VarifoldRun& run, const RunOptions& opts = {});

struct CommandOptions {
  std::filesystem::path out_dir = ".";
  std::optional<std::filesystem::path> svg;
  std::optional<std::size_t> varifold;  // build only this one; otherwise all
  std::optional<std::filesystem::path> replay;
  bool history_csv = false;
  bool write_files = true;
};

struct CommandResult {
  nlohmann::ordered_json report;
  int exit_code = 0;
  std::vector<std::string> messages;  // warnings and notices for stderr
};

CommandResult cmd_arrange(const RunConfig& cfg, const CommandOptions& opts);
CommandResult cmd_enumerate(const RunConfig& cfg, const CommandOptions& opts);
CommandResult cmd_build(const RunConfig& cfg, const CommandOptions& opts);
CommandResult cmd_verify(const RunConfig& cfg, const CommandOptions& opts);

// Loads the config and dispatches; maps errors to exit codes
// (0 success, 1 verification failure, 2 input or geometry error).
CommandResult run_command(const std::string& command, const std::filesystem::path& config, const CommandOptions& opts);

// Re-derives the combinatorial fields of a saved report's varifold entries.
nlohmann::ordered_json replay_checks(const RunConfig& cfg, const Arrangement& arr, const nlohmann::json& report);

bool is_convex(const std::vector<Vec2>& poly);
bool is_rotation_of(const std::array<int, 4>& pattern, const std::array<int, 4>& base);

}  // namespace vatlas
