// varifold-atlas: arrange | enumerate | build | verify

#include "vatlas/kernels.hpp"
#include "vatlas/pipeline.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>

int main(int argc, char** argv) {
  CLI::App app{"Minimal surfaces spanning two families of planar Jordan curves"};
  app.set_version_flag("--version", vatlas::version());
  std::string command, config, out = ".", svg, replay;
  long varifold = -1;
  bool all = false, history = false, quiet = false;
  app.add_option("command", command, "arrange | enumerate | build | verify")
      ->required()
      ->check(CLI::IsMember({"arrange", "enumerate", "build", "verify"}));
  app.add_option("config", config, "configuration JSON")->required();
  app.add_option("--out", out, "output directory for reports, OBJ and CSV files");
  app.add_option("--svg", svg, "write an arrangement render (enumerate: one per varifold)");
  auto* opt_v = app.add_option("--varifold", varifold, "build only this varifold index")->check(CLI::NonNegativeNumber);
  auto* opt_all = app.add_flag("--all", all, "build every varifold (default)");
  opt_v->excludes(opt_all);
  app.add_option("--replay", replay, "verify: re-check a saved report against the config");
  app.add_flag("--history", history, "build/verify: per-iteration CSV (iteration, area, residual)");
  app.add_flag("-q,--quiet", quiet, "do not print the report");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  // VARIFOLD_ATLAS_THREADS is read by the kernels; nothing to do here.
  vatlas::CommandOptions opts;
  opts.out_dir = out;
  if (!svg.empty()) opts.svg = svg;
  if (varifold >= 0) opts.varifold = static_cast<std::size_t>(varifold);
  if (!replay.empty()) opts.replay = replay;
  opts.history_csv = history;

  const auto res = vatlas::run_command(command, config, opts);
  for (const auto& m : res.messages) std::cerr << "varifold-atlas: " << m << '\n';
  if (!quiet && !res.report.is_null()) std::cout << res.report.dump(2) << '\n';
  return res.exit_code;
}
