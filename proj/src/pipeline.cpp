#include "vatlas/pipeline.hpp"

#include "vatlas/embedding.hpp"
#include "vatlas/error.hpp"
#include "vatlas/kernels.hpp"
#include "vatlas/svg.hpp"

#include <chrono>
#include <cstring>
#include <fstream>
#include <sstream>

#ifndef VATLAS_VERSION
#define VATLAS_VERSION "0.0.0"
#endif

namespace vatlas {

using nlohmann::json;
using ojson = nlohmann::ordered_json;
namespace fs = std::filesystem;

const char* version() { return VATLAS_VERSION; }

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw input_error("cannot write " + path.string());
  out << text;
}

ojson header(const RunConfig& cfg, const char* command) {
  ojson r;
  r["tool"] = "varifold-atlas";
  r["version"] = version();
  r["command"] = command;
  r["config"] = cfg.echo();
  return r;
}

ojson arrangement_summary(const Arrangement& arr) {
  int fi = 0, fo = 0;
  for (const auto& f : arr.faces) {
    if (f.is_unbounded || f.sign != Sign::Minus) continue;
    fi += f.region_class == RegionClass::InsideBoth;
    fo += f.region_class == RegionClass::OutsideBoth;
  }
  ojson s;
  s["crossings"] = arr.crossings.size();
  s["vertices"] = arr.vertices.size();
  s["edges"] = arr.edges.size();
  s["faces"] = arr.faces.size();
  s["bounded_faces"] = arr.bounded_face_count();
  s["synthetic_vertices"] = arr.synthetic_vertices.size();
  s["fi_minus"] = fi;
  s["fo_minus"] = fo;
  s["upper_bound"] = upper_bound(arr);
  ojson xs = ojson::array();
  for (const auto& x : arr.crossings)
    xs.push_back({{"id", x.id}, {"position", {x.position.x(), x.position.y()}}, {"curve_a", x.curve_a},
                  {"curve_b", x.curve_b}, {"angle", x.angle}});
  s["crossing_list"] = xs;
  ojson fs_ = ojson::array();
  for (const auto& f : arr.faces)
    fs_.push_back({{"id", f.id}, {"sign", to_string(f.sign)}, {"region", to_string(f.region_class)},
                   {"unbounded", f.is_unbounded}, {"area", f.area}});
  s["face_list"] = fs_;
  return s;
}

ojson stats_json(const VarifoldStats& s) {
  return {{"v1", s.v1}, {"v2", s.v2}, {"e1", s.e1}, {"e2", s.e2}, {"f1", s.f1}, {"f2", s.f2},
          {"chi", s.chi}, {"area", s.area}, {"fi_minus", s.fi_minus}, {"fo_minus", s.fo_minus}};
}

ojson combinatorial_entry(const VarifoldRun& r, bool least_area) {
  ojson e;
  e["index"] = r.index;
  e["multiplicities"] = r.varifold.m;
  e["least_area"] = least_area;
  e["stats"] = stats_json(r.stats);
  ojson types = ojson::array();
  for (auto t : r.complex.crossing_types) types.push_back(to_string(t));
  e["crossing_types"] = types;
  e["cw_chi"] = cw_euler_characteristic(r.complex);
  ojson comps = ojson::array();
  for (const auto& c : r.complex.topology)
    comps.push_back({{"chi", c.chi}, {"boundary_loops", c.boundary_loops}, {"genus", c.genus}});
  e["component_count"] = r.complex.component_count();
  e["components"] = comps;
  return e;
}

ojson relax_json(const RelaxReport& r) {
  return {{"iterations", r.iterations},       {"initial_residual", r.initial_residual},
          {"residual", r.residual},           {"initial_area", r.initial_area},
          {"final_area", r.final_area},       {"converged", r.converged},
          {"stop_reason", r.stop_reason},     {"min_angle_deg", r.min_angle_deg}};
}

ojson stability_json(const StabilityReport& s) {
  return {{"verdict", to_string(s.verdict)},
          {"lambda1", s.lambda1},
          {"gauss_image_area", s.gauss_image_area},
          {"sufficient", s.sufficient},
          {"margin", s.margin},
          {"iterations", s.iterations},
          {"residual", s.residual},
          {"pencil_norm", s.pencil_norm},
          {"inertia_confirms", s.inertia_confirms},
          {"conflict", s.conflict},
          {"interior_vertices", s.interior_vertices}};
}

ojson geometry_entry(const VarifoldRun& r, const RunConfig& cfg) {
  ojson e;
  if (!r.error.empty()) {
    e["status"] = "failed";
    e["error"] = r.error;
    return e;
  }
  e["status"] = "built";
  e["surface_area"] = r.area;
  e["boundary_fixed"] = r.boundary_fixed;
  ojson comps = ojson::array();
  for (std::size_t c = 0; c < r.surface.components.size(); ++c) {
    const auto& m = r.surface.components[c];
    ojson cj;
    cj["vertices"] = m.vertices.size();
    cj["triangles"] = m.triangles.size();
    cj["mesh_chi"] = r.mesh_checks[c].chi;
    cj["boundary_loops"] = r.mesh_checks[c].boundary_loops;
    cj["min_angle_deg"] = r.mesh_checks[c].min_angle_deg;
    cj["obj"] = cfg.name + "_" + std::to_string(r.index) + "_" + std::to_string(c) + ".obj";
    cj["relax"] = relax_json(r.relax[c]);
    if (c < r.stability.size()) cj["stability"] = stability_json(r.stability[c]);
    cj["graph_check"] = {{"pass", r.graph_checks[c].pass}, {"worst_abs_nz", r.graph_checks[c].worst},
                         {"checked_triangles", r.graph_checks[c].checked}};
    comps.push_back(cj);
  }
  e["components"] = comps;
  ojson hs = ojson::array();
  for (std::size_t k = 0; k < r.surface.helicoids.size(); ++k) {
    const auto& h = r.surface.helicoids[k];
    hs.push_back({{"crossing", h.crossing}, {"component", h.component}, {"rho", h.rho},
                  {"fit_residual", r.helicoid_fits[k].residual}, {"pitch", r.helicoid_fits[k].pitch},
                  {"samples", r.helicoid_fits[k].samples}});
  }
  e["helicoids"] = hs;
  ojson ds = ojson::array();
  for (std::size_t k = 0; k < r.surface.double_layers.size(); ++k)
    ds.push_back({{"face", r.surface.double_layers[k].face}, {"min_gap", r.separations[k].min_gap},
                  {"pass", r.separations[k].pass}});
  e["double_layers"] = ds;
  return e;
}

struct Checks {
  ojson list = ojson::array();
  bool pass = true;
  void add(const std::string& name, bool ok, const std::string& detail) {
    list.push_back({{"name", name}, {"pass", ok}, {"detail", detail}});
    pass = pass && ok;
  }
};

std::string fmt(double x) {
  std::ostringstream s;
  s.precision(6);
  s << x;
  return s.str();
}

// Runs the selected varifolds (OpenMP over varifolds); errors stay per varifold.
void build_all(const RunConfig& cfg, const MeshParams& p, std::vector<VarifoldRun>& runs,
               const std::vector<std::size_t>& which, const RunOptions& opts) {
  const long n = static_cast<long>(which.size());
#pragma omp parallel for schedule(dynamic) num_threads(opts.parallel_varifolds ? kernel_threads() : 1)
  for (long i = 0; i < n; ++i) {
    auto& run = runs[which[i]];
    try {
      build_varifold(cfg, p, run, opts);
    } catch (const AtlasError& e) {
      run.error = e.what();
      run.error_kind = static_cast<int>(e.kind());
    } catch (const std::exception& e) {
      run.error = e.what();
      run.error_kind = static_cast<int>(ErrorKind::Numerical);
    }
  }
}

void write_outputs(const RunConfig& cfg, const CommandOptions& opts, const std::vector<VarifoldRun>& runs,
                   const std::vector<std::size_t>& which) {
  if (!opts.write_files) return;
  fs::create_directories(opts.out_dir);
  for (std::size_t k : which) {
    const auto& r = runs[k];
    if (!r.built || !r.error.empty()) continue;
    for (std::size_t c = 0; c < r.surface.components.size(); ++c) {
      const std::string stem = cfg.name + "_" + std::to_string(k) + "_" + std::to_string(c);
      write_obj(r.surface.components[c], opts.out_dir / (stem + ".obj"));
      if (opts.history_csv) {
        std::ostringstream csv;
        csv.precision(17);
        csv << "iteration,area,residual\n";
        const auto& rr = r.relax[c];
        for (std::size_t i = 0; i < rr.area_history.size(); ++i)
          csv << i << ',' << rr.area_history[i] << ',' << rr.residual_history[i] << '\n';
        write_text(opts.out_dir / (stem + "_history.csv"), csv.str());
      }
    }
  }
}

void finish(CommandResult& res, const RunConfig& cfg, const CommandOptions& opts, const char* command) {
  if (opts.write_files) write_text(opts.out_dir / (cfg.name + "_" + command + ".json"), res.report.dump(2) + "\n");
}

struct Prepared {
  Arrangement arr;
  std::vector<VarifoldRun> runs;
  std::size_t least = 0;
  std::string least_error;
  double t_arrange = 0, t_enumerate = 0;
};

// Fills `p` in place: the sheet complexes keep a pointer to p.arr.
void prepare(const RunConfig& cfg, Prepared& p) {
  auto t0 = Clock::now();
  p.arr = make_arrangement(cfg.curves, cfg.arrangement);
  p.t_arrange = seconds_since(t0);
  t0 = Clock::now();
  const auto vs = enumerate_varifolds(p.arr);
  for (std::size_t i = 0; i < vs.size(); ++i) p.runs.push_back(combinatorics(p.arr, vs[i], i));
  try {
    p.least = least_area_varifold(p.arr, vs);
  } catch (const AtlasError& e) {
    p.least = vs.size();
    p.least_error = e.what();
  }
  p.t_enumerate = seconds_since(t0);
}

ojson varifold_list(const Prepared& p, const RunConfig* cfg, const std::vector<std::size_t>* built) {
  ojson list = ojson::array();
  for (const auto& r : p.runs) {
    ojson e = combinatorial_entry(r, r.index == p.least);
    if (cfg && built && std::find(built->begin(), built->end(), r.index) != built->end())
      e["geometry"] = geometry_entry(r, *cfg);
    list.push_back(e);
  }
  return list;
}

}  // namespace

bool is_convex(const std::vector<Vec2>& poly) {
  const std::size_t n = poly.size();
  int dir = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const int o = orient2d(poly[i], poly[(i + 1) % n], poly[(i + 2) % n]);
    if (o == 0) continue;
    if (dir == 0) dir = o;
    else if (o != dir) return false;
  }
  return true;
}

bool is_rotation_of(const std::array<int, 4>& pattern, const std::array<int, 4>& base) {
  for (int r = 0; r < 4; ++r) {
    bool same = true;
    for (int k = 0; k < 4; ++k) same = same && pattern[(k + r) % 4] == base[k];
    if (same) return true;
  }
  return false;
}

MeshParams choose_mesh_params(const RunConfig& cfg, const Arrangement& arr, std::vector<std::string>* warnings) {
  MeshParams p = cfg.mesh;
  p.t = cfg.t;
  if (cfg.h_explicit) return resolve_mesh_params(arr, p, warnings);
  p.h = cfg.diameter / 60.0;
  for (int halvings = 0;; ++halvings, p.h *= 0.5) {
    try {
      std::vector<std::string> w;
      auto q = resolve_mesh_params(arr, p, &w);
      if (warnings) {
        if (halvings > 0)
          warnings->push_back("default h refined to " + fmt(q.h) + " so that rho >= 3h fits between crossings");
        warnings->insert(warnings->end(), w.begin(), w.end());
      }
      return q;
    } catch (const AtlasError& e) {
      if (e.kind() != ErrorKind::Geometry || halvings >= 6) throw;
    }
  }
}

VarifoldRun combinatorics(const Arrangement& arr, const Varifold& v, std::size_t index) {
  VarifoldRun r;
  r.index = index;
  r.varifold = v;
  r.stats = compute_stats(arr, v);
  r.complex = build_complex(arr, v);
  return r;
}

void build_varifold(const RunConfig& cfg, const MeshParams& p, VarifoldRun& run, const RunOptions& opts) {
  run.built = true;
  run.surface = build_surface(run.complex, p);
  const auto& arr = *run.complex.arr;
  RelaxOptions ro = cfg.relax;
  ro.max_step = 0.25 * p.h;
  ro.parallel = true;
  run.area = 0;
  for (auto& m : run.surface.components) {
    std::vector<Vec3> fixed;
    for (std::size_t v = 0; v < m.vertices.size(); ++v)
      if (m.boundary[v]) fixed.push_back(m.vertices[v]);
    run.relax.push_back(relax(m, ro));
    std::size_t i = 0;
    for (std::size_t v = 0; v < m.vertices.size(); ++v)
      if (m.boundary[v]) run.boundary_fixed &= std::memcmp(fixed[i++].data(), m.vertices[v].data(), sizeof(Vec3)) == 0;
    run.area += run.relax.back().final_area;
    run.mesh_checks.push_back(check_mesh(m));
    if (opts.stability) run.stability.push_back(stability_verdict(m, cfg.eigen_tol, true));
  }
  std::vector<Vec2> centers;
  for (const auto& x : arr.crossings) centers.push_back(x.position);
  for (const auto& m : run.surface.components) run.graph_checks.push_back(graph_check(m, centers, p.rho, cfg.graph_x));
  for (const auto& h : run.surface.helicoids)
    run.helicoid_fits.push_back(helicoid_fit(run.surface.components[h.component], h.center, h.rho, p.t));
  for (const auto& d : run.surface.double_layers)
    run.separations.push_back(layer_separation(run.surface.components[d.top_component], d.top_sheet,
                                               run.surface.components[d.bottom_component], d.bottom_sheet));
}

CommandResult cmd_arrange(const RunConfig& cfg, const CommandOptions& opts) {
  CommandResult res;
  res.messages = cfg.warnings;
  const auto arr = make_arrangement(cfg.curves, cfg.arrangement);
  res.report = header(cfg, "arrange");
  res.report["arrangement"] = arrangement_summary(arr);
  if (opts.svg) write_text(*opts.svg, render_svg(arr));
  finish(res, cfg, opts, "arrange");
  return res;
}

CommandResult cmd_enumerate(const RunConfig& cfg, const CommandOptions& opts) {
  CommandResult res;
  res.messages = cfg.warnings;
  const auto t0 = Clock::now();
  Prepared p;
  prepare(cfg, p);
  res.report = header(cfg, "enumerate");
  res.report["arrangement"] = arrangement_summary(p.arr);
  res.report["upper_bound"] = upper_bound(p.arr);
  res.report["count"] = p.runs.size();
  res.report["least_area_index"] = p.least < p.runs.size() ? ojson(p.least) : ojson(nullptr);
  if (!p.least_error.empty()) res.messages.push_back(p.least_error);
  res.report["varifolds"] = varifold_list(p, nullptr, nullptr);
  res.report["timing"] = {{"arrangement_s", p.t_arrange}, {"enumeration_s", p.t_enumerate},
                          {"total_s", seconds_since(t0)}};
  if (opts.svg) {
    const fs::path base = *opts.svg;
    for (const auto& r : p.runs) {
      fs::path path = base;
      path.replace_filename(base.stem().string() + "_" + std::to_string(r.index) + base.extension().string());
      write_text(path, render_svg(p.arr, &r.varifold));
    }
  }
  finish(res, cfg, opts, "enumerate");
  return res;
}

CommandResult cmd_build(const RunConfig& cfg, const CommandOptions& opts) {
  CommandResult res;
  res.messages = cfg.warnings;
  const auto t0 = Clock::now();
  Prepared p;
  prepare(cfg, p);
  std::vector<std::size_t> which;
  if (opts.varifold) {
    if (*opts.varifold >= p.runs.size())
      throw input_error("varifold index " + std::to_string(*opts.varifold) + " out of range (count " +
                        std::to_string(p.runs.size()) + ")");
    which.push_back(*opts.varifold);
  } else {
    for (std::size_t i = 0; i < p.runs.size(); ++i) which.push_back(i);
  }
  const MeshParams mp = choose_mesh_params(cfg, p.arr, &res.messages);
  const auto tb = Clock::now();
  build_all(cfg, mp, p.runs, which, {});
  const double t_build = seconds_since(tb);
  write_outputs(cfg, opts, p.runs, which);

  res.report = header(cfg, "build");
  res.report["mesh"] = {{"t", mp.t}, {"h", mp.h}, {"rho", mp.rho}, {"corner_deg", mp.corner_deg}};
  res.report["arrangement"] = arrangement_summary(p.arr);
  res.report["upper_bound"] = upper_bound(p.arr);
  res.report["count"] = p.runs.size();
  res.report["least_area_index"] = p.least < p.runs.size() ? ojson(p.least) : ojson(nullptr);
  res.report["varifolds"] = varifold_list(p, &cfg, &which);
  for (std::size_t k : which) {
    const auto& r = p.runs[k];
    if (!r.error.empty()) {
      res.messages.push_back("varifold " + std::to_string(k) + ": " + r.error);
      res.exit_code = std::max(res.exit_code, r.error_kind == static_cast<int>(ErrorKind::Input) ||
                                                      r.error_kind == static_cast<int>(ErrorKind::Geometry)
                                                  ? 2
                                                  : 1);
      continue;
    }
    for (std::size_t c = 0; c < r.relax.size(); ++c) {
      if (!r.relax[c].converged) {
        res.messages.push_back("varifold " + std::to_string(k) + " component " + std::to_string(c) +
                               ": relaxation stopped (" + r.relax[c].stop_reason + ")");
        res.exit_code = std::max(res.exit_code, 1);
      }
      if (r.stability[c].conflict) {
        res.messages.push_back("varifold " + std::to_string(k) + " component " + std::to_string(c) +
                               ": stability tests disagree");
        res.exit_code = std::max(res.exit_code, 1);
      }
    }
  }
  res.report["timing"] = {{"arrangement_s", p.t_arrange}, {"enumeration_s", p.t_enumerate},
                          {"build_s", t_build}, {"total_s", seconds_since(t0)}};
  finish(res, cfg, opts, "build");
  return res;
}

ojson replay_checks(const RunConfig& cfg, const Arrangement& arr, const json& report) {
  Checks checks;
  const std::string hash = report.value("/config/hash"_json_pointer, std::string());
  checks.add("replay config hash", hash == cfg.hash, hash == cfg.hash ? "matches" : "report was made from another config");
  if (!report.contains("varifolds") || !report["varifolds"].is_array())
    throw input_error("replay report has no varifold list");
  for (const auto& e : report["varifolds"]) {
    const std::string tag = "replay varifold " + std::to_string(e.value("index", -1));
    std::vector<int> m;
    try {
      m = e.at("multiplicities").get<std::vector<int>>();
    } catch (const json::exception&) {
      throw input_error(tag + ": missing multiplicities");
    }
    if (m.size() != arr.faces.size() || !is_admissible(arr, m)) {
      checks.add(tag + " admissible", false, "multiplicity vector is not an admissible varifold");
      continue;
    }
    const Varifold v{m};
    const auto stats = compute_stats(arr, v);
    const auto cx = build_complex(arr, v);
    const long chi = e.value("/stats/chi"_json_pointer, std::numeric_limits<long>::min());
    const long cw = cw_euler_characteristic(cx);
    checks.add(tag + " chi", chi == stats.chi && chi == cw,
               chi == stats.chi && chi == cw ? "chi " + std::to_string(chi)
                                             : "chi mismatch: report " + std::to_string(chi) + ", recomputed " +
                                                   std::to_string(stats.chi) + " (cell complex " +
                                                   std::to_string(cw) + ")");
    bool topo = e.contains("components") && e["components"].size() == cx.topology.size();
    for (std::size_t c = 0; topo && c < cx.topology.size(); ++c)
      topo = e["components"][c].value("chi", 0L) == cx.topology[c].chi &&
             e["components"][c].value("genus", -1) == cx.topology[c].genus &&
             e["components"][c].value("boundary_loops", -1) == cx.topology[c].boundary_loops;
    checks.add(tag + " topology", topo, topo ? "components match" : "component table mismatch");
  }
  ojson out;
  out["pass"] = checks.pass;
  out["checks"] = checks.list;
  return out;
}

CommandResult cmd_verify(const RunConfig& cfg, const CommandOptions& opts) {
  CommandResult res;
  res.messages = cfg.warnings;
  const auto t0 = Clock::now();
  Prepared p;
  prepare(cfg, p);
  Checks checks;
  ojson notices = ojson::array();

  if (opts.replay) {
    std::ifstream in(*opts.replay);
    if (!in) throw input_error("cannot read replay report " + opts.replay->string());
    json rep;
    try {
      rep = json::parse(in);
    } catch (const json::exception& e) {
      throw input_error("malformed replay report: " + std::string(e.what()));
    }
    const auto rc = replay_checks(cfg, p.arr, rep);
    for (const auto& c : rc["checks"]) {
      checks.add(c["name"], c["pass"], c["detail"]);
      if (!c["pass"].get<bool>()) res.messages.push_back(c["name"].get<std::string>() + ": " + c["detail"].get<std::string>());
    }
  }

  // enumeration oracle
  if (p.arr.bounded_face_count() <= cfg.oracle_face_limit) {
    const auto t = Clock::now();
    auto brute = brute_force_enumerate(p.arr, cfg.oracle_face_limit);
    std::vector<Varifold> mine;
    for (const auto& r : p.runs) mine.push_back(r.varifold);
    std::sort(brute.begin(), brute.end());
    std::sort(mine.begin(), mine.end());
    checks.add("enumeration oracle", brute == mine,
               std::to_string(mine.size()) + " vs " + std::to_string(brute.size()) + " by brute force (" +
                   fmt(seconds_since(t)) + " s)");
  } else {
    const std::string n = "enumeration oracle skipped: " + std::to_string(p.arr.bounded_face_count()) +
                          " bounded faces exceed the limit of " + std::to_string(cfg.oracle_face_limit);
    notices.push_back(n);
    res.messages.push_back(n);
  }

  bool patterns = true;
  for (const auto& r : p.runs)
    for (int x = 0; x < static_cast<int>(p.arr.crossings.size()); ++x) {
      const auto pat = crossing_pattern(p.arr, r.varifold, x);
      patterns = patterns && (is_rotation_of(pat, {0, 1, 0, 1}) || is_rotation_of(pat, {0, 1, 2, 1}));
    }
  checks.add("crossing patterns", patterns, "every crossing is (0,1,0,1) or (0,1,2,1) up to rotation");

  bool chi_ok = true;
  std::string chi_detail = "stats chi = cell complex chi for all varifolds";
  for (const auto& r : p.runs) {
    long sum = 0;
    for (const auto& c : r.complex.topology) sum += c.chi;
    if (r.stats.chi != cw_euler_characteristic(r.complex) || sum != r.stats.chi) {
      chi_ok = false;
      chi_detail = "chi mismatch at varifold " + std::to_string(r.index);
    }
  }
  checks.add("euler characteristic", chi_ok, chi_detail);

  const auto bound = upper_bound(p.arr);
  checks.add("counting bound", p.runs.size() <= bound,
             std::to_string(p.runs.size()) + " <= " + std::to_string(bound));
  checks.add("unique least-area varifold", p.least_error.empty(),
             p.least_error.empty() ? "index " + std::to_string(p.least) : p.least_error);

  bool all_convex = true;
  for (const auto& c : cfg.curves.curves) all_convex = all_convex && is_convex(c.points);
  if (all_convex) {
    bool g0 = true;
    for (const auto& r : p.runs)
      for (const auto& c : r.complex.topology) g0 = g0 && c.genus == 0;
    checks.add("convex curves give genus 0", g0, "all components of all varifolds");
  }

  // geometry
  const MeshParams mp = choose_mesh_params(cfg, p.arr, &res.messages);
  std::vector<std::size_t> which;
  for (std::size_t i = 0; i < p.runs.size(); ++i) which.push_back(i);
  const auto tb = Clock::now();
  build_all(cfg, mp, p.runs, which, {});
  const double t_build = seconds_since(tb);
  write_outputs(cfg, opts, p.runs, which);

  bool all_built = true;
  for (const auto& r : p.runs) {
    const std::string tag = "varifold " + std::to_string(r.index);
    if (!r.error.empty()) {
      checks.add(tag + " build", false, r.error);
      all_built = false;
      continue;
    }
    bool mesh_ok = r.surface.components.size() == r.complex.topology.size();
    long mesh_chi = 0;
    for (std::size_t c = 0; c < r.mesh_checks.size(); ++c) {
      mesh_ok = mesh_ok && r.mesh_checks[c].ok() && r.mesh_checks[c].chi == r.complex.topology[c].chi &&
                r.mesh_checks[c].boundary_loops == r.complex.topology[c].boundary_loops;
      mesh_chi += r.mesh_checks[c].chi;
    }
    checks.add(tag + " mesh topology", mesh_ok && mesh_chi == r.stats.chi,
               "mesh chi " + std::to_string(mesh_chi) + ", stats chi " + std::to_string(r.stats.chi));

    bool conv = true, mono = true;
    double worst = 0;
    for (const auto& rr : r.relax) {
      conv = conv && rr.converged;
      worst = std::max(worst, rr.residual);
      for (std::size_t i = 1; i < rr.area_history.size(); ++i) mono = mono && rr.area_history[i] <= rr.area_history[i - 1];
    }
    checks.add(tag + " relaxation", conv && mono && r.boundary_fixed,
               "max residual " + fmt(worst) + " (tol " + fmt(cfg.relax.tol_H) + ")" + (mono ? "" : ", area increased") +
                   (r.boundary_fixed ? "" : ", boundary moved"));

    bool stable = true, agree = true, confirms = true;
    double gauss = 0, lam = std::numeric_limits<double>::infinity();
    for (const auto& s : r.stability) {
      stable = stable && s.verdict == Verdict::Stable;
      agree = agree && !s.conflict;
      confirms = confirms && s.inertia_confirms;
      gauss = std::max(gauss, s.gauss_image_area);
      if (s.interior_vertices > 0) lam = std::min(lam, s.lambda1);
    }
    checks.add(tag + " stability", stable && agree && confirms,
               "min lambda1 " + fmt(lam) + ", max gauss image " + fmt(gauss) + (agree ? "" : ", tests disagree"));
    if (r.stats.v1 <= 2)
      checks.add(tag + " gauss image below 2 pi", gauss < 2 * kPi, fmt(gauss));

    bool graph = true;
    double nz = 1;
    for (const auto& g : r.graph_checks) graph = graph && g.pass, nz = std::min(nz, g.worst);
    checks.add(tag + " graph outside crossing disks", graph, "min |n_z| " + fmt(nz) + " (x = " + fmt(cfg.graph_x) + ")");
    double fit = 0;
    for (const auto& f : r.helicoid_fits) fit = std::max(fit, f.residual);
    if (!r.helicoid_fits.empty())
      checks.add(tag + " helicoid fit", fit <= cfg.helicoid_fit_max, "max residual " + fmt(fit));
    bool sep = true;
    double gap = std::numeric_limits<double>::infinity();
    for (const auto& s : r.separations) sep = sep && s.pass, gap = std::min(gap, s.min_gap);
    if (!r.separations.empty()) checks.add(tag + " sheet separation", sep, "min gap " + fmt(gap));

    // verification-mode embeddedness spot check
    const auto emb = check_embedded(r.surface.components, 2 * mp.h, 1e-9);
    checks.add(tag + " embedded", emb.embedded,
               std::to_string(emb.intersecting_pairs) + " intersecting pairs of " + std::to_string(emb.pairs_tested));
  }
  if (all_built && p.least < p.runs.size() && p.runs.size() > 1) {
    double other = std::numeric_limits<double>::infinity();
    for (const auto& r : p.runs)
      if (r.index != p.least) other = std::min(other, r.area);
    const double a0 = p.runs[p.least].area;
    checks.add("least-area surface", a0 < other,
               "area " + fmt(a0) + ", next " + fmt(other) + " (margin " + fmt((other - a0) / a0 * 100) + "%)");
  }

  std::vector<std::size_t> all(p.runs.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  res.report = header(cfg, "verify");
  res.report["mesh"] = {{"t", mp.t}, {"h", mp.h}, {"rho", mp.rho}, {"corner_deg", mp.corner_deg}};
  res.report["arrangement"] = arrangement_summary(p.arr);
  res.report["upper_bound"] = bound;
  res.report["count"] = p.runs.size();
  res.report["least_area_index"] = p.least < p.runs.size() ? ojson(p.least) : ojson(nullptr);
  res.report["varifolds"] = varifold_list(p, &cfg, &all);
  res.report["notices"] = notices;
  res.report["checks"] = checks.list;
  res.report["passed"] = checks.pass;
  res.report["timing"] = {{"arrangement_s", p.t_arrange}, {"enumeration_s", p.t_enumerate},
                          {"build_s", t_build}, {"total_s", seconds_since(t0)}};
  for (const auto& c : checks.list)
    if (!c["pass"].get<bool>())
      res.messages.push_back("FAILED " + c["name"].get<std::string>() + ": " + c["detail"].get<std::string>());
  res.exit_code = checks.pass ? 0 : 1;
  finish(res, cfg, opts, "verify");
  return res;
}

CommandResult run_command(const std::string& command, const fs::path& config, const CommandOptions& opts) {
  try {
    const RunConfig cfg = load_config_file(config);
    if (command == "arrange") return cmd_arrange(cfg, opts);
    if (command == "enumerate") return cmd_enumerate(cfg, opts);
    if (command == "build") return cmd_build(cfg, opts);
    if (command == "verify") return cmd_verify(cfg, opts);
    throw input_error("unknown command '" + command + "'");
  } catch (const AtlasError& e) {
    CommandResult r;
    r.exit_code = (e.kind() == ErrorKind::Input || e.kind() == ErrorKind::Geometry) ? 2 : 1;
    r.messages.push_back(std::string("error: ") + e.what());
    return r;
  } catch (const fs::filesystem_error& e) {
    CommandResult r;
    r.exit_code = 2;
    r.messages.push_back(std::string("error: ") + e.what());
    return r;
  }
}

}  // namespace vatlas
