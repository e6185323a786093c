#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "../support/fixtures.hpp"
#include "../support/surfaces.hpp"
#include "vatlas/embedding.hpp"
#include "vatlas/error.hpp"
#include "vatlas/pipeline.hpp"
#include "vatlas/svg.hpp"

#include <filesystem>
#include <functional>

using namespace vatlas;
using nlohmann::json;

namespace {

json lens_doc() {
  return json::parse(R"({
    "name": "lens",
    "curves_a": [{"circle": {"center": [0, 0], "r": 1, "samples": 256}}],
    "curves_b": [{"circle": {"center": [1, 0], "r": 1, "samples": 256}}]
  })");
}

json doc_for(const CurveSet& cs, const std::string& name) {
  json d;
  d["name"] = name;
  d["curves_a"] = json::array();
  d["curves_b"] = json::array();
  for (const auto& c : cs.curves) {
    json pts = json::array();
    for (const auto& p : c.points) pts.push_back({p.x(), p.y()});
    d[c.family == Family::A ? "curves_a" : "curves_b"].push_back({{"points", pts}});
  }
  return d;
}

CommandOptions no_files() {
  CommandOptions o;
  o.write_files = false;
  return o;
}

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const AtlasError& e) {
    return e.kind();
  }
  FAIL("no error thrown");
  return ErrorKind::Numerical;
}

}  // namespace

TEST_CASE("config defaults are filled in and echoed") {
  const auto cfg = load_config(lens_doc());
  CHECK(cfg.name == "lens");
  CHECK(cfg.diameter == doctest::Approx(3.0).epsilon(1e-4));
  CHECK(cfg.t == doctest::Approx(0.02 * cfg.diameter));
  CHECK(cfg.relax.tol_H == doctest::Approx(1e-3 / cfg.diameter));
  CHECK(cfg.relax.max_iters == 20000);
  CHECK(cfg.oracle_face_limit == 16);
  CHECK(cfg.hash.size() == 64);
  const auto e = cfg.echo();
  CHECK(e["tolerances"]["theta_min"] == 1e-3);
  CHECK(e["mesh"]["tol_H"] == cfg.relax.tol_H);
  CHECK(cfg.warnings.empty());
}

TEST_CASE("config hash ignores formatting but not content") {
  const auto a = load_config(lens_doc());
  const auto b = load_config(json::parse(lens_doc().dump(4)));
  CHECK(a.hash == b.hash);
  auto d = lens_doc();
  d["t"] = 0.05;
  CHECK(load_config(d).hash != a.hash);
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("config errors are input errors") {
  auto d = lens_doc();
  d["colour"] = "red";
  CHECK(kind_of([&] { load_config(d); }) == ErrorKind::Input);
  d = lens_doc();
  d["t"] = 0.1;
  d["t_relative"] = 0.1;
  CHECK(kind_of([&] { load_config(d); }) == ErrorKind::Input);
  d = lens_doc();
  d["t"] = -1;
  CHECK(kind_of([&] { load_config(d); }) == ErrorKind::Input);
  d = lens_doc();
  d["mesh"] = {{"max_iters", 1.5}};
  CHECK(kind_of([&] { load_config(d); }) == ErrorKind::Input);
  d = lens_doc();
  d["name"] = "../x";
  CHECK(kind_of([&] { load_config(d); }) == ErrorKind::Input);
  CHECK(kind_of([&] { load_config_file("/nonexistent/config.json"); }) == ErrorKind::Input);
}

TEST_CASE("large t warns but still loads") {
  auto d = lens_doc();
  d["t_relative"] = 0.6;
  const auto cfg = load_config(d);
  REQUIRE(cfg.warnings.size() == 1);
  CHECK(cfg.warnings[0].find("asymptotic regime not guaranteed") != std::string::npos);
}

TEST_CASE("arrange summaries") {
  auto r = cmd_arrange(load_config(lens_doc()), no_files()).report;
  CHECK(r["arrangement"]["crossings"] == 2);
  CHECK(r["arrangement"]["faces"] == 4);
  CHECK(r["arrangement"]["upper_bound"] == 3);
  CHECK(r["version"] == version());
  r = cmd_arrange(load_config(doc_for(fixtures::disjoint_circles(), "disjoint")), no_files()).report;
  CHECK(r["arrangement"]["crossings"] == 0);
  CHECK(r["arrangement"]["upper_bound"] == 2);
}

TEST_CASE("enumerate reports") {
  auto r = cmd_enumerate(load_config(lens_doc()), no_files()).report;
  REQUIRE(r["varifolds"].size() == 2);
  std::set<long> chis;
  for (const auto& v : r["varifolds"]) chis.insert(v["stats"]["chi"].get<long>());
  CHECK(chis == std::set<long>{0, 2});
  const auto least = r["least_area_index"].get<std::size_t>();
  CHECK(r["varifolds"][least]["stats"]["f2"] == 0);
  CHECK(r["varifolds"][least]["least_area"] == true);
  CHECK(r["varifolds"][least]["stats"]["chi"] == 0);

  r = cmd_enumerate(load_config(doc_for(fixtures::disjoint_circles(), "disjoint")), no_files()).report;
  REQUIRE(r["varifolds"].size() == 1);
  CHECK(r["varifolds"][0]["stats"]["chi"] == 2);

  r = cmd_enumerate(load_config(doc_for(fixtures::random_pair(42), "seed42")), no_files()).report;
  CHECK(r["count"].get<std::uint64_t>() <= r["upper_bound"].get<std::uint64_t>());
}

TEST_CASE("reports round-trip byte for byte") {
  const auto r = cmd_enumerate(load_config(lens_doc()), no_files()).report;
  const std::string once = r.dump(2);
  const std::string twice = nlohmann::ordered_json::parse(once).dump(2);
  CHECK(once == twice);
}

TEST_CASE("build one varifold and report its geometry") {
  auto cfg = load_config(lens_doc());
  CommandOptions o = no_files();
  o.varifold = 0;
  const auto res = cmd_build(cfg, o);
  CHECK(res.exit_code == 0);
  const auto& v = res.report["varifolds"];
  CHECK(v[0].contains("geometry"));
  CHECK_FALSE(v[1].contains("geometry"));
  CHECK(v[0]["geometry"]["status"] == "built");
  for (const auto& c : v[0]["geometry"]["components"]) {
    CHECK(c["relax"]["converged"] == true);
    CHECK(c["stability"]["verdict"] == "STABLE");
  }
  o.varifold = 7;
  CHECK(kind_of([&] { cmd_build(cfg, o); }) == ErrorKind::Input);
}

TEST_CASE("replay of a corrupted report fails with a chi mismatch") {
  const auto cfg = load_config(lens_doc());
  const auto arr = make_arrangement(cfg.curves, cfg.arrangement);
  json rep = json::parse(cmd_enumerate(cfg, no_files()).report.dump());
  CHECK(replay_checks(cfg, arr, rep)["pass"] == true);
  rep["varifolds"][1]["stats"]["chi"] = 5;
  const auto bad = replay_checks(cfg, arr, rep);
  CHECK(bad["pass"] == false);
  bool found = false;
  for (const auto& c : bad["checks"])
    found = found || (!c["pass"].get<bool>() && c["detail"].get<std::string>().find("chi mismatch") == 0);
  CHECK(found);
  rep = json::parse(cmd_enumerate(cfg, no_files()).report.dump());
  rep["varifolds"][0]["multiplicities"][1] = 2;
  CHECK(replay_checks(cfg, arr, rep)["pass"] == false);
}

TEST_CASE("verify skips the oracle above the face limit") {
  auto d = lens_doc();
  d["tolerances"] = {{"oracle_face_limit", 2}};
  const auto res = cmd_verify(load_config(d), no_files());
  REQUIRE(res.report["notices"].size() == 1);
  CHECK(res.report["notices"][0].get<std::string>().find("oracle skipped") != std::string::npos);
  CHECK(res.exit_code == 0);
}

TEST_CASE("run_command maps errors to exit codes") {
  const auto dir = std::filesystem::temp_directory_path() / "vatlas_pipeline_test";
  std::filesystem::create_directories(dir);
  CommandOptions o = no_files();
  CHECK(run_command("arrange", dir / "missing.json", o).exit_code == 2);
  {
    std::ofstream(dir / "bad.json") << "{ not json";
  }
  CHECK(run_command("arrange", dir / "bad.json", o).exit_code == 2);
  {
    auto d = lens_doc();
    d["curves_b"][0]["circle"] = {{"center", {0.5, 0}}, {"r", 0.5}, {"samples", 256}};
    std::ofstream(dir / "tangent.json") << d.dump();
  }
  const auto t = run_command("arrange", dir / "tangent.json", o);
  CHECK(t.exit_code == 2);
  REQUIRE(!t.messages.empty());
  CHECK(t.messages[0].find("tangential contact") != std::string::npos);
}

TEST_CASE("convexity and rotation helpers") {
  CHECK(is_convex(fixtures::square(1)));
  CHECK(is_convex(sample_circle(Vec2(0, 0), 1, 50)));
  CHECK_FALSE(is_convex({{0, 0}, {2, 0}, {1, 0.5}, {2, 2}, {0, 2}}));
  CHECK(is_rotation_of({1, 0, 1, 0}, {0, 1, 0, 1}));
  CHECK(is_rotation_of({2, 1, 0, 1}, {0, 1, 2, 1}));
  CHECK_FALSE(is_rotation_of({0, 1, 1, 0}, {0, 1, 0, 1}));
}

TEST_CASE("svg render shows every face, curve and crossing") {
  const auto arr = make_arrangement(fixtures::lens(64));
  const auto svg = render_svg(arr);
  auto count = [&](const std::string& needle) {
    std::size_t n = 0;
    for (auto p = svg.find(needle); p != std::string::npos; p = svg.find(needle, p + 1)) ++n;
    return n;
  };
  CHECK(count("<path") == arr.bounded_face_count());
  CHECK(count("<polygon") == 2);
  CHECK(count("<circle") == 2);
  CHECK(count("fill=\"#ffffff\"") == 2);  // the two lunes are PLUS
  const auto vs = enumerate_varifolds(arr);
  CHECK(render_svg(arr, &vs[0]).find("<text") != std::string::npos);
}

TEST_CASE("embedding check sees crossing sheets and ignores stacked ones") {
  auto a = surfaces::flat_disk(1.0, 0.1);
  auto b = a;
  for (auto& v : b.vertices) v.z() += 0.05;
  std::vector<TriMesh> stacked{a, b};
  CHECK(check_embedded(stacked, 0.2, 1e-9).embedded);
  // tilted disk through a, in general position
  for (auto& v : b.vertices) v = Vec3(v.x() + 0.0071, v.y() * std::cos(1.1), v.y() * std::sin(1.1) + 0.0137);
  std::vector<TriMesh> crossed{a, b};
  const auto e = check_embedded(crossed, 0.2, 1e-9);
  CHECK_FALSE(e.embedded);
  CHECK(std::abs(e.first_hit.z()) < 1e-9);
  CHECK(check_embedded(std::vector<TriMesh>{surfaces::icosphere(2)}, 0.3, 1e-9).embedded);
}
