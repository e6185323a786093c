// Serial vs OpenMP kernels on a refined lens surface, plus one full relaxation.

#include "../tests/support/fixtures.hpp"
#include "vatlas/kernels.hpp"
#include "vatlas/mesh_builder.hpp"
#include "vatlas/relax.hpp"
#include "vatlas/stability.hpp"

#include <benchmark/benchmark.h>

using namespace vatlas;

namespace {

// lens=0 surface at h = diameter / (60 * refine)
const TriMesh& lens_mesh(int refine) {
  static std::map<int, TriMesh> cache;
  auto it = cache.find(refine);
  if (it != cache.end()) return it->second;
  const auto arr = make_arrangement(fixtures::lens(512));
  MeshParams p;
  p.t = 0.02 * arr.curves.diameter();
  p.h = arr.curves.diameter() / (60.0 * refine);
  p = resolve_mesh_params(arr, p);
  for (const auto& v : enumerate_varifolds(arr)) {
    if (compute_stats(arr, v).f2 != 0) continue;
    auto s = build_surface(build_complex(arr, v), p);
    return cache[refine] = s.components[0];
  }
  throw std::runtime_error("no least-area varifold");
}

void BM_area_serial(benchmark::State& st) {
  const auto& m = lens_mesh(st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(area_serial(m));
  st.counters["triangles"] = m.triangles.size();
}

void BM_area_parallel(benchmark::State& st) {
  const auto& m = lens_mesh(st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(area_parallel(m));
  st.counters["threads"] = kernel_threads();
}

void BM_gradient_serial(benchmark::State& st) {
  const auto& m = lens_mesh(st.range(0));
  std::vector<Vec3> g;
  for (auto _ : st) {
    area_gradient_serial(m, g);
    benchmark::ClobberMemory();
  }
}

void BM_gradient_parallel(benchmark::State& st) {
  const auto& m = lens_mesh(st.range(0));
  const VertexStar star(m);
  std::vector<Vec3> g;
  for (auto _ : st) {
    area_gradient_parallel(m, star, g);
    benchmark::ClobberMemory();
  }
}

void BM_mixed_serial(benchmark::State& st) {
  const auto& m = lens_mesh(st.range(0));
  std::vector<double> a;
  for (auto _ : st) {
    mixed_areas_serial(m, a);
    benchmark::ClobberMemory();
  }
}

void BM_mixed_parallel(benchmark::State& st) {
  const auto& m = lens_mesh(st.range(0));
  const VertexStar star(m);
  std::vector<double> a;
  for (auto _ : st) {
    mixed_areas_parallel(m, star, a);
    benchmark::ClobberMemory();
  }
}

void BM_relax(benchmark::State& st) {
  const auto& base = lens_mesh(st.range(0));
  RelaxOptions o;
  o.tol_H = 1e-3 / 3.0;
  o.max_step = 0.25 * 3.0 / (60.0 * st.range(0));
  o.parallel = st.range(1) != 0;
  for (auto _ : st) {
    TriMesh m = base;
    benchmark::DoNotOptimize(relax(m, o).iterations);
  }
}

void BM_stability(benchmark::State& st) {
  const auto& m = lens_mesh(st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(stability_verdict(m, 1e-8, true).lambda1);
}

}  // namespace

BENCHMARK(BM_area_serial)->Arg(1)->Arg(4);
BENCHMARK(BM_area_parallel)->Arg(1)->Arg(4);
BENCHMARK(BM_gradient_serial)->Arg(1)->Arg(4);
BENCHMARK(BM_gradient_parallel)->Arg(1)->Arg(4);
BENCHMARK(BM_mixed_serial)->Arg(1)->Arg(4);
BENCHMARK(BM_mixed_parallel)->Arg(1)->Arg(4);
BENCHMARK(BM_relax)->Args({1, 0})->Args({1, 1})->Args({2, 0})->Args({2, 1})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_stability)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
