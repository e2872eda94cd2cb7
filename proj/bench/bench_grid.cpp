#include <benchmark/benchmark.h>

#include "meridian/classifier_verifier.hpp"
#include "meridian/grid_kernels.hpp"

namespace {

using namespace meridian;

struct Fixture {
  BuiltInstance inst;
  GridSpec grid;
};

const Fixture& fixture() {
  static const Fixture fx = [] {
    InstanceSpec spec;
    spec.theorem = TheoremTag::T41ii;
    spec.params.a = 1.0;
    BuiltInstance inst = build_instance(spec);
    GridSpec grid{default_u_range(inst.spec), default_v_range(inst.spec), 0, 0};
    return Fixture{std::move(inst), grid};
  }();
  return fx;
}

template <bool Parallel>
void BM_Grid(benchmark::State& state) {
  const Fixture& fx = fixture();
  GridSpec grid = fx.grid;
  grid.nu = grid.nv = static_cast<std::size_t>(state.range(0));
  GridOptions opt;
  opt.with_oracle = state.range(1) != 0;
  for (auto _ : state) {
    auto reports = Parallel ? evaluate_grid_parallel(fx.inst.surface, grid, opt)
                            : evaluate_grid_serial(fx.inst.surface, grid, opt);
    benchmark::DoNotOptimize(reports.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(grid.size()));
}

void grid_args(benchmark::internal::Benchmark* b) {
  for (int n : {20, 40}) {
    for (int oracle : {0, 1}) b->Args({n, oracle});
  }
  b->ArgNames({"n", "oracle"})->Unit(benchmark::kMillisecond);
}

BENCHMARK(BM_Grid<false>)->Name("grid/serial")->Apply(grid_args);
BENCHMARK(BM_Grid<true>)->Name("grid/parallel")->Apply(grid_args);

}  // namespace

BENCHMARK_MAIN();
