// Serial reference against the OpenMP curvature kernel, and a full shape
// ledger rebuild, over a few grid sizes.

#include <benchmark/benchmark.h>

#include "mcf/kernels.hpp"
#include "mcf/profile.hpp"
#include "mcf/shape.hpp"

namespace {

mcf::ProfileGrid grid(int N) {
  static const std::vector<double> c = {0.02, 0.05, 0.01};
  return mcf::ProfileGrid::from_cosine_profile(3, N, 0.5, c, mcf::EquatorFrame::standard(3));
}

void ledger(benchmark::State& state, mcf::Execution exec) {
  const auto g = grid(static_cast<int>(state.range(0)));
  const auto rho_u = mcf::diff_u(g.rho(), mcf::Parity::Even, g.du());
  const auto rho_uu = mcf::diff_uu(g.rho(), mcf::Parity::Even, g.du());
  mcf::CurvatureLedger out;
  for (auto _ : state) {
    mcf::curvature_ledger(g.rho(), rho_u, rho_uu, g.du(), g.n(), out, exec);
    benchmark::DoNotOptimize(out.H.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_LedgerSerial(benchmark::State& s) { ledger(s, mcf::Execution::Serial); }
void BM_LedgerOpenMP(benchmark::State& s) { ledger(s, mcf::Execution::Parallel); }

void shape(benchmark::State& state, mcf::Execution exec) {
  const auto g = grid(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(mcf::shape_data(g, exec));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_ShapeSerial(benchmark::State& s) { shape(s, mcf::Execution::Serial); }
void BM_ShapeOpenMP(benchmark::State& s) { shape(s, mcf::Execution::Parallel); }

}  // namespace

BENCHMARK(BM_LedgerSerial)->RangeMultiplier(4)->Range(256, 1 << 16);
BENCHMARK(BM_LedgerOpenMP)->RangeMultiplier(4)->Range(256, 1 << 16);
BENCHMARK(BM_ShapeSerial)->RangeMultiplier(4)->Range(256, 1 << 16);
BENCHMARK(BM_ShapeOpenMP)->RangeMultiplier(4)->Range(256, 1 << 16);

BENCHMARK_MAIN();
