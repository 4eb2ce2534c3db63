#include <benchmark/benchmark.h>

#include <vector>

#include "nivfunc/dgp.hpp"
#include "nivfunc/galerkin.hpp"
#include "nivfunc/harness.hpp"
#include "nivfunc/linalg.hpp"
#include "nivfunc/scenario.hpp"

namespace {

using namespace nivfunc;

void BM_BasisPrefix(benchmark::State& state) {
  std::vector<double> buf(static_cast<std::size_t>(state.range(0)));
  double s = 0.0;
  for (auto _ : state) {
    s += 1e-6;
    if (s >= 1.0) s = 0.0;
    eval_basis_prefix(s, buf);
    benchmark::DoNotOptimize(buf.data());
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_BasisPrefix)->RangeMultiplier(2)->Range(8, 64)->Complexity();

void BM_RejectionSampler(benchmark::State& state) {
  const Scenario sc = *scenario_preset("poly-rate");
  const JointModel model = sc.build_model();
  StreamRng rng(7u, 0, 99);
  std::vector<double> z, w;
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) {
    sample_pairs(model, n, rng, z, w);
    benchmark::DoNotOptimize(z.data());
  }
  state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_RejectionSampler)->Arg(1000)->Arg(10000);

void BM_EmpiricalPair(benchmark::State& state) {
  const Scenario sc = *scenario_preset("poly-rate");
  const JointModel model = sc.build_model();
  StreamRng rng(8u, 0, 99);
  const Sample sample = draw_sample(model, sc.structural_coefs(), sc.sigma, 10000, rng);
  const int m = static_cast<int>(state.range(0));
  for (auto _ : state) {
    const GalerkinPair pair = empirical_pair(sample, m);
    benchmark::DoNotOptimize(pair.t_hat.data().data());
  }
}
BENCHMARK(BM_EmpiricalPair)->Arg(2)->Arg(8)->Arg(32);

void BM_SpectralNorm(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  StreamRng rng(9u, 0, 99);
  DenseMatrix a(m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) a(i, j) = rng.normal();
  for (auto _ : state) benchmark::DoNotOptimize(spectral_norm(a));
}
BENCHMARK(BM_SpectralNorm)->Arg(4)->Arg(16)->Arg(64);

void BM_EstimatorPipeline(benchmark::State& state) {
  Scenario sc = *scenario_preset("poly-rate");
  sc.n_grid = {static_cast<long>(state.range(0))};
  sc.reps = 8;
  for (auto _ : state) {
    const auto records = run_experiment(sc, 1);
    benchmark::DoNotOptimize(records.data());
  }
  state.SetItemsProcessed(state.iterations() * sc.reps);
}
BENCHMARK(BM_EstimatorPipeline)->Arg(1000)->Arg(4000);

}  // namespace

BENCHMARK_MAIN();
