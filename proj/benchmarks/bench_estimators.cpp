#include <benchmark/benchmark.h>

#include "smdpde/assembly.hpp"
#include "smdpde/mdpde.hpp"
#include "smdpde/nearest_pd.hpp"
#include "smdpde/simulation.hpp"

using namespace smdpde;

namespace {

DataMatrix clean_sample(std::size_t n, std::size_t p) {
  return sample_mvn(n, Eigen::VectorXd::Zero(static_cast<Eigen::Index>(p)),
                    gen_block_banded(p, 0.7), 42);
}

void BM_Estimate(benchmark::State& state) {
  const auto p = static_cast<std::size_t>(state.range(0));
  const DataMatrix d = clean_sample(2000, p);
  EstimateOptions opt;
  opt.threads = 1;
  for (auto _ : state) benchmark::DoNotOptimize(estimate(d, TuningBeta(0.3), opt));
  state.counters["pairs"] = static_cast<double>(p * (p - 1) / 2);
}
BENCHMARK(BM_Estimate)->Arg(2)->Arg(5)->Arg(10)->Arg(20)->Unit(benchmark::kMillisecond);

void BM_FitMdpde(benchmark::State& state) {
  const auto p = static_cast<std::size_t>(state.range(0));
  const DataMatrix d = clean_sample(2000, p);
  for (auto _ : state) benchmark::DoNotOptimize(fit_mdpde(d, TuningBeta(0.3)));
}
BENCHMARK(BM_FitMdpde)->Arg(2)->Arg(5)->Arg(10)->Arg(20)->Unit(benchmark::kMillisecond);

void BM_NearestPd(benchmark::State& state) {
  const auto p = static_cast<Eigen::Index>(state.range(0));
  // Equicorrelation -0.9 is indefinite for p >= 3.
  Eigen::MatrixXd R = Eigen::MatrixXd::Constant(p, p, -0.9);
  R.diagonal().setOnes();
  for (auto _ : state) benchmark::DoNotOptimize(nearest_pd(R));
}
BENCHMARK(BM_NearestPd)->Arg(5)->Arg(20)->Arg(50)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
