#include "levythin/distributions.hpp"
#include "levythin/rng.hpp"
#include "levythin/thinning.hpp"

#include <benchmark/benchmark.h>

namespace {

using namespace levythin;

void BM_Gamma(benchmark::State& state) {
  Rng rng(1, 0);
  const double shape = static_cast<double>(state.range(0)) / 10.0;
  for (auto _ : state) benchmark::DoNotOptimize(sample_gamma(shape, 1.0, rng));
}
BENCHMARK(BM_Gamma)->Arg(1)->Arg(10)->Arg(100);

void BM_Binomial(benchmark::State& state) {
  Rng rng(2, 0);
  for (auto _ : state) benchmark::DoNotOptimize(sample_binomial(state.range(0), 0.3, rng));
}
BENCHMARK(BM_Binomial)->Arg(5)->Arg(50)->Arg(5000);

void BM_Poisson(benchmark::State& state) {
  Rng rng(3, 0);
  const auto rate = static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(sample_poisson(rate, rng));
}
BENCHMARK(BM_Poisson)->Arg(1)->Arg(30)->Arg(1000);

void BM_ThinPoissonDocument(benchmark::State& state) {
  Rng rng(4, 0);
  Eigen::VectorXd x(500);
  for (Eigen::Index j = 0; j < x.size(); ++j) x[j] = static_cast<double>(sample_poisson(2.0, rng));
  for (auto _ : state) benchmark::DoNotOptimize(thin_poisson(x, 0.1, rng));
}
BENCHMARK(BM_ThinPoissonDocument);

void BM_ThinWishart(benchmark::State& state) {
  Rng rng(5, 0);
  const auto d = static_cast<int>(state.range(0));
  const Eigen::MatrixXd x = sample_wishart(Eigen::MatrixXd::Identity(d, d), 4.0 * d, rng);
  for (auto _ : state) benchmark::DoNotOptimize(thin_wishart(x, 0.5, 4.0 * d, rng));
}
BENCHMARK(BM_ThinWishart)->Arg(2)->Arg(8)->Arg(32);

}  // namespace
