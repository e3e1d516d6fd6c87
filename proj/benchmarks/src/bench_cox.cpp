#include <random>

#include <benchmark/benchmark.h>

#include "censorlens/analytics/cox.hpp"

using namespace censorlens::analytics;

namespace {

struct Data {
  Eigen::MatrixXd X;
  std::vector<double> time;
  std::vector<int> event;
};

Data make(std::size_t n) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> z;
  std::exponential_distribution<double> t(0.01);
  std::bernoulli_distribution e(0.7);
  Data d{Eigen::MatrixXd(static_cast<Eigen::Index>(n), 5), {}, {}};
  for (std::size_t i = 0; i < n; ++i) {
    for (int k = 0; k < 5; ++k) d.X(static_cast<Eigen::Index>(i), k) = z(rng);
    d.time.push_back(std::ceil(t(rng)));  // integer minutes give ties
    d.event.push_back(e(rng));
  }
  return d;
}

void BM_PartialLikelihood(benchmark::State& state) {
  const auto d = make(static_cast<std::size_t>(state.range(0)));
  const Eigen::VectorXd beta = Eigen::VectorXd::Constant(5, 0.1);
  for (auto _ : state) benchmark::DoNotOptimize(breslow_partial_likelihood(d.X, d.time, d.event, beta));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_PartialLikelihood)->RangeMultiplier(4)->Range(256, 65536);

void BM_FitCox(benchmark::State& state) {
  const auto d = make(static_cast<std::size_t>(state.range(0)));
  const std::vector<std::string> names{"a", "b", "c", "d", "e"};
  for (auto _ : state) benchmark::DoNotOptimize(fit_cox(d.X, d.time, d.event, names));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_FitCox)->RangeMultiplier(4)->Range(256, 65536)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
