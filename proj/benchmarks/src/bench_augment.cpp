#include <random>

#include <benchmark/benchmark.h>

#include "censorlens/augment.hpp"

using namespace censorlens;
using namespace censorlens::augment;

namespace {

Image noise(int side) {
  std::mt19937_64 rng(3);
  Image img(side, side);
  for (auto& v : img.data()) v = static_cast<std::uint8_t>(rng() & 0xFF);
  return img;
}

void BM_Transform(benchmark::State& state) {
  const auto kind = kAllKinds[static_cast<std::size_t>(state.range(0))];
  const auto img = noise(256);
  Rng rng(4);
  const auto spec = sample_spec(kind, rng);
  state.SetLabel(std::string(to_string(kind)));
  for (auto _ : state) benchmark::DoNotOptimize(apply_transform(img, spec));
}
BENCHMARK(BM_Transform)->DenseRange(0, static_cast<int>(kAllKinds.size()) - 1);

void BM_TargetSize(benchmark::State& state) {
  std::vector<Item> items;
  for (int i = 0; i < 20; ++i) items.push_back({noise(64), category_at(static_cast<std::size_t>(i) % kNumCategories)});
  for (auto _ : state) benchmark::DoNotOptimize(augment_to_target_size(items, 120, 5));
}
BENCHMARK(BM_TargetSize)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
