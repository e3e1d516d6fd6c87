#include <random>

#include <benchmark/benchmark.h>

#include "censorlens/imgclf/cam.hpp"
#include "censorlens/imgclf/network.hpp"

using namespace censorlens;
using namespace censorlens::imgclf;

namespace {

Image noise(int side) {
  std::mt19937_64 rng(2);
  Image img(side, side);
  for (auto& v : img.data()) v = static_cast<std::uint8_t>(rng() & 0xFF);
  return img;
}

Architecture arch(int side) { return {.input_side = side, .channels = {8, 16, 32}}; }

void BM_Forward(benchmark::State& state) {
  const int side = static_cast<int>(state.range(0));
  const ConvNet net(arch(side), 1);
  const auto x = net.prepare_input(noise(side));
  for (auto _ : state) benchmark::DoNotOptimize(net.logits(net.features(x)));
}
BENCHMARK(BM_Forward)->Arg(32)->Arg(64)->Arg(128);

void BM_BatchGradient(benchmark::State& state) {
  const int side = static_cast<int>(state.range(0));
  const ConvNet net(arch(side), 1);
  std::vector<Tensor> batch(16, net.prepare_input(noise(side)));
  std::vector<Category> labels(16, Category::Fire);
  std::vector<double> grad(net.parameter_count());
  for (auto _ : state) benchmark::DoNotOptimize(net.loss_and_gradient(batch, labels, grad));
  state.SetItemsProcessed(state.iterations() * 16);
}
BENCHMARK(BM_BatchGradient)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_Cam(benchmark::State& state) {
  const ConvNet net(arch(64), 1);
  const auto img = noise(200);
  for (auto _ : state) benchmark::DoNotOptimize(cam(net, img, Category::Protest));
}
BENCHMARK(BM_Cam);

}  // namespace

BENCHMARK_MAIN();
