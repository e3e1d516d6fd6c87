#include <random>

#include <benchmark/benchmark.h>

#include "censorlens/textclf/model.hpp"
#include "censorlens/textclf/sentiment.hpp"

using namespace censorlens;
using namespace censorlens::textclf;

namespace {

std::vector<LabeledText> corpus(std::size_t per_class) {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> word(0, 400);
  std::vector<LabeledText> out;
  for (auto c : all_categories()) {
    for (std::size_t i = 0; i < per_class; ++i) {
      std::string text = "topic" + std::to_string(index_of(c));
      for (int w = 0; w < 12; ++w) text += " w" + std::to_string(word(rng));
      out.push_back({text, c});
    }
  }
  return out;
}

void BM_Tokenize(benchmark::State& state) {
  const DefaultTokenizer t;
  const std::string text = "今天北京下大雨 Fire near the station, 消防队已经到达现场 #breaking";
  for (auto _ : state) benchmark::DoNotOptimize(t.tokenize(text));
}
BENCHMARK(BM_Tokenize);

void BM_Train(benchmark::State& state) {
  const auto data = corpus(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(train_text_classifier(data));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(data.size()));
}
BENCHMARK(BM_Train)->Arg(20)->Arg(80)->Unit(benchmark::kMillisecond);

void BM_Lexicon(benchmark::State& state) {
  const LexiconSentiment lex({"good", "very nice", "开心"}, {"bad", "not good"});
  const std::string text = "not good at all, but the food was very nice and everyone was 开心";
  for (auto _ : state) benchmark::DoNotOptimize(lex.score(text));
}
BENCHMARK(BM_Lexicon);

}  // namespace

BENCHMARK_MAIN();
