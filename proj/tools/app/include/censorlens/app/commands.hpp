#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "censorlens/analytics/cox.hpp"
#include "censorlens/app/workspace.hpp"
#include "censorlens/imgclf/trainer.hpp"
#include "censorlens/review.hpp"
#include "censorlens/synth.hpp"
#include "censorlens/textclf/model.hpp"

namespace censorlens::app {

struct SynthOptions {
  std::filesystem::path out;
  synth::GeneratorConfig config;
  synth::DatasetSizes sizes;
};
void cmd_synth(const SynthOptions& o);

struct IngestOptions {
  Workspace ws;
  std::filesystem::path posts;
  std::filesystem::path images;
  std::optional<std::string> window_start;
  std::optional<std::string> window_end;
};
void cmd_ingest(const IngestOptions& o);

struct AugmentOptions {
  std::filesystem::path input;
  std::filesystem::path output;
  std::vector<std::string> kinds;
  std::optional<std::size_t> target;
  std::uint64_t seed = 0;
};
void cmd_augment(const AugmentOptions& o);

struct TrainImageOptions {
  Workspace ws;
  std::filesystem::path train;
  std::optional<std::filesystem::path> test;
  imgclf::TrainConfig config;
  double threshold = 0.80;
};
void cmd_train_image(const TrainImageOptions& o);

struct TrainTextOptions {
  Workspace ws;
  std::filesystem::path train;
  std::optional<std::filesystem::path> test;
  textclf::TextTrainOptions options;
  std::optional<std::size_t> cv_folds;
};
void cmd_train_text(const TrainTextOptions& o);

struct SentimentOptions {
  /// lexicon | http | oracle
  std::string provider = "lexicon";
  std::optional<std::filesystem::path> positive;
  std::optional<std::filesystem::path> negative;
  std::string endpoint;
  std::string path = "/sentiment";
  int timeout_ms = 2000;
  int retries = 2;
  std::size_t max_parallel = 4;
  /// error | lexicon
  std::string fallback = "lexicon";
};

struct ClassifyOptions {
  Workspace ws;
  /// Ground-truth CSV from synth; replaces both classifiers.
  std::optional<std::filesystem::path> oracle;
  std::optional<double> threshold;
  SentimentOptions sentiment;
};
void cmd_classify(const ClassifyOptions& o);

struct LocalizeOptions {
  Workspace ws;
  /// 0 = every post with a topic image decision.
  std::size_t limit = 0;
};
void cmd_localize(const LocalizeOptions& o);

struct AnalyzeOptions {
  Workspace ws;
  std::optional<std::string> window_end;
  std::optional<double> max_followup_minutes;
  bool log1p_counts = false;
  double bucket_hours = 24.0;
  analytics::CoxOptions cox;
};
void cmd_analyze(const AnalyzeOptions& o);

struct ReportOptions {
  Workspace ws;
  std::optional<std::filesystem::path> out;
};
void cmd_report(const ReportOptions& o);

struct ServeOptions {
  Workspace ws;
  std::string host = "127.0.0.1";
  int port = 8080;
  review::Order order = review::Order::AscendingConfidence;
};
void cmd_serve(const ServeOptions& o);

}  // namespace censorlens::app
