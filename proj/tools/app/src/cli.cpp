#include "censorlens/app/cli.hpp"

#include <iostream>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "censorlens/app/commands.hpp"
#include "censorlens/error.hpp"

namespace censorlens::app {
namespace {

void add_sentiment_flags(CLI::App* cmd, SentimentOptions& s) {
  cmd->add_option("--sentiment", s.provider, "Sentiment provider: lexicon, http or oracle")
      ->check(CLI::IsMember({"lexicon", "http", "oracle"}));
  cmd->add_option("--lexicon-positive", s.positive, "Positive lexicon, one term per line")->check(CLI::ExistingFile);
  cmd->add_option("--lexicon-negative", s.negative, "Negative lexicon, one term per line")->check(CLI::ExistingFile);
  cmd->add_option("--sentiment-endpoint", s.endpoint, "External scorer base URL, e.g. http://127.0.0.1:9000");
  cmd->add_option("--sentiment-path", s.path, "Request path of the external scorer");
  cmd->add_option("--sentiment-timeout-ms", s.timeout_ms, "Per-attempt timeout")->check(CLI::PositiveNumber);
  cmd->add_option("--sentiment-retries", s.retries, "Retries after the first attempt")->check(CLI::NonNegativeNumber);
  cmd->add_option("--sentiment-parallel", s.max_parallel, "Concurrent request cap")->check(CLI::PositiveNumber);
  cmd->add_option("--sentiment-fallback", s.fallback, "On failure: error or lexicon")
      ->check(CLI::IsMember({"error", "lexicon"}));
}

}  // namespace

int run(int argc, const char* const* argv) {
  CLI::App app{"censorlens: censorship measurement pipeline for social media posts"};
  app.require_subcommand(1);
  app.set_config("--config", "", "TOML/INI configuration file; command-line flags override it");
  std::string workdir = "censorlens-work";
  std::string log_level = "info";
  app.add_option("-w,--workdir", workdir, "Workspace directory shared by all stages")->capture_default_str();
  app.add_option("--log-level", log_level, "trace, debug, info, warn, error or off")
      ->check(CLI::IsMember({"trace", "debug", "info", "warn", "error", "off"}));

  SynthOptions synth_o;
  synth_o.out = "synth";
  double beta_image = 0.0, beta_text = 0.0, beta_reposts = 0.0, beta_comments = 0.0, beta_sentiment = -0.3;
  auto* synth = app.add_subcommand("synth", "Generate a synthetic corpus with planted ground truth");
  synth->add_option("-o,--out", synth_o.out, "Output directory")->capture_default_str();
  synth->add_option("-n,--posts", synth_o.config.n, "Number of posts")->check(CLI::PositiveNumber);
  synth->add_option("--seed", synth_o.config.seed, "Random seed");
  synth->add_option("--baseline-hazard", synth_o.config.baseline_hazard, "Events per minute")->check(CLI::PositiveNumber);
  synth->add_option("--horizon-minutes", synth_o.config.horizon_minutes, "Follow-up horizon")
      ->check(CLI::PositiveNumber);
  synth->add_option("--beta-image", beta_image);
  synth->add_option("--beta-text", beta_text);
  synth->add_option("--beta-reposts", beta_reposts);
  synth->add_option("--beta-comments", beta_comments);
  synth->add_option("--beta-sentiment", beta_sentiment)->capture_default_str();
  synth->add_option("--voluntary-rate", synth_o.config.voluntary_deletion_rate, "Author deletion rate")
      ->check(CLI::Range(0.0, 1.0));
  synth->add_option("--image-side", synth_o.config.image_side, "Rendered image side in pixels")
      ->check(CLI::Range(8, 1024));
  synth->add_option("--train-images", synth_o.sizes.train_images_per_category, "Training images per category");
  synth->add_option("--test-images", synth_o.sizes.test_images_per_category, "Test images per category");
  synth->add_option("--train-texts", synth_o.sizes.train_texts_per_category, "Training texts per category");
  synth->add_option("--test-texts", synth_o.sizes.test_texts_per_category, "Test texts per category");

  IngestOptions ingest_o;
  auto* ingest = app.add_subcommand("ingest", "Validate and load a post file with its image store");
  ingest->add_option("--posts", ingest_o.posts, "Line-delimited JSON posts")->required()->check(CLI::ExistingFile);
  ingest->add_option("--images", ingest_o.images, "Image root directory")->required()->check(CLI::ExistingDirectory);
  ingest->add_option("--window-start", ingest_o.window_start, "Observation window start (ISO-8601 UTC)");
  ingest->add_option("--window-end", ingest_o.window_end, "Observation window end (ISO-8601 UTC)");

  AugmentOptions augment_o;
  auto* augment = app.add_subcommand("augment", "Expand a labeled image directory with label-preserving transforms");
  augment->add_option("--input", augment_o.input, "Labeled image directory")->required()->check(CLI::ExistingDirectory);
  augment->add_option("--output", augment_o.output, "Output directory (replaced)")->required();
  augment->add_option("--kinds", augment_o.kinds, "Subset of contrast, affine, perspective, sharpen, blur, padding");
  augment->add_option("--target", augment_o.target, "Requested output size (target-size mode)");
  augment->add_option("--seed", augment_o.seed, "Random seed");

  TrainImageOptions image_o;
  auto* train_image = app.add_subcommand("train-image", "Train the image classifier");
  train_image->add_option("--train", image_o.train, "Labeled image directory")->required()->check(CLI::ExistingDirectory);
  train_image->add_option("--test", image_o.test, "Held-out labeled image directory")->check(CLI::ExistingDirectory);
  train_image->add_option("--epochs", image_o.config.epochs)->check(CLI::PositiveNumber);
  train_image->add_option("--batch-size", image_o.config.batch_size)->check(CLI::PositiveNumber);
  train_image->add_option("--learning-rate", image_o.config.learning_rate)->check(CLI::PositiveNumber);
  train_image->add_option("--lr-decay", image_o.config.lr_decay)->check(CLI::Range(0.0, 1.0));
  train_image->add_option("--validation-fraction", image_o.config.validation_fraction)->check(CLI::Range(0.0, 1.0));
  train_image->add_option("--input-side", image_o.config.architecture.input_side)->check(CLI::Range(8, 1024));
  train_image->add_option("--channels", image_o.config.architecture.channels, "Channels per conv stage");
  train_image->add_option("--seed", image_o.config.seed);
  train_image->add_option("--threshold", image_o.threshold, "Confidence gate stored with the model")
      ->capture_default_str();

  TrainTextOptions text_o;
  auto* train_text = app.add_subcommand("train-text", "Train the text classifier");
  train_text->add_option("--train", text_o.train, "CSV with text and category columns")->required()->check(CLI::ExistingFile);
  train_text->add_option("--test", text_o.test, "Held-out CSV")->check(CLI::ExistingFile);
  train_text->add_option("--lambda", text_o.options.lambda, "L2 strength")->check(CLI::NonNegativeNumber);
  train_text->add_option("--tolerance", text_o.options.tolerance)->check(CLI::PositiveNumber);
  train_text->add_option("--max-iterations", text_o.options.max_iterations)->check(CLI::PositiveNumber);
  train_text->add_option("--min-count", text_o.options.min_count, "Vocabulary pruning threshold");
  train_text->add_option("--cv", text_o.cv_folds, "Also run stratified k-fold cross-validation");
  train_text->add_option("--seed", text_o.options.seed);

  ClassifyOptions classify_o;
  auto* classify = app.add_subcommand("classify", "Categorize every ingested post by image and text");
  classify->add_option("--oracle", classify_o.oracle, "Synthetic ground truth CSV; bypasses the models")
      ->check(CLI::ExistingFile);
  classify->add_option("--threshold", classify_o.threshold, "Image confidence gate (default: stored with the model)");
  add_sentiment_flags(classify, classify_o.sentiment);

  LocalizeOptions localize_o;
  auto* localize = app.add_subcommand("localize", "Export CAM overlays for image decisions");
  localize->add_option("--limit", localize_o.limit, "Keep the N most confident items (0 = all)");

  AnalyzeOptions analyze_o;
  auto* analyze = app.add_subcommand("analyze", "Rates, lifetimes, creation times and survival regression");
  analyze->add_option("--window-end", analyze_o.window_end, "Right-censoring time (default: ingest window end)");
  analyze->add_option("--max-followup-minutes", analyze_o.max_followup_minutes, "Cap on follow-up per post")
      ->check(CLI::PositiveNumber);
  analyze->add_flag("--log1p-counts", analyze_o.log1p_counts, "Enter reposts and comments as log1p");
  analyze->add_option("--bucket-hours", analyze_o.bucket_hours, "Creation-time histogram bucket")
      ->check(CLI::PositiveNumber);
  analyze->add_option("--cox-tolerance", analyze_o.cox.tolerance)->check(CLI::PositiveNumber);
  analyze->add_option("--cox-max-iterations", analyze_o.cox.max_iterations)->check(CLI::PositiveNumber);

  ReportOptions report_o;
  auto* report = app.add_subcommand("report", "Print the analysis report");
  report->add_option("--out", report_o.out, "Also write the report to this file");

  ServeOptions serve_o;
  std::string order = "asc";
  auto* serve = app.add_subcommand("serve", "Serve the review API");
  serve->add_option("--host", serve_o.host)->capture_default_str();
  serve->add_option("--port", serve_o.port)->check(CLI::Range(1, 65535))->capture_default_str();
  serve->add_option("--order", order, "Default item order: asc (annotation) or desc (triage)")
      ->check(CLI::IsMember({"asc", "desc"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  // stdout carries command output (report); logs go to stderr.
  static const bool stderr_logger = [] {
    spdlog::set_default_logger(spdlog::stderr_color_mt("censorlens"));
    return true;
  }();
  (void)stderr_logger;
  spdlog::set_level(spdlog::level::from_str(log_level));
  const Workspace ws{workdir};
  try {
    if (*synth) {
      synth_o.config.beta = {beta_image, beta_text, beta_reposts, beta_comments, beta_sentiment};
      cmd_synth(synth_o);
    } else if (*ingest) {
      ingest_o.ws = ws;
      cmd_ingest(ingest_o);
    } else if (*augment) {
      cmd_augment(augment_o);
    } else if (*train_image) {
      image_o.ws = ws;
      cmd_train_image(image_o);
    } else if (*train_text) {
      text_o.ws = ws;
      cmd_train_text(text_o);
    } else if (*classify) {
      classify_o.ws = ws;
      cmd_classify(classify_o);
    } else if (*localize) {
      localize_o.ws = ws;
      cmd_localize(localize_o);
    } else if (*analyze) {
      analyze_o.ws = ws;
      cmd_analyze(analyze_o);
    } else if (*report) {
      report_o.ws = ws;
      cmd_report(report_o);
    } else if (*serve) {
      serve_o.ws = ws;
      serve_o.order = order == "desc" ? review::Order::DescendingConfidence : review::Order::AscendingConfidence;
      cmd_serve(serve_o);
    }
  } catch (const MissingDependency& e) {
    spdlog::error("{}", e.what());
    return kMissingDependency;
  } catch (const UsageError& e) {
    spdlog::error("{}", e.what());
    return kUsage;
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return kRuntimeFailure;
  }
  return kOk;
}

int run(const std::vector<std::string>& args) {
  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  for (const auto& a : args) argv.push_back(a.c_str());
  argv.push_back(nullptr);
  return run(static_cast<int>(args.size()), argv.data());
}

}  // namespace censorlens::app
