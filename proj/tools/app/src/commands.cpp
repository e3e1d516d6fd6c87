#include "censorlens/app/commands.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <set>
#include <unordered_map>

#include <fmt/format.h>
#include <nlohmann/json.hpp>
#include <spdlog/spdlog.h>

#include "censorlens/analytics/lifetimes.hpp"
#include "censorlens/analytics/rates.hpp"
#include "censorlens/analytics/report.hpp"
#include "censorlens/analytics/survival.hpp"
#include "censorlens/app/plots.hpp"
#include "censorlens/app/server.hpp"
#include "censorlens/augment.hpp"
#include "censorlens/corpus.hpp"
#include "censorlens/csv.hpp"
#include "censorlens/error.hpp"
#include "censorlens/imgclf/cam.hpp"
#include "censorlens/imgclf/classifier.hpp"
#include "censorlens/imgclf/gallery.hpp"
#include "censorlens/textclf/sentiment.hpp"

namespace censorlens::app {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

void write_json(const fs::path& path, const json& j) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

json read_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw InvalidArgument("malformed JSON in " + path.string() + ": " + e.what());
  }
}

Timestamp parse_time_flag(const std::string& text, const char* flag) {
  const auto t = parse_iso8601(text);
  if (!t) throw UsageError(fmt::format("{} expects an ISO-8601 UTC timestamp, got '{}'", flag, text));
  return *t;
}

json report_json(const EvalReport& r) {
  return {{"total", r.total},
          {"accuracy", r.accuracy},
          {"macro_precision", r.macro_precision},
          {"macro_recall", r.macro_recall},
          {"macro_f1", r.macro_f1},
          {"micro_f1", r.micro_f1}};
}

struct LoadedCorpus {
  corpus::Corpus corpus;
  json summary;
};

LoadedCorpus load_workspace_corpus(const Workspace& ws) {
  Workspace::require(ws.corpus_file(), "ingest");
  Workspace::require(ws.ingest_summary(), "ingest");
  LoadedCorpus out;
  out.summary = read_json(ws.ingest_summary());
  corpus::LoadOptions opts;
  opts.window_start = parse_iso8601(out.summary.at("window_start").get<std::string>());
  opts.window_end = parse_iso8601(out.summary.at("window_end").get<std::string>());
  auto loaded = corpus::load_posts(ws.corpus_file(), out.summary.at("image_root").get<std::string>(), opts);
  if (!loaded.errors.empty()) {
    throw Error(fmt::format("ingested corpus has {} invalid records; rerun ingest", loaded.errors.size()));
  }
  out.corpus = std::move(loaded.corpus);
  return out;
}

/// Per-post row of classify/decisions.csv.
struct DecisionRow {
  std::string post_id;
  std::string status;
  Category image = Category::Other;
  double image_confidence = 0.0;
  Category text = Category::Other;
  double text_confidence = 0.0;
  double sentiment = textclf::kNeutralSentiment;
  std::vector<Category> categories;
};

const std::vector<std::string> kDecisionHeader{"post_id",         "status",    "image_category", "image_confidence",
                                               "text_category",   "text_confidence", "sentiment",      "categories"};

void write_decisions(const fs::path& path, const std::vector<DecisionRow>& rows) {
  analytics::Table t{kDecisionHeader, {}};
  for (const auto& r : rows) {
    std::string cats;
    for (auto c : r.categories) {
      if (!cats.empty()) cats += ';';
      cats += slug(c);
    }
    t.rows.push_back({r.post_id, r.status, std::string(slug(r.image)), fmt::format("{:.6f}", r.image_confidence),
                      std::string(slug(r.text)), fmt::format("{:.6f}", r.text_confidence),
                      fmt::format("{:.17g}", r.sentiment), cats});
  }
  analytics::write_csv(path, t);
}

std::vector<DecisionRow> read_decisions(const fs::path& path) {
  const auto t = analytics::read_csv_table(path);
  if (t.header != kDecisionHeader) throw InvalidArgument("unexpected columns in " + path.string());
  std::vector<DecisionRow> rows;
  for (const auto& r : t.rows) {
    if (r.size() != kDecisionHeader.size()) throw InvalidArgument("short row in " + path.string());
    DecisionRow d;
    d.post_id = r[0];
    d.status = r[1];
    d.image = category_from_string(r[2]);
    d.image_confidence = std::stod(r[3]);
    d.text = category_from_string(r[4]);
    d.text_confidence = std::stod(r[5]);
    d.sentiment = std::stod(r[6]);
    std::size_t start = 0;
    while (start < r[7].size()) {
      const auto end = std::min(r[7].find(';', start), r[7].size());
      if (end > start) d.categories.push_back(category_from_string(r[7].substr(start, end - start)));
      start = end + 1;
    }
    rows.push_back(std::move(d));
  }
  return rows;
}

std::unique_ptr<textclf::SentimentProvider> make_sentiment(const SentimentOptions& o) {
  std::shared_ptr<const textclf::LexiconSentiment> lexicon;
  if (o.positive && o.negative) {
    lexicon = std::make_shared<textclf::LexiconSentiment>(textclf::LexiconSentiment::from_files(*o.positive, *o.negative));
  }
  if (o.provider == "lexicon") {
    if (!lexicon) throw UsageError("the lexicon sentiment provider needs --lexicon-positive and --lexicon-negative");
    return std::make_unique<textclf::LexiconSentiment>(*lexicon);
  }
  if (o.provider == "http") {
    textclf::HttpSentimentConfig cfg;
    cfg.endpoint = o.endpoint;
    cfg.path = o.path;
    cfg.timeout = std::chrono::milliseconds(o.timeout_ms);
    cfg.retries = o.retries;
    cfg.max_parallel = o.max_parallel;
    if (o.fallback == "error") {
      cfg.on_failure = textclf::FailurePolicy::Error;
    } else if (o.fallback == "lexicon") {
      cfg.on_failure = textclf::FailurePolicy::Lexicon;
      if (!lexicon) throw UsageError("lexicon fallback needs --lexicon-positive and --lexicon-negative");
    } else {
      throw UsageError("--sentiment-fallback must be 'error' or 'lexicon'");
    }
    if (cfg.endpoint.empty()) throw UsageError("the http sentiment provider needs --sentiment-endpoint");
    return std::make_unique<textclf::HttpSentimentClient>(cfg, lexicon);
  }
  throw UsageError("unknown sentiment provider '" + o.provider + "'");
}

std::vector<Category> union_membership(Category image, Category text) {
  std::vector<Category> out;
  if (image != Category::Other) out.push_back(image);
  if (text != Category::Other && text != image) out.push_back(text);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

void cmd_synth(const SynthOptions& o) {
  synth::write_workspace(o.out, o.config, o.sizes);
  spdlog::info("synthetic workspace written to {} ({} posts; window {} .. {})", o.out.string(), o.config.n,
               format_iso8601(o.config.window_start), format_iso8601(o.config.window_end()));
}

void cmd_ingest(const IngestOptions& o) {
  corpus::LoadOptions opts;
  if (o.window_start) opts.window_start = parse_time_flag(*o.window_start, "--window-start");
  if (o.window_end) opts.window_end = parse_time_flag(*o.window_end, "--window-end");
  if (opts.window_start && opts.window_end && *opts.window_end < *opts.window_start) {
    throw UsageError("--window-end precedes --window-start");
  }
  auto result = corpus::load_posts(o.posts, o.images, opts);
  fs::create_directories(o.ws.ingest_dir());
  corpus::write_posts(o.ws.corpus_file(), result.corpus.posts);
  corpus::write_error_report(o.ws.ingest_dir() / "errors.csv", result.errors);

  std::map<std::string, std::size_t> by_status;
  for (const auto& p : result.corpus.posts) ++by_status[std::string(corpus::to_string(corpus::status_of(p)))];
  json summary{{"source", fs::absolute(o.posts).string()},
               {"image_root", fs::absolute(o.images).string()},
               {"window_start", format_iso8601(result.corpus.window_start)},
               {"window_end", format_iso8601(result.corpus.window_end)},
               {"records", result.records},
               {"posts", result.corpus.posts.size()},
               {"errors", result.errors.size()},
               {"missing_images", result.corpus.missing_images.size()},
               {"status_counts", by_status}};
  write_json(o.ws.ingest_summary(), summary);
  spdlog::info("ingested {} posts ({} rejected records, {} missing images)", result.corpus.posts.size(),
               result.errors.size(), result.corpus.missing_images.size());
}

void cmd_augment(const AugmentOptions& o) {
  const auto labeled = imgclf::load_labeled_image_dir(o.input);
  if (labeled.empty()) throw InvalidArgument("no labeled images under " + o.input.string());
  std::vector<augment::Kind> kinds;
  for (const auto& name : o.kinds) {
    const auto k = augment::parse_kind(name);
    if (!k) throw UsageError("unknown augmentation kind '" + name + "'");
    kinds.push_back(*k);
  }
  if (kinds.empty()) kinds.assign(augment::kAllKinds.begin(), augment::kAllKinds.end());

  std::vector<augment::Item> items;
  items.reserve(labeled.size());
  for (const auto& l : labeled) items.push_back({l.image, l.label});

  std::vector<augment::AugmentedItem> out;
  if (o.target) {
    out = augment::augment_to_target_size(items, *o.target, o.seed, kinds);
  } else {
    Rng rng(mix_seed(o.seed));
    std::vector<augment::AugmentationSpec> specs;
    for (auto k : kinds) specs.push_back(augment::sample_spec(k, rng));
    out = augment::augment_dataset(items, specs, o.seed);
  }

  std::vector<imgclf::LabeledImage> written;
  std::vector<std::size_t> serial(labeled.size(), 0);
  written.reserve(out.size());
  for (auto& a : out) {
    const auto& src = labeled[a.source];
    std::string id = src.id;
    if (a.kind) id += fmt::format("_aug{}_{}", ++serial[a.source], augment::to_string(*a.kind));
    written.push_back({std::move(id), std::move(a.image), a.label});
  }
  fs::remove_all(o.output);
  imgclf::write_labeled_image_dir(o.output, written);
  spdlog::info("augmented {} images into {} under {}", labeled.size(), written.size(), o.output.string());
}

void cmd_train_image(const TrainImageOptions& o) {
  if (!(o.threshold > 0.0 && o.threshold <= 1.0)) throw UsageError("--threshold must be in (0, 1]");
  const auto data = imgclf::load_labeled_image_dir(o.train);
  if (data.empty()) throw InvalidArgument("no labeled images under " + o.train.string());
  spdlog::info("training image classifier on {} images", data.size());
  auto result = imgclf::train_image_classifier(data, o.config);
  imgclf::save_checkpoint(o.ws.image_model(), result.model, o.threshold);

  json summary;
  summary["train_size"] = result.split.train.size();
  summary["validation_size"] = result.split.validation.size();
  summary["warnings"] = result.warnings;
  json curve = json::array();
  for (const auto& e : result.curve) {
    curve.push_back({{"epoch", e.epoch}, {"train_loss", e.train_loss}, {"validation_loss", e.validation_loss}});
  }
  summary["curve"] = curve;
  if (o.test) {
    const auto test = imgclf::load_labeled_image_dir(*o.test);
    const auto eval = imgclf::evaluate(result.model, test, o.threshold);
    write_report_csv(o.ws.models_dir(), "image_eval", eval.report);
    summary["test"] = report_json(eval.report);
    std::cout << format_report(eval.report);
  }
  write_json(o.ws.models_dir() / "image_train.json", summary);
}

void cmd_train_text(const TrainTextOptions& o) {
  const auto data = textclf::read_labeled_texts(o.train);
  auto result = textclf::train_text_classifier(data, o.options);
  result.model.save(o.ws.text_model());
  json summary{{"train_size", data.size()},
               {"vocabulary", result.model.vocabulary().size()},
               {"iterations", result.iterations},
               {"gradient_norm", result.gradient_norm},
               {"converged", result.converged},
               {"warnings", result.warnings}};
  if (o.cv_folds) {
    const auto cv = textclf::crossvalidate(data, *o.cv_folds, o.options);
    write_report_csv(o.ws.models_dir(), "text_cv", cv.report);
    summary["cv"] = report_json(cv.report);
    summary["cv"]["k"] = *o.cv_folds;
  }
  if (o.test) {
    const auto test = textclf::read_labeled_texts(*o.test);
    std::vector<Category> truth, predicted;
    for (const auto& t : test) {
      truth.push_back(t.label);
      predicted.push_back(result.model.predict(t.text).argmax());
    }
    const auto report = evaluate_predictions(truth, predicted);
    write_report_csv(o.ws.models_dir(), "text_eval", report);
    summary["test"] = report_json(report);
    std::cout << format_report(report);
  }
  write_json(o.ws.models_dir() / "text_train.json", summary);
}

void cmd_classify(const ClassifyOptions& o) {
  auto loaded = load_workspace_corpus(o.ws);
  const auto& posts = loaded.corpus.posts;
  std::vector<DecisionRow> rows(posts.size());
  std::vector<review::ReviewItem> items;
  json summary;

  if (o.oracle) {
    const auto truth = synth::read_truth_csv(*o.oracle);
    const auto oracle = synth::oracle_classifier(truth);
    const auto sentiment = o.sentiment.provider == "oracle" ? nullptr : make_sentiment(o.sentiment);
    for (std::size_t i = 0; i < posts.size(); ++i) {
      const auto& p = posts[i];
      auto& r = rows[i];
      r.post_id = p.id;
      const auto im = oracle.image.find(p.id);
      const auto tx = oracle.text.find(p.id);
      if (im == oracle.image.end() || tx == oracle.text.end()) {
        throw InvalidArgument("post " + p.id + " is missing from the ground truth");
      }
      r.image = im->second;
      r.text = tx->second;
      r.image_confidence = r.text_confidence = 1.0;
      r.sentiment = sentiment ? sentiment->score(p.text) : oracle.sentiment.at(p.id);
    }
    summary["mode"] = "oracle";
  } else {
    if (o.sentiment.provider == "oracle") throw UsageError("--sentiment oracle requires --oracle");
    Workspace::require(o.ws.image_model(), "train-image");
    Workspace::require(o.ws.text_model(), "train-text");
    const auto checkpoint = imgclf::load_checkpoint(o.ws.image_model());
    const auto text_model = textclf::TextModel::load(o.ws.text_model());
    const double threshold = o.threshold.value_or(checkpoint.threshold);
    if (!(threshold > 0.0 && threshold <= 1.0)) throw UsageError("--threshold must be in (0, 1]");
    const auto sentiment = make_sentiment(o.sentiment);
    std::size_t missing = 0;
    for (std::size_t i = 0; i < posts.size(); ++i) {
      const auto& p = posts[i];
      auto& r = rows[i];
      r.post_id = p.id;
      // Per post: the most confident topic decision among its images.
      std::optional<fs::path> topic_path, first_path;
      double best_topic = -1.0;
      double best_any = 0.0;
      for (const auto& ref : p.image_refs) {
        const auto it = loaded.corpus.image_store.find(ref);
        if (it == loaded.corpus.image_store.end()) {
          ++missing;
          continue;
        }
        const auto scores = imgclf::predict(checkpoint.model, load_image(it->second));
        const auto decided = decide(scores, threshold);
        if (!first_path) first_path = it->second;
        best_any = std::max(best_any, scores.max());
        if (decided != Category::Other && scores.max() > best_topic) {
          best_topic = scores.max();
          r.image = decided;
          topic_path = it->second;
        }
      }
      r.image_confidence = best_topic >= 0.0 ? best_topic : best_any;
      const auto best_path = topic_path ? topic_path : first_path;
      if (!p.text.empty()) {
        const auto scores = text_model.predict(p.text);
        r.text = scores.argmax();
        r.text_confidence = scores.max();
      }
      r.sentiment = sentiment->score(p.text);
      if (best_path) {
        review::ReviewItem item;
        item.id = p.id;
        item.image_path = fs::absolute(*best_path).string();
        if (!p.text.empty()) item.text = p.text;
        item.decision = r.image;
        item.confidence = r.image_confidence;
        items.push_back(std::move(item));
      }
    }
    if (missing > 0) spdlog::warn("{} referenced images were missing and skipped", missing);
    summary["mode"] = "models";
    summary["threshold"] = threshold;
  }

  std::map<std::string, std::size_t> per_category;
  for (std::size_t i = 0; i < posts.size(); ++i) {
    auto& r = rows[i];
    r.status = std::string(corpus::to_string(corpus::status_of(posts[i])));
    r.categories = union_membership(r.image, r.text);
    for (auto c : r.categories) ++per_category[std::string(slug(c))];
  }
  fs::create_directories(o.ws.classify_dir());
  write_decisions(o.ws.decisions_file(), rows);
  review::write_items(o.ws.classify_items(), items);
  summary["posts"] = posts.size();
  summary["membership"] = per_category;
  write_json(o.ws.classify_dir() / "summary.json", summary);
  spdlog::info("classified {} posts", posts.size());
}

void cmd_localize(const LocalizeOptions& o) {
  Workspace::require(o.ws.classify_items(), "classify");
  Workspace::require(o.ws.image_model(), "train-image");
  const auto checkpoint = imgclf::load_checkpoint(o.ws.image_model());
  auto items = review::read_items(o.ws.classify_items());

  std::vector<const review::ReviewItem*> topical;
  for (const auto& item : items) {
    if (item.decision != Category::Other && item.image_path) topical.push_back(&item);
  }
  std::stable_sort(topical.begin(), topical.end(),
                   [](const auto* a, const auto* b) { return a->confidence > b->confidence; });
  if (o.limit > 0 && topical.size() > o.limit) topical.resize(o.limit);

  std::vector<imgclf::GalleryItem> gallery;
  gallery.reserve(topical.size());
  for (const auto* item : topical) {
    auto image = load_image(*item->image_path);
    auto scores = imgclf::predict(checkpoint.model, image);
    gallery.push_back({item->id, std::move(image), item->decision, scores});
  }
  const auto dir = o.ws.localize_dir() / "gallery";
  fs::remove_all(dir);
  imgclf::export_cam_gallery(checkpoint.model, gallery, dir);

  std::set<std::string> with_cam;
  for (const auto* item : topical) with_cam.insert(item->id);
  for (auto& item : items) {
    if (with_cam.contains(item.id)) item.cam_path = fs::absolute(dir / (item.id + "_overlay.png")).string();
  }
  review::write_items(o.ws.localize_items(), items);
  spdlog::info("wrote CAM gallery for {} items to {}", gallery.size(), dir.string());
}

void cmd_analyze(const AnalyzeOptions& o) {
  Workspace::require(o.ws.decisions_file(), "classify");
  auto loaded = load_workspace_corpus(o.ws);
  auto& corpus = loaded.corpus;
  const auto rows = read_decisions(o.ws.decisions_file());
  const Timestamp window_end = o.window_end ? parse_time_flag(*o.window_end, "--window-end") : corpus.window_end;
  if (!(o.bucket_hours > 0.0)) throw UsageError("--bucket-hours must be positive");

  std::unordered_map<std::string_view, const corpus::Post*> by_id;
  for (const auto& p : corpus.posts) by_id.emplace(p.id, &p);

  std::map<std::string, Category> image_decisions, text_decisions;
  std::map<std::string, double> sentiment;
  analytics::MembershipMap membership;
  for (auto c : topic_categories()) membership[c];
  for (const auto& r : rows) {
    const auto it = by_id.find(r.post_id);
    if (it == by_id.end()) throw InvalidArgument("classify output names unknown post " + r.post_id + "; rerun classify");
    image_decisions[r.post_id] = r.image;
    text_decisions[r.post_id] = r.text;
    sentiment[r.post_id] = r.sentiment;
    const auto status = corpus::status_of(*it->second);
    for (auto c : r.categories) {
      if (status == corpus::CensorshipStatus::Censored) membership[c].censored.push_back(r.post_id);
      if (status == corpus::CensorshipStatus::Live) membership[c].uncensored.push_back(r.post_id);
    }
  }

  const auto dir = o.ws.analysis_dir();
  fs::remove_all(dir);
  fs::create_directories(dir / "survival");
  fs::create_directories(dir / "plots");
  std::vector<std::string> notes;

  const auto rates = analytics::censorship_rate(membership);
  notes.insert(notes.end(), rates.notes.begin(), rates.notes.end());
  const auto checks = analytics::check_published_rates();
  const auto lifetimes = analytics::lifetime_summary(analytics::censored_lifetimes(corpus, membership));
  notes.insert(notes.end(), lifetimes.notes.begin(), lifetimes.notes.end());
  const auto bucket = std::chrono::seconds(static_cast<std::int64_t>(o.bucket_hours * 3600.0));
  const auto creation = analytics::creation_time_distribution(corpus, membership, bucket);

  analytics::SurvivalOptions sopts;
  sopts.max_followup_minutes = o.max_followup_minutes;
  sopts.log1p_counts = o.log1p_counts;
  std::map<Category, analytics::CoxFit> fits;
  std::vector<analytics::SurvivalRecord> pooled;
  analytics::Table estimates{{"category", "covariate", "beta", "se", "z", "p", "n", "events", "converged", "diagnostic"},
                             {}};
  auto add_estimates = [&](const std::string& label, const analytics::CoxFit& fit) {
    for (const auto& t : fit.terms) {
      std::vector<std::string> row{label, t.name};
      if (t.estimate) {
        for (double v : {t.estimate->beta, t.estimate->se, t.estimate->z, t.estimate->p}) {
          row.push_back(fmt::format("{:.17g}", v));
        }
      } else {
        row.insert(row.end(), {"", "", "", ""});
      }
      row.insert(row.end(), {std::to_string(fit.n), std::to_string(fit.events), fit.converged ? "1" : "0", t.diagnostic});
      estimates.rows.push_back(std::move(row));
    }
  };
  for (auto c : topic_categories()) {
    auto built = analytics::build_survival_records(corpus, c, image_decisions, text_decisions, sentiment, window_end,
                                                   sopts);
    notes.insert(notes.end(), built.warnings.begin(), built.warnings.end());
    analytics::write_survival_records(dir / "survival" / (std::string(slug(c)) + ".csv"), built.records);
    if (built.records.empty()) continue;
    try {
      auto fit = analytics::fit_cox(built.records, o.cox);
      for (const auto& w : fit.warnings) notes.push_back(fmt::format("{}: {}", display_name(c), w));
      add_estimates(std::string(slug(c)), fit);
      fits.emplace(c, std::move(fit));
    } catch (const InvalidArgument& e) {
      notes.push_back(fmt::format("{}: survival fit skipped ({})", display_name(c), e.what()));
    }
    pooled.insert(pooled.end(), std::make_move_iterator(built.records.begin()),
                  std::make_move_iterator(built.records.end()));
  }

  json summary;
  if (!pooled.empty()) {
    try {
      const auto fit = analytics::fit_cox(pooled, o.cox);
      add_estimates("pooled", fit);
      json terms = json::object();
      for (const auto& t : fit.terms) {
        if (t.estimate) {
          terms[t.name] = {{"beta", t.estimate->beta}, {"se", t.estimate->se}, {"p", t.estimate->p}};
        } else {
          terms[t.name] = {{"diagnostic", t.diagnostic}};
        }
      }
      summary["pooled"] = {{"n", fit.n}, {"events", fit.events}, {"converged", fit.converged}, {"terms", terms}};
    } catch (const InvalidArgument& e) {
      notes.push_back(fmt::format("pooled survival fit skipped ({})", e.what()));
    }
  }

  std::size_t short_median = 0;
  for (const auto& r : lifetimes.rows) short_median += r.median < 180.0 ? 1 : 0;
  notes.push_back(fmt::format("median censored lifetime below 180 minutes in {} of {} categories", short_median,
                              lifetimes.rows.size()));
  for (const auto& c : checks) {
    if (!c.consistent) {
      notes.push_back(fmt::format("reference row {} ({} / {}) prints {}% but computes to {:.1f}%; unreconciled",
                                  display_name(c.published.category), c.published.n_censored,
                                  c.published.n_uncensored, c.published.printed_percent, c.computed_percent));
    }
  }

  const auto rate_t = analytics::rate_table(rates);
  const auto check_t = analytics::published_rate_check_table(checks);
  const auto life_t = analytics::lifetime_table(lifetimes);
  analytics::write_csv(dir / "rates.csv", rate_t);
  analytics::write_csv(dir / "reference_rates.csv", check_t);
  analytics::write_csv(dir / "lifetimes.csv", life_t);
  analytics::write_csv(dir / "creation_times.csv", analytics::creation_time_table(creation));
  analytics::write_csv(dir / "cox_estimates.csv", estimates);
  std::ostringstream report;
  report << "Censorship rate per category\n\n" << analytics::render_text(rate_t) << '\n';
  report << "Reference rate rows\n\n" << analytics::render_text(check_t) << '\n';
  report << "Lifetime of censored posts (minutes)\n\n" << analytics::render_text(life_t) << '\n';
  if (!fits.empty()) {
    const auto wald_t = analytics::wald_table(fits);
    analytics::write_csv(dir / "cox_wald.csv", wald_t);
    report << "Survival regression per category (coefficient, p)\n\n" << analytics::render_text(wald_t) << '\n';
  }
  report << "Notes\n\n";
  for (const auto& n : notes) report << "- " << n << '\n';
  std::ofstream(dir / "report.txt") << report.str();

  write_rate_chart(dir / "plots" / "rates.svg", rates);
  write_lifetime_chart(dir / "plots" / "lifetimes.svg", lifetimes);
  write_creation_time_chart(dir / "plots" / "creation_times.svg", creation);

  summary["window_end"] = format_iso8601(window_end);
  summary["categories_fitted"] = fits.size();
  summary["notes"] = notes;
  write_json(dir / "summary.json", summary);
  spdlog::info("analysis written to {}", dir.string());
}

void cmd_report(const ReportOptions& o) {
  const auto file = o.ws.analysis_dir() / "report.txt";
  Workspace::require(file, "analyze");
  std::ifstream in(file);
  std::stringstream text;
  text << in.rdbuf();
  if (text.str().empty()) throw MissingDependency("analyze", file);
  std::cout << text.str();
  if (o.out) {
    if (o.out->has_parent_path()) fs::create_directories(o.out->parent_path());
    std::ofstream(*o.out) << text.str();
  }
}

void cmd_serve(const ServeOptions& o) {
  auto items_path = o.ws.localize_items();
  if (!fs::exists(items_path)) {
    Workspace::require(o.ws.classify_items(), "classify");
    items_path = o.ws.classify_items();
  }
  review::ReviewStore store(review::read_items(items_path), o.ws.review_dir() / "decisions.jsonl");
  httplib::Server server;
  ServerOptions so;
  so.default_order = o.order;
  so.export_dir = o.ws.review_dir();
  register_review_routes(server, store, so);
  spdlog::info("review API on http://{}:{} ({} items from {})", o.host, o.port, store.ids().size(),
               items_path.string());
  if (!server.listen(o.host, o.port)) throw Error(fmt::format("cannot listen on {}:{}", o.host, o.port));
}

}  // namespace censorlens::app
