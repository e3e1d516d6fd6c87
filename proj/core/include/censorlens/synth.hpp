#pragma once

#include <array>
#include <chrono>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "censorlens/analytics/survival.hpp"
#include "censorlens/category.hpp"
#include "censorlens/corpus.hpp"
#include "censorlens/image.hpp"
#include "censorlens/imgclf/dataset.hpp"
#include "censorlens/random.hpp"
#include "censorlens/textclf/model.hpp"

namespace censorlens::synth {

/// Pseudo-word pools. Keyword pools, filler and the two lexicons are
/// pairwise disjoint.
struct Vocabulary {
  std::array<std::vector<std::string>, kNumTopics> keywords;
  std::vector<std::string> filler;
  std::vector<std::string> positive;
  std::vector<std::string> negative;

  const std::vector<std::string>& keywords_of(Category topic) const;
};

Vocabulary make_vocabulary(std::uint64_t seed, std::size_t keywords_per_category = 8, std::size_t filler = 120,
                           std::size_t lexicon = 16);

enum class Shape { Square, Circle, Cross };

struct Motif {
  std::array<std::uint8_t, 3> color{};
  Shape shape = Shape::Square;
};

/// Topics map to distinct (color, shape) pairs. Throws InvalidArgument for Other.
Motif motif_of(Category topic);

/// A topic renders its motif on a dark noise background; Other renders
/// either plain noise or a gray shape.
Image render_image(Category category, int side, Rng& rng);

struct TextCounts {
  std::size_t keywords_min = 2;
  std::size_t keywords_max = 5;
  std::size_t filler_min = 4;
  std::size_t filler_max = 10;
  /// Positive and negative lexicon hits are each uniform on [0, max].
  std::size_t lexicon_max = 4;
};

struct GeneratedText {
  std::string text;
  std::size_t positive_hits = 0;
  std::size_t negative_hits = 0;
};

/// Topic text when `topic` is set, filler-only text otherwise.
GeneratedText render_text(const Vocabulary& vocab, std::optional<Category> topic, const TextCounts& counts, Rng& rng);

struct GeneratorConfig {
  std::size_t n = 5000;
  std::uint64_t seed = 0;
  /// Pools are shared between corpora so trained models transfer.
  std::uint64_t vocabulary_seed = 20150101;
  /// Events per minute.
  double baseline_hazard = 1.0 / 120.0;
  /// Follow-up horizon in minutes.
  double horizon_minutes = 720.0;
  /// Indexed by analytics::Covariate.
  std::array<double, analytics::kNumCovariates> beta{0.0, 0.0, 0.0, 0.0, -0.3};
  Timestamp window_start = Timestamp{std::chrono::sys_days{std::chrono::year{2015} / 1 / 1}};
  std::chrono::seconds creation_span{std::chrono::hours{24 * 30}};
  /// Chance that a topic post shows its category in each modality. At least
  /// one modality always matches.
  double image_match_rate = 0.7;
  double text_match_rate = 0.7;
  double repost_mean = 5.0;
  double comment_mean = 3.0;
  /// Chance that a post surviving the horizon is later removed by its author.
  double voluntary_deletion_rate = 0.0;
  TextCounts text;
  int image_side = 32;
  bool render_images = true;

  /// Throws InvalidArgument on an unusable configuration.
  void validate() const;
  /// window_start + creation_span + horizon.
  Timestamp window_end() const;
};

struct TruthRow {
  std::string post_id;
  Category category = Category::Other;
  bool image_match = false;
  bool text_match = false;
  std::int64_t reposts = 0;
  std::int64_t comments = 0;
  double sentiment = 2.0;
  /// Planted event time in minutes (may exceed the horizon).
  double survival_minutes = 0.0;
  corpus::CensorshipStatus status = corpus::CensorshipStatus::Live;
};

struct GeneratedCorpus {
  corpus::Corpus corpus;
  std::vector<TruthRow> truth;
  Vocabulary vocabulary;
  /// Keyed by image id; empty when rendering is disabled.
  std::map<std::string, Image> images;
};

/// Deterministic for a fixed config; post i draws from derive_seed(seed, i).
GeneratedCorpus generate_corpus(const GeneratorConfig& config);

/// Per-post modality decisions of a perfect classifier. A modality that
/// does not show the planted topic is labeled Other.
struct OracleDecisions {
  std::map<std::string, Category> image;
  std::map<std::string, Category> text;
  std::map<std::string, double> sentiment;
};

OracleDecisions oracle_classifier(const std::vector<TruthRow>& truth);

/// First topic whose keyword occurs in the text, else Other.
Category keyword_lookup(const Vocabulary& vocab, std::string_view text);

std::vector<imgclf::LabeledImage> generate_labeled_images(std::size_t per_category, int side, std::uint64_t seed);
std::vector<textclf::LabeledText> generate_labeled_texts(const Vocabulary& vocab, std::size_t per_category,
                                                         const TextCounts& counts, std::uint64_t seed);

void write_truth_csv(const std::filesystem::path& path, const std::vector<TruthRow>& truth);
std::vector<TruthRow> read_truth_csv(const std::filesystem::path& path);

/// One term per line.
void write_lexicons(const std::filesystem::path& positive, const std::filesystem::path& negative,
                    const Vocabulary& vocab);
/// JSON object from category slug to its keyword list.
void write_keywords(const std::filesystem::path& path, const Vocabulary& vocab);

struct DatasetSizes {
  std::size_t train_images_per_category = 40;
  std::size_t test_images_per_category = 15;
  std::size_t train_texts_per_category = 40;
  std::size_t test_texts_per_category = 15;
};

/// Writes a complete synthetic workspace under `dir`:
///   posts.jsonl, images/<id>.png, ground_truth.csv, lexicon/{positive,negative}.txt,
///   keywords.json, images_train/, images_test/, texts_train.csv, texts_test.csv
void write_workspace(const std::filesystem::path& dir, const GeneratorConfig& config, const DatasetSizes& sizes);

}  // namespace censorlens::synth
