#include "censorlens/synth.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <unordered_set>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "censorlens/csv.hpp"
#include "censorlens/error.hpp"
#include "censorlens/textclf/sentiment.hpp"

namespace censorlens::synth {
namespace {

constexpr std::string_view kOnsets = "bdfgklmnprstvz";
constexpr std::string_view kVowels = "aeiou";

std::string pseudo_word(Rng& rng) {
  std::uniform_int_distribution<int> syllables(2, 3);
  std::uniform_int_distribution<std::size_t> onset(0, kOnsets.size() - 1);
  std::uniform_int_distribution<std::size_t> vowel(0, kVowels.size() - 1);
  std::string w;
  const int n = syllables(rng);
  for (int i = 0; i < n; ++i) {
    w += kOnsets[onset(rng)];
    w += kVowels[vowel(rng)];
  }
  return w;
}

template <class T>
const T& pick(const std::vector<T>& pool, Rng& rng) {
  std::uniform_int_distribution<std::size_t> d(0, pool.size() - 1);
  return pool[d(rng)];
}

constexpr std::array<std::array<std::uint8_t, 3>, 5> kColors{{
    {220, 40, 40},
    {40, 200, 60},
    {50, 90, 235},
    {235, 215, 40},
    {210, 50, 210},
}};

bool inside(Shape shape, double dx, double dy, double half) {
  switch (shape) {
    case Shape::Square:
      return std::abs(dx) <= half && std::abs(dy) <= half;
    case Shape::Circle:
      return dx * dx + dy * dy <= half * half;
    case Shape::Cross: {
      const double arm = half * 0.38;
      return (std::abs(dx) <= half && std::abs(dy) <= arm) || (std::abs(dy) <= half && std::abs(dx) <= arm);
    }
  }
  return false;
}

void draw_shape(Image& img, Shape shape, std::array<int, 3> color, Rng& rng) {
  const int side = img.height();
  std::uniform_real_distribution<double> size(0.30, 0.42);
  const double half = size(rng) * side;
  std::uniform_real_distribution<double> center(half, side - half);
  const double cx = center(rng);
  const double cy = center(rng);
  for (int y = 0; y < side; ++y) {
    for (int x = 0; x < side; ++x) {
      if (!inside(shape, x + 0.5 - cx, y + 0.5 - cy, half)) continue;
      for (int c = 0; c < 3; ++c) img.at(y, x, c) = static_cast<std::uint8_t>(std::clamp(color[c], 0, 255));
    }
  }
}

Image noise_background(int side, Rng& rng) {
  Image img(side, side);
  std::uniform_int_distribution<int> level(0, 70);
  for (auto& v : img.data()) v = static_cast<std::uint8_t>(level(rng));
  return img;
}

std::string join_words(const std::vector<std::string>& words) {
  std::string out;
  for (const auto& w : words) {
    if (!out.empty()) out += ' ';
    out += w;
  }
  return out;
}

}  // namespace

const std::vector<std::string>& Vocabulary::keywords_of(Category topic) const {
  if (topic == Category::Other) throw InvalidArgument("Other has no keyword pool");
  return keywords[index_of(topic)];
}

Vocabulary make_vocabulary(std::uint64_t seed, std::size_t keywords_per_category, std::size_t filler,
                           std::size_t lexicon) {
  if (keywords_per_category == 0 || filler == 0 || lexicon == 0) throw InvalidArgument("vocabulary pools must be non-empty");
  Rng rng(mix_seed(seed));
  std::unordered_set<std::string> used;
  auto fresh = [&](std::size_t count) {
    std::vector<std::string> out;
    while (out.size() < count) {
      auto w = pseudo_word(rng);
      if (used.insert(w).second) out.push_back(std::move(w));
    }
    return out;
  };
  Vocabulary v;
  for (auto& pool : v.keywords) pool = fresh(keywords_per_category);
  v.filler = fresh(filler);
  v.positive = fresh(lexicon);
  v.negative = fresh(lexicon);
  return v;
}

Motif motif_of(Category topic) {
  if (topic == Category::Other) throw InvalidArgument("Other has no motif");
  const auto i = index_of(topic);
  return {kColors[i % kColors.size()], static_cast<Shape>(i / kColors.size())};
}

Image render_image(Category category, int side, Rng& rng) {
  if (side < 8) throw InvalidArgument("image side must be at least 8");
  Image img = noise_background(side, rng);
  if (category == Category::Other) {
    std::bernoulli_distribution distractor(0.5);
    if (distractor(rng)) {
      std::uniform_int_distribution<int> gray(110, 190);
      std::uniform_int_distribution<int> shape(0, 2);
      const int g = gray(rng);
      draw_shape(img, static_cast<Shape>(shape(rng)), {g, g, g}, rng);
    }
    return img;
  }
  const auto motif = motif_of(category);
  std::uniform_int_distribution<int> jitter(-20, 20);
  std::array<int, 3> color{};
  for (int c = 0; c < 3; ++c) color[c] = motif.color[c] + jitter(rng);
  draw_shape(img, motif.shape, color, rng);
  return img;
}

GeneratedText render_text(const Vocabulary& vocab, std::optional<Category> topic, const TextCounts& counts, Rng& rng) {
  std::vector<std::string> words;
  std::uniform_int_distribution<std::size_t> n_filler(counts.filler_min, counts.filler_max);
  const auto nf = n_filler(rng);
  for (std::size_t i = 0; i < nf; ++i) words.push_back(pick(vocab.filler, rng));
  if (topic && *topic != Category::Other) {
    std::uniform_int_distribution<std::size_t> n_kw(counts.keywords_min, counts.keywords_max);
    const auto nk = n_kw(rng);
    for (std::size_t i = 0; i < nk; ++i) words.push_back(pick(vocab.keywords_of(*topic), rng));
  }
  GeneratedText out;
  std::uniform_int_distribution<std::size_t> hits(0, counts.lexicon_max);
  out.positive_hits = hits(rng);
  out.negative_hits = hits(rng);
  for (std::size_t i = 0; i < out.positive_hits; ++i) words.push_back(pick(vocab.positive, rng));
  for (std::size_t i = 0; i < out.negative_hits; ++i) words.push_back(pick(vocab.negative, rng));
  std::shuffle(words.begin(), words.end(), rng);
  out.text = join_words(words);
  return out;
}

void GeneratorConfig::validate() const {
  if (n == 0) throw InvalidArgument("corpus size must be positive");
  if (!(baseline_hazard > 0.0) || !std::isfinite(baseline_hazard)) throw InvalidArgument("baseline hazard must be > 0");
  if (!(horizon_minutes > 0.0) || !std::isfinite(horizon_minutes)) throw InvalidArgument("horizon must be > 0");
  for (double b : beta) {
    if (!std::isfinite(b)) throw InvalidArgument("coefficients must be finite");
  }
  auto prob = [](double p, const char* name) {
    if (!(p >= 0.0 && p <= 1.0)) throw InvalidArgument(fmt::format("{} must be in [0, 1]", name));
  };
  prob(image_match_rate, "image_match_rate");
  prob(text_match_rate, "text_match_rate");
  prob(voluntary_deletion_rate, "voluntary_deletion_rate");
  if (repost_mean < 0.0 || comment_mean < 0.0) throw InvalidArgument("count means must be >= 0");
  if (creation_span.count() <= 0) throw InvalidArgument("creation span must be positive");
  if (text.keywords_min == 0 || text.keywords_min > text.keywords_max || text.filler_min > text.filler_max ||
      text.filler_min == 0) {
    throw InvalidArgument("text count ranges are inconsistent");
  }
  if (image_side < 8) throw InvalidArgument("image side must be at least 8");
}

Timestamp GeneratorConfig::window_end() const {
  const auto horizon = std::chrono::seconds(static_cast<std::int64_t>(std::ceil(horizon_minutes * 60.0)));
  return window_start + creation_span + horizon;
}

GeneratedCorpus generate_corpus(const GeneratorConfig& config) {
  config.validate();
  GeneratedCorpus out;
  out.vocabulary = make_vocabulary(config.vocabulary_seed);
  out.corpus.window_start = config.window_start;
  out.corpus.window_end = config.window_end();
  out.corpus.posts.reserve(config.n);
  out.truth.reserve(config.n);

  for (std::size_t i = 0; i < config.n; ++i) {
    Rng rng(derive_seed(config.seed, i));
    TruthRow t;
    t.post_id = fmt::format("p{:06d}", i);
    std::uniform_int_distribution<std::size_t> cat(0, kNumCategories - 1);
    t.category = category_at(cat(rng));
    if (t.category != Category::Other) {
      std::bernoulli_distribution im(config.image_match_rate);
      std::bernoulli_distribution tm(config.text_match_rate);
      t.image_match = im(rng);
      t.text_match = tm(rng);
      if (!t.image_match && !t.text_match) {
        std::bernoulli_distribution coin(0.5);
        (coin(rng) ? t.image_match : t.text_match) = true;
      }
    }
    std::poisson_distribution<std::int64_t> reposts(config.repost_mean > 0 ? config.repost_mean : 1e-12);
    std::poisson_distribution<std::int64_t> comments(config.comment_mean > 0 ? config.comment_mean : 1e-12);
    t.reposts = reposts(rng);
    t.comments = comments(rng);

    const auto text = render_text(out.vocabulary, t.text_match ? std::optional(t.category) : std::nullopt,
                                  config.text, rng);
    t.sentiment = textclf::lexicon_score(text.positive_hits, text.negative_hits);

    const std::array<double, analytics::kNumCovariates> x{t.image_match ? 1.0 : 0.0, t.text_match ? 1.0 : 0.0,
                                                          static_cast<double>(t.reposts),
                                                          static_cast<double>(t.comments), t.sentiment};
    double eta = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) eta += x[k] * config.beta[k];
    std::exponential_distribution<double> survival(config.baseline_hazard * std::exp(eta));
    t.survival_minutes = survival(rng);

    std::uniform_int_distribution<std::int64_t> offset(0, config.creation_span.count());
    corpus::Post post;
    post.id = t.post_id;
    post.user_id = fmt::format("u{:04d}", std::uniform_int_distribution<int>(0, 999)(rng));
    post.text = text.text;
    post.created_at = config.window_start + std::chrono::seconds(offset(rng));
    post.repost_count = t.reposts;
    post.comment_count = t.comments;
    const std::string image_id = "img_" + t.post_id;
    post.image_refs.push_back(image_id);
    const Category shown = t.image_match ? t.category : Category::Other;
    Image image = render_image(shown, config.image_side, rng);
    if (config.render_images) out.images.emplace(image_id, std::move(image));

    std::bernoulli_distribution voluntary(config.voluntary_deletion_rate);
    const bool removed_by_author = voluntary(rng);
    if (t.survival_minutes <= config.horizon_minutes) {
      const auto secs = std::max<std::int64_t>(1, std::llround(t.survival_minutes * 60.0));
      post.deleted_at = post.created_at + std::chrono::seconds(secs);
      post.deletion_message = "permission denied";
      t.status = corpus::CensorshipStatus::Censored;
    } else if (removed_by_author) {
      std::uniform_real_distribution<double> when(0.0, config.horizon_minutes);
      const auto secs = std::max<std::int64_t>(1, std::llround(when(rng) * 60.0));
      post.deleted_at = post.created_at + std::chrono::seconds(secs);
      post.deletion_message = "weibo does not exist";
      t.status = corpus::CensorshipStatus::VoluntaryOrUnknown;
    }
    out.corpus.posts.push_back(std::move(post));
    out.truth.push_back(std::move(t));
  }
  return out;
}

OracleDecisions oracle_classifier(const std::vector<TruthRow>& truth) {
  OracleDecisions d;
  for (const auto& t : truth) {
    d.image[t.post_id] = t.image_match ? t.category : Category::Other;
    d.text[t.post_id] = t.text_match ? t.category : Category::Other;
    d.sentiment[t.post_id] = t.sentiment;
  }
  return d;
}

Category keyword_lookup(const Vocabulary& vocab, std::string_view text) {
  std::unordered_set<std::string_view> words;
  std::size_t start = 0;
  while (start < text.size()) {
    const auto end = std::min(text.find(' ', start), text.size());
    if (end > start) words.insert(text.substr(start, end - start));
    start = end + 1;
  }
  for (auto topic : topic_categories()) {
    for (const auto& kw : vocab.keywords_of(topic)) {
      if (words.contains(kw)) return topic;
    }
  }
  return Category::Other;
}

std::vector<imgclf::LabeledImage> generate_labeled_images(std::size_t per_category, int side, std::uint64_t seed) {
  std::vector<imgclf::LabeledImage> out;
  out.reserve(per_category * kNumCategories);
  for (auto c : all_categories()) {
    for (std::size_t i = 0; i < per_category; ++i) {
      Rng rng(derive_seed(seed, index_of(c) * 1'000'003ULL + i));
      out.push_back({fmt::format("{}_{:05d}", slug(c), i), render_image(c, side, rng), c});
    }
  }
  return out;
}

std::vector<textclf::LabeledText> generate_labeled_texts(const Vocabulary& vocab, std::size_t per_category,
                                                         const TextCounts& counts, std::uint64_t seed) {
  std::vector<textclf::LabeledText> out;
  out.reserve(per_category * kNumCategories);
  for (auto c : all_categories()) {
    for (std::size_t i = 0; i < per_category; ++i) {
      Rng rng(derive_seed(seed, index_of(c) * 1'000'003ULL + i));
      const auto t = render_text(vocab, c == Category::Other ? std::nullopt : std::optional(c), counts, rng);
      out.push_back({t.text, c});
    }
  }
  return out;
}

void write_truth_csv(const std::filesystem::path& path, const std::vector<TruthRow>& truth) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << "post_id,category,image_match,text_match,reposts,comments,sentiment,survival_minutes,status\n";
  for (const auto& t : truth) {
    out << csv::join({t.post_id, std::string(slug(t.category)), t.image_match ? "1" : "0", t.text_match ? "1" : "0",
                      std::to_string(t.reposts), std::to_string(t.comments), fmt::format("{:.17g}", t.sentiment),
                      fmt::format("{:.17g}", t.survival_minutes), std::string(corpus::to_string(t.status))})
        << '\n';
  }
}

std::vector<TruthRow> read_truth_csv(const std::filesystem::path& path) {
  const auto rows = csv::read_file(path);
  if (rows.empty()) throw InvalidArgument("ground truth file is empty: " + path.string());
  std::vector<TruthRow> out;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& r = rows[i];
    if (r.size() != 9) throw InvalidArgument(fmt::format("{}: row {} has {} columns", path.string(), i + 1, r.size()));
    TruthRow t;
    t.post_id = r[0];
    t.category = category_from_string(r[1]);
    t.image_match = r[2] == "1";
    t.text_match = r[3] == "1";
    t.reposts = std::stoll(r[4]);
    t.comments = std::stoll(r[5]);
    t.sentiment = std::stod(r[6]);
    t.survival_minutes = std::stod(r[7]);
    if (r[8] == corpus::to_string(corpus::CensorshipStatus::Censored)) {
      t.status = corpus::CensorshipStatus::Censored;
    } else if (r[8] == corpus::to_string(corpus::CensorshipStatus::VoluntaryOrUnknown)) {
      t.status = corpus::CensorshipStatus::VoluntaryOrUnknown;
    } else {
      t.status = corpus::CensorshipStatus::Live;
    }
    out.push_back(std::move(t));
  }
  return out;
}

void write_lexicons(const std::filesystem::path& positive, const std::filesystem::path& negative,
                    const Vocabulary& vocab) {
  auto dump = [](const std::filesystem::path& path, const std::vector<std::string>& terms) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path.string());
    for (const auto& t : terms) out << t << '\n';
  };
  dump(positive, vocab.positive);
  dump(negative, vocab.negative);
}

void write_keywords(const std::filesystem::path& path, const Vocabulary& vocab) {
  nlohmann::json j = nlohmann::json::object();
  for (auto topic : topic_categories()) j[std::string(slug(topic))] = vocab.keywords_of(topic);
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

void write_workspace(const std::filesystem::path& dir, const GeneratorConfig& config, const DatasetSizes& sizes) {
  namespace fs = std::filesystem;
  fs::create_directories(dir / "images");
  auto generated = generate_corpus(config);
  corpus::write_posts(dir / "posts.jsonl", generated.corpus.posts);
  for (const auto& [id, img] : generated.images) save_image(dir / "images" / (id + ".png"), img);
  write_truth_csv(dir / "ground_truth.csv", generated.truth);
  write_lexicons(dir / "lexicon" / "positive.txt", dir / "lexicon" / "negative.txt", generated.vocabulary);
  write_keywords(dir / "keywords.json", generated.vocabulary);

  // Training and test sets use seeds disjoint from the corpus stream.
  const std::uint64_t base = mix_seed(config.seed ^ 0x5EEDULL);
  for (const auto* name : {"images_train", "images_test"}) fs::remove_all(dir / name);
  imgclf::write_labeled_image_dir(
      dir / "images_train", generate_labeled_images(sizes.train_images_per_category, config.image_side, base + 1));
  imgclf::write_labeled_image_dir(
      dir / "images_test", generate_labeled_images(sizes.test_images_per_category, config.image_side, base + 2));
  const auto train_texts =
      generate_labeled_texts(generated.vocabulary, sizes.train_texts_per_category, config.text, base + 3);
  const auto test_texts =
      generate_labeled_texts(generated.vocabulary, sizes.test_texts_per_category, config.text, base + 4);
  textclf::write_labeled_texts(dir / "texts_train.csv", train_texts);
  textclf::write_labeled_texts(dir / "texts_test.csv", test_texts);

  nlohmann::json meta;
  meta["n"] = config.n;
  meta["seed"] = config.seed;
  meta["baseline_hazard"] = config.baseline_hazard;
  meta["horizon_minutes"] = config.horizon_minutes;
  meta["beta"] = config.beta;
  meta["window_start"] = format_iso8601(config.window_start);
  meta["window_end"] = format_iso8601(config.window_end());
  meta["image_side"] = config.image_side;
  std::ofstream out(dir / "synth.json");
  if (!out) throw IoError("cannot write " + (dir / "synth.json").string());
  out << meta.dump(2) << '\n';
}

}  // namespace censorlens::synth
