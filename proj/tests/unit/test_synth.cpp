#include <cmath>
#include <set>

#include <gtest/gtest.h>

#include "censorlens/error.hpp"
#include "censorlens/synth.hpp"
#include "censorlens/textclf/sentiment.hpp"
#include "fixtures.hpp"

using namespace censorlens;
using namespace censorlens::synth;

namespace {

GeneratorConfig small_config(std::size_t n, std::uint64_t seed) {
  GeneratorConfig c;
  c.n = n;
  c.seed = seed;
  c.render_images = false;
  c.beta = {0.4, -0.3, 0.05, 0.0, -0.3};
  return c;
}

double hazard(const GeneratorConfig& c, const TruthRow& t) {
  const double eta = c.beta[0] * t.image_match + c.beta[1] * t.text_match + c.beta[2] * t.reposts +
                     c.beta[3] * t.comments + c.beta[4] * t.sentiment;
  return c.baseline_hazard * std::exp(eta);
}

}  // namespace

TEST(Vocabulary, PoolsArePairwiseDisjoint) {
  const auto v = make_vocabulary(3);
  std::set<std::string> seen;
  std::size_t total = 0;
  auto add = [&](const std::vector<std::string>& pool) {
    total += pool.size();
    seen.insert(pool.begin(), pool.end());
  };
  for (const auto& k : v.keywords) add(k);
  add(v.filler);
  add(v.positive);
  add(v.negative);
  EXPECT_EQ(seen.size(), total);
  EXPECT_EQ(v.keywords_of(Category::Fire).size(), 8u);
  EXPECT_EQ(make_vocabulary(3).filler, v.filler);
}

TEST(Motifs, DistinctPerTopic) {
  std::set<std::tuple<int, int, int, int>> seen;
  for (auto c : topic_categories()) {
    const auto m = motif_of(c);
    seen.insert({m.color[0], m.color[1], m.color[2], static_cast<int>(m.shape)});
  }
  EXPECT_EQ(seen.size(), kNumTopics);
  EXPECT_THROW(motif_of(Category::Other), InvalidArgument);
  Rng a(1), b(1);
  EXPECT_EQ(render_image(Category::Fire, 24, a), render_image(Category::Fire, 24, b));
}

TEST(Text, HitsAgreeWithLexiconScorer) {
  const auto v = make_vocabulary(5);
  const textclf::LexiconSentiment lex(v.positive, v.negative);
  Rng rng(2);
  for (int i = 0; i < 200; ++i) {
    const auto topic = i % 3 == 0 ? std::nullopt : std::optional(category_at(static_cast<std::size_t>(i) % kNumTopics));
    const auto g = render_text(v, topic, {}, rng);
    const auto h = lex.hits(g.text);
    EXPECT_EQ(h.positive, g.positive_hits);
    EXPECT_EQ(h.negative, g.negative_hits);
    EXPECT_EQ(keyword_lookup(v, g.text), topic.value_or(Category::Other));
  }
}

TEST(Generator, DeterministicPerSeed) {
  const auto a = generate_corpus(small_config(300, 4));
  const auto b = generate_corpus(small_config(300, 4));
  const auto c = generate_corpus(small_config(300, 5));
  ASSERT_EQ(a.truth.size(), 300u);
  std::size_t differ = 0;
  for (std::size_t i = 0; i < 300; ++i) {
    EXPECT_EQ(a.corpus.posts[i].text, b.corpus.posts[i].text);
    EXPECT_EQ(a.corpus.posts[i].created_at, b.corpus.posts[i].created_at);
    EXPECT_EQ(a.truth[i].survival_minutes, b.truth[i].survival_minutes);
    differ += a.truth[i].survival_minutes != c.truth[i].survival_minutes;
  }
  EXPECT_GT(differ, 290u);
  // A prefix of a larger corpus is the smaller corpus.
  const auto big = generate_corpus(small_config(400, 4));
  EXPECT_EQ(big.truth[299].survival_minutes, a.truth[299].survival_minutes);
}

TEST(Generator, StatusMatchesPlantedTimes) {
  auto cfg = small_config(2000, 6);
  cfg.voluntary_deletion_rate = 0.2;
  const auto g = generate_corpus(cfg);
  std::size_t voluntary = 0, survived = 0;
  for (std::size_t i = 0; i < g.truth.size(); ++i) {
    const auto& t = g.truth[i];
    const auto& p = g.corpus.posts[i];
    EXPECT_EQ(corpus::status_of(p), t.status);
    if (t.category != Category::Other) {
      EXPECT_TRUE(t.image_match || t.text_match);
    } else {
      EXPECT_FALSE(t.image_match || t.text_match);
    }
    if (t.survival_minutes <= cfg.horizon_minutes) {
      EXPECT_EQ(t.status, corpus::CensorshipStatus::Censored);
      EXPECT_NEAR(*corpus::lifetime_minutes(p), std::max(t.survival_minutes, 1.0 / 60), 0.5 / 60 + 1e-9);
    } else {
      ++survived;
      voluntary += t.status == corpus::CensorshipStatus::VoluntaryOrUnknown;
      EXPECT_NE(t.status, corpus::CensorshipStatus::Censored);
    }
    EXPECT_GE(p.created_at, cfg.window_start);
    EXPECT_LE(p.created_at, cfg.window_start + cfg.creation_span);
  }
  const double share = static_cast<double>(voluntary) / static_cast<double>(survived);
  EXPECT_NEAR(share, 0.2, 4 * std::sqrt(0.2 * 0.8 / static_cast<double>(survived)));
}

TEST(Generator, EventFractionMatchesModel) {
  const auto cfg = small_config(6000, 7);
  const auto g = generate_corpus(cfg);
  double expected = 0.0, variance = 0.0;
  std::size_t observed = 0;
  for (const auto& t : g.truth) {
    const double p = 1.0 - std::exp(-hazard(cfg, t) * cfg.horizon_minutes);
    expected += p;
    variance += p * (1 - p);
    observed += t.status == corpus::CensorshipStatus::Censored;
  }
  EXPECT_LT(std::abs(static_cast<double>(observed) - expected), 3.0 * std::sqrt(variance));
}

TEST(Generator, SurvivalTimesFollowExponentialModel) {
  // Probability integral transform: 1 - exp(-h_i T_i) is uniform on (0, 1).
  const auto cfg = small_config(4000, 8);
  const auto g = generate_corpus(cfg);
  std::vector<double> u;
  for (const auto& t : g.truth) u.push_back(1.0 - std::exp(-hazard(cfg, t) * t.survival_minutes));
  std::sort(u.begin(), u.end());
  double d = 0.0;
  const double n = static_cast<double>(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) {
    d = std::max({d, std::abs(static_cast<double>(i + 1) / n - u[i]), std::abs(u[i] - static_cast<double>(i) / n)});
  }
  // Kolmogorov critical value at the 1% level.
  EXPECT_LT(d, 1.628 / std::sqrt(n));
}

TEST(Generator, ConfigValidation) {
  auto cfg = small_config(10, 1);
  cfg.n = 0;
  EXPECT_THROW(cfg.validate(), InvalidArgument);
  cfg = small_config(10, 1);
  cfg.baseline_hazard = 0.0;
  EXPECT_THROW(cfg.validate(), InvalidArgument);
  cfg = small_config(10, 1);
  cfg.image_match_rate = 1.5;
  EXPECT_THROW(cfg.validate(), InvalidArgument);
  cfg = small_config(10, 1);
  EXPECT_EQ(cfg.window_end(), cfg.window_start + cfg.creation_span + std::chrono::minutes(720));
}

TEST(Oracle, DecisionsFollowTruth) {
  const auto g = generate_corpus(small_config(200, 9));
  const auto d = oracle_classifier(g.truth);
  for (const auto& t : g.truth) {
    EXPECT_EQ(d.image.at(t.post_id), t.image_match ? t.category : Category::Other);
    EXPECT_EQ(d.text.at(t.post_id), t.text_match ? t.category : Category::Other);
    EXPECT_EQ(d.sentiment.at(t.post_id), t.sentiment);
  }
}

TEST(Files, TruthCsvRoundTrip) {
  fixture::TempDir tmp("truth");
  const auto g = generate_corpus(small_config(50, 10));
  write_truth_csv(tmp / "t.csv", g.truth);
  const auto back = read_truth_csv(tmp / "t.csv");
  ASSERT_EQ(back.size(), g.truth.size());
  for (std::size_t i = 0; i < back.size(); ++i) {
    EXPECT_EQ(back[i].post_id, g.truth[i].post_id);
    EXPECT_EQ(back[i].category, g.truth[i].category);
    EXPECT_EQ(back[i].image_match, g.truth[i].image_match);
    EXPECT_EQ(back[i].reposts, g.truth[i].reposts);
    EXPECT_EQ(back[i].sentiment, g.truth[i].sentiment);
    EXPECT_EQ(back[i].survival_minutes, g.truth[i].survival_minutes);
    EXPECT_EQ(back[i].status, g.truth[i].status);
  }
}

TEST(Files, WorkspaceLoadsCleanly) {
  fixture::TempDir tmp("workspace");
  auto cfg = small_config(60, 11);
  cfg.render_images = true;
  cfg.image_side = 16;
  write_workspace(tmp.path(), cfg, {2, 1, 2, 1});
  for (const char* f : {"posts.jsonl", "ground_truth.csv", "lexicon/positive.txt", "lexicon/negative.txt",
                        "keywords.json", "texts_train.csv", "texts_test.csv"}) {
    EXPECT_TRUE(std::filesystem::exists(tmp / f)) << f;
  }
  const auto r = corpus::load_posts(tmp / "posts.jsonl", tmp / "images");
  EXPECT_TRUE(r.errors.empty());
  EXPECT_EQ(r.corpus.posts.size(), 60u);
  EXPECT_TRUE(r.corpus.missing_images.empty());
  EXPECT_EQ(imgclf::load_labeled_image_dir(tmp / "images_train").size(), 2 * kNumCategories);
  EXPECT_EQ(textclf::read_labeled_texts(tmp / "texts_test.csv").size(), kNumCategories);
}
