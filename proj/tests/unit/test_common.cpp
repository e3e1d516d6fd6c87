#include <cmath>
#include <random>
#include <set>

#include <gtest/gtest.h>

#include "censorlens/category.hpp"
#include "censorlens/csv.hpp"
#include "censorlens/error.hpp"
#include "censorlens/image.hpp"
#include "censorlens/metrics.hpp"
#include "censorlens/random.hpp"
#include "censorlens/scores.hpp"
#include "censorlens/text.hpp"
#include "censorlens/timeutil.hpp"
#include "fixtures.hpp"

using namespace censorlens;

TEST(Category, FifteenLabelsWithOtherLast) {
  EXPECT_EQ(all_categories().size(), 15u);
  EXPECT_EQ(topic_categories().size(), 14u);
  EXPECT_EQ(all_categories().back(), Category::Other);
  std::set<std::string_view> slugs;
  for (auto c : all_categories()) {
    slugs.insert(slug(c));
    EXPECT_EQ(category_at(index_of(c)), c);
  }
  EXPECT_EQ(slugs.size(), 15u);
  EXPECT_THROW(category_at(15), InvalidArgument);
}

TEST(Category, ParsesNamesAndSlugsCaseInsensitively) {
  EXPECT_EQ(parse_category("Injury/Dead"), Category::InjuryDead);
  EXPECT_EQ(parse_category("injury_dead"), Category::InjuryDead);
  EXPECT_EQ(parse_category("WINNIE THE POOH"), Category::WinnieThePooh);
  EXPECT_EQ(parse_category("People's Congress"), Category::PeoplesCongress);
  EXPECT_FALSE(parse_category("nope"));
  EXPECT_THROW(category_from_string("nope"), InvalidArgument);
  for (auto c : all_categories()) {
    EXPECT_EQ(parse_category(display_name(c)), c);
    EXPECT_EQ(parse_category(slug(c)), c);
  }
}

TEST(Scores, SoftmaxIsStableAndNormalized) {
  std::array<double, kNumCategories> logits{};
  logits[3] = 1000.0;
  logits[4] = 999.0;
  const auto s = softmax(logits);
  double total = 0;
  for (double p : s.p) {
    EXPECT_TRUE(std::isfinite(p));
    total += p;
  }
  EXPECT_NEAR(total, 1.0, 1e-12);
  EXPECT_EQ(s.argmax(), Category::InjuryDead);
  EXPECT_NEAR(s[Category::InjuryDead] / s[Category::LiuXiaobo], std::exp(1.0), 1e-9);
}

TEST(Scores, ArgmaxTiesGoToEarliestCategory) {
  ClassScores s;
  s.p.fill(0.0);
  s.p[5] = 0.5;
  s.p[2] = 0.5;
  EXPECT_EQ(s.argmax(), Category::Fire);
}

TEST(Scores, DecideGatesAtThreshold) {
  ClassScores s;
  s.p.fill(0.0);
  s.p[0] = 0.80;
  s.p[14] = 0.20;
  EXPECT_EQ(decide(s), Category::BoXilai);
  s.p[0] = 0.79;
  s.p[14] = 0.21;
  EXPECT_EQ(decide(s), Category::Other);
  EXPECT_EQ(decide(s, 0.5), Category::BoXilai);
  EXPECT_THROW(decide(s, 0.0), InvalidArgument);
  EXPECT_THROW(decide(s, 1.01), InvalidArgument);
  EXPECT_NO_THROW(decide(s, 1.0));
}

TEST(Metrics, HandComputedReport) {
  // truth:     A A A B B C
  // predicted: A A B B C C
  const std::vector<Category> truth{Category::BoXilai, Category::BoXilai, Category::BoXilai,
                                    Category::Fire,    Category::Fire,    Category::Other};
  const std::vector<Category> pred{Category::BoXilai, Category::BoXilai, Category::Fire,
                                   Category::Fire,    Category::Other,   Category::Other};
  const auto r = evaluate_predictions(truth, pred);
  EXPECT_EQ(r.total, 6u);
  EXPECT_NEAR(r.accuracy, 4.0 / 6.0, 1e-12);
  const auto& a = *r.per_class[index_of(Category::BoXilai)];
  EXPECT_NEAR(a.precision, 1.0, 1e-12);
  EXPECT_NEAR(a.recall, 2.0 / 3.0, 1e-12);
  EXPECT_NEAR(a.f1, 0.8, 1e-12);
  EXPECT_NEAR(a.false_positive_rate, 0.0, 1e-12);
  const auto& b = *r.per_class[index_of(Category::Fire)];
  EXPECT_NEAR(b.precision, 0.5, 1e-12);
  EXPECT_NEAR(b.recall, 0.5, 1e-12);
  EXPECT_NEAR(b.false_positive_rate, 0.25, 1e-12);
  const auto& c = *r.per_class[index_of(Category::Other)];
  EXPECT_NEAR(c.precision, 0.5, 1e-12);
  EXPECT_NEAR(c.recall, 1.0, 1e-12);
  // Macro over the three present classes only.
  EXPECT_NEAR(r.macro_f1, (0.8 + 0.5 + 2.0 / 3.0) / 3.0, 1e-12);
  EXPECT_NEAR(r.micro_f1, r.accuracy, 1e-12);
  EXPECT_FALSE(r.per_class[index_of(Category::Protest)]);
  EXPECT_EQ(r.confusion[index_of(Category::BoXilai)][index_of(Category::Fire)], 1u);
  EXPECT_THROW(evaluate_predictions(truth, std::span(pred).first(3)), InvalidArgument);
}

TEST(Csv, RoundTripsQuotedFields) {
  const csv::Row row{"plain", "with,comma", "with \"quote\"", "multi\nline", ""};
  const auto line = csv::join(row);
  const auto parsed = csv::parse(line + "\n");
  ASSERT_EQ(parsed.size(), 1u);
  EXPECT_EQ(parsed[0], row);
  EXPECT_EQ(csv::escape("x"), "x");
  EXPECT_EQ(csv::escape("a,b"), "\"a,b\"");
}

TEST(Time, Iso8601RoundTrip) {
  const auto t = parse_iso8601("2015-03-04T05:06:07Z");
  ASSERT_TRUE(t);
  EXPECT_EQ(format_iso8601(*t), "2015-03-04T05:06:07Z");
  EXPECT_EQ(parse_iso8601("2015-03-04T05:06:07.999Z"), t);
  EXPECT_EQ(parse_iso8601("2015-03-04T05:06:07+00:00"), t);
  EXPECT_FALSE(parse_iso8601("2015-13-04T05:06:07Z"));
  EXPECT_FALSE(parse_iso8601("yesterday"));
  EXPECT_DOUBLE_EQ(minutes_between(*t, *t + std::chrono::seconds(90)), 1.5);
}

TEST(Text, NfcComposesAndRepairsInvalidUtf8) {
  // "e" + combining acute -> U+00E9.
  EXPECT_EQ(text::normalize_nfc("e\xCC\x81"), "\xC3\xA9");
  const auto repaired = text::normalize_nfc(std::string("a\xFF" "b"));
  EXPECT_EQ(repaired, "a\xEF\xBF\xBD" "b");
  EXPECT_EQ(text::fold_ascii_whitespace_case("  Hello \t  World "), "hello world");
}

TEST(Random, DerivedSeedsDiffer) {
  std::set<std::uint64_t> seen;
  for (std::uint64_t i = 0; i < 1000; ++i) seen.insert(derive_seed(42, i));
  EXPECT_EQ(seen.size(), 1000u);
  EXPECT_NE(derive_seed(1, 0), derive_seed(2, 0));
}

TEST(Image, LetterboxKeepsAspectAndCenters) {
  Image img(10, 20, 200);
  const auto g = letterbox_geometry(10, 20, 40);
  EXPECT_DOUBLE_EQ(g.scale, 2.0);
  EXPECT_DOUBLE_EQ(g.offset_y, 10.0);
  const auto out = letterbox(img, 40);
  EXPECT_EQ(out.height(), 40);
  EXPECT_EQ(out.at(0, 20, 0), 0);    // top border
  EXPECT_EQ(out.at(20, 20, 0), 200);  // content
  EXPECT_THROW(Image(0, 5), InvalidArgument);
}

TEST(Image, PngRoundTrip) {
  fixture::TempDir tmp("img");
  Image img(7, 5);
  std::mt19937 rng(1);
  for (auto& v : img.data()) v = static_cast<std::uint8_t>(rng());
  save_image(tmp / "a.png", img);
  EXPECT_EQ(load_image(tmp / "a.png"), img);
  EXPECT_THROW(load_image(tmp / "missing.png"), IoError);
}
