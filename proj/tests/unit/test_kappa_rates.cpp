#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "censorlens/analytics/kappa.hpp"
#include "censorlens/analytics/lifetimes.hpp"
#include "censorlens/analytics/rates.hpp"
#include "censorlens/analytics/report.hpp"
#include "censorlens/error.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace censorlens;
using namespace censorlens::analytics;
using namespace std::chrono_literals;

TEST(Kappa, MatchesContingencyTableOracle) {
  std::mt19937_64 rng(12);
  for (int rep = 0; rep < 50; ++rep) {
    const int k = 2 + rep % 4;
    std::uniform_int_distribution<int> label(0, k - 1);
    std::bernoulli_distribution agree(0.6);
    std::vector<int> a, b;
    for (int i = 0; i < 80; ++i) {
      a.push_back(label(rng));
      b.push_back(agree(rng) ? a.back() : label(rng));
    }
    std::vector<std::vector<double>> table(static_cast<std::size_t>(k), std::vector<double>(static_cast<std::size_t>(k)));
    for (std::size_t i = 0; i < a.size(); ++i) table[static_cast<std::size_t>(a[i])][static_cast<std::size_t>(b[i])] += 1;
    const auto r = cohens_kappa<int>(a, b);
    ASSERT_TRUE(r.kappa);
    EXPECT_NEAR(*r.kappa, oracle::kappa_from_table(table), 1e-12);
    // Invariance under a relabeling of the categories.
    std::vector<int> pa, pb;
    for (int v : a) pa.push_back((v * 7 + 3) % 11);
    for (int v : b) pb.push_back((v * 7 + 3) % 11);
    EXPECT_EQ(*cohens_kappa<int>(pa, pb).kappa, *r.kappa);
    // Symmetric in the two raters.
    EXPECT_EQ(*cohens_kappa<int>(b, a).kappa, *r.kappa);
  }
}

TEST(Kappa, EdgeCases) {
  const std::vector<int> same{1, 2, 3, 1};
  EXPECT_DOUBLE_EQ(*cohens_kappa<int>(same, same).kappa, 1.0);
  const std::vector<int> ones(5, 1);
  const auto degenerate = cohens_kappa<int>(ones, ones);
  EXPECT_FALSE(degenerate.kappa);
  EXPECT_DOUBLE_EQ(degenerate.expected, 1.0);
  // Systematic disagreement between two labels gives -1.
  EXPECT_DOUBLE_EQ(*cohens_kappa<int>(std::vector<int>{0, 1, 0, 1}, std::vector<int>{1, 0, 1, 0}).kappa, -1.0);
  EXPECT_THROW(cohens_kappa<int>(std::vector<int>{}, std::vector<int>{}), InvalidArgument);
  EXPECT_THROW(cohens_kappa<int>(std::vector<int>{1}, std::vector<int>{1, 2}), InvalidArgument);
}

// [[20, 5], [10, 15]]: po = 0.7, pe = 0.5, kappa = 0.4.
TEST(Kappa, HandTable) {
  std::vector<int> a, b;
  auto add = [&](int x, int y, int n) {
    for (int i = 0; i < n; ++i) {
      a.push_back(x);
      b.push_back(y);
    }
  };
  add(0, 0, 20);
  add(0, 1, 5);
  add(1, 0, 10);
  add(1, 1, 15);
  const auto r = cohens_kappa<int>(a, b);
  EXPECT_DOUBLE_EQ(r.observed, 0.7);
  EXPECT_DOUBLE_EQ(r.expected, 0.5);
  EXPECT_DOUBLE_EQ(*r.kappa, 0.4);
}

TEST(Rates, FormulaAndTable) {
  EXPECT_DOUBLE_EQ(censorship_rate(3, 1), 0.75);
  EXPECT_DOUBLE_EQ(censorship_rate(0, 4), 0.0);
  EXPECT_THROW(censorship_rate(0, 0), InvalidArgument);
  MembershipMap m;
  m[Category::Protest] = {{"a", "b"}, {"c"}};
  m[Category::Fire] = {{}, {"d"}};
  m[Category::Rainstorm] = {};
  const auto t = censorship_rate(m);
  ASSERT_EQ(t.rows.size(), 2u);
  EXPECT_EQ(t.rows[0].category, Category::Fire);
  EXPECT_DOUBLE_EQ(t.rows[1].rate, 2.0 / 3.0);
  EXPECT_EQ(t.notes.size(), 1u);
  const auto table = rate_table(t);
  EXPECT_EQ(table.rows[1][3], "66.7");
}

TEST(Rates, PublishedRowsRecomputed) {
  const auto checks = check_published_rates();
  ASSERT_EQ(checks.size(), kNumTopics);
  for (const auto& c : checks) {
    const double expect =
        100.0 * static_cast<double>(c.published.n_censored) / (c.published.n_censored + c.published.n_uncensored);
    EXPECT_DOUBLE_EQ(c.computed_percent, expect);
    EXPECT_EQ(c.consistent, std::abs(expect - c.published.printed_percent) < 1.0);
  }
  // A zero tolerance flags every row whose printed value is rounded.
  for (const auto& c : check_published_rates(0.0)) EXPECT_FALSE(c.consistent);
}

TEST(Lifetimes, LowerNearestRankQuantiles) {
  const std::vector<double> v{1, 2, 3, 4};
  EXPECT_EQ(lower_quantile(v, 0.5), 2.0);  // lower middle for even n
  EXPECT_EQ(lower_quantile(v, 0.25), 1.0);
  EXPECT_EQ(lower_quantile(v, 0.75), 3.0);
  EXPECT_EQ(lower_quantile(v, 1.0), 4.0);
  EXPECT_EQ(lower_quantile(std::vector<double>{7}, 0.5), 7.0);
  const auto s = summarize_lifetimes(Category::Fire, {9, 1, 5, 3, 7});
  EXPECT_EQ(s.count, 5u);
  EXPECT_EQ(s.min, 1.0);
  EXPECT_EQ(s.q1, 3.0);
  EXPECT_EQ(s.median, 5.0);
  EXPECT_EQ(s.q3, 7.0);
  EXPECT_EQ(s.max, 9.0);
  EXPECT_THROW(summarize_lifetimes(Category::Fire, {}), InvalidArgument);
  EXPECT_THROW(summarize_lifetimes(Category::Fire, {1, -1}), InvalidArgument);
}

TEST(Lifetimes, QuantilesAreOrderedProperty) {
  std::mt19937_64 rng(4);
  std::exponential_distribution<double> d(0.01);
  for (int rep = 0; rep < 100; ++rep) {
    std::vector<double> xs(1 + rep % 17);
    for (auto& x : xs) x = d(rng);
    const auto s = summarize_lifetimes(Category::Protest, xs);
    EXPECT_LE(s.min, s.q1);
    EXPECT_LE(s.q1, s.median);
    EXPECT_LE(s.median, s.q3);
    EXPECT_LE(s.q3, s.max);
    EXPECT_NE(std::find(xs.begin(), xs.end(), s.median), xs.end());  // an observed value
  }
}

TEST(Lifetimes, TableOmitsEmptyCategoriesWithNote) {
  const auto t = lifetime_summary({{Category::Fire, {1, 2}}, {Category::Protest, {}}});
  ASSERT_EQ(t.rows.size(), 1u);
  EXPECT_EQ(t.notes.size(), 1u);
}

TEST(Lifetimes, CreationHistogramClosesLastBucket) {
  corpus::Corpus c;
  c.window_start = *parse_iso8601("2015-01-01T00:00:00Z");
  c.window_end = c.window_start + 10h;
  auto add = [&](std::string id, std::chrono::minutes at) {
    corpus::Post p;
    p.id = std::move(id);
    p.text = "x";
    p.created_at = c.window_start + at;
    c.posts.push_back(p);
  };
  add("a", 0min);
  add("b", 239min);
  add("c", 240min);
  add("d", 600min);  // exactly window_end
  add("e", 601min);  // outside
  MembershipMap m;
  m[Category::Fire] = {{"a", "b", "c"}, {"d", "e"}};
  const auto dist = creation_time_distribution(c, m, 4h);
  ASSERT_EQ(dist.size(), 1u);
  EXPECT_EQ(dist[0].censored.counts, (std::vector<std::size_t>{2, 1, 0}));
  EXPECT_EQ(dist[0].uncensored.counts, (std::vector<std::size_t>{0, 0, 1}));
  EXPECT_EQ(dist[0].uncensored.total(), 1u);
  EXPECT_THROW(creation_time_distribution(c, m, 0s), InvalidArgument);
  const auto table = creation_time_table(dist);
  EXPECT_EQ(table.rows.size(), 3u);
  EXPECT_EQ(table.rows[1][1], "2015-01-01T04:00:00Z");
}

TEST(Report, NumberFormatting) {
  EXPECT_EQ(format_p(0.004999), "<0.005");
  EXPECT_EQ(format_p(0.005), "0.01");
  EXPECT_EQ(format_p(0.5), "0.50");
  EXPECT_EQ(format_p(NAN), "n/a");
  EXPECT_EQ(format_coefficient(-0.001), "0.00");
  EXPECT_EQ(format_coefficient(-0.236), "-0.24");
  EXPECT_EQ(format_coefficient(NAN), "n/a");
}

TEST(Report, WaldTableMarksAbsentEstimates) {
  CoxFit fit;
  for (auto name : covariate_names()) fit.terms.push_back({std::string(name), CoxEstimate{-0.2, 0.05, -4, 1e-5}, ""});
  fit.terms[1].estimate.reset();
  const auto t = wald_table({{Category::Protest, fit}});
  ASSERT_EQ(t.header.size(), 1 + 2 * kNumCovariates);
  EXPECT_EQ(t.rows[0][1], "-0.20");
  EXPECT_EQ(t.rows[0][2], "<0.005");
  EXPECT_EQ(t.rows[0][3], "n/a");
  EXPECT_EQ(t.rows[0][4], "n/a");
  EXPECT_THROW(wald_table({}), InvalidArgument);
}

TEST(Report, TextRenderingAndCsvRoundTrip) {
  const Table t{{"category", "value"}, {{"Fire", "1.5"}, {"Injury/Dead", "10"}}};
  const auto text = render_text(t);
  EXPECT_EQ(text,
            "category     value\n"
            "------------------\n"
            "Fire           1.5\n"
            "Injury/Dead     10\n");
  fixture::TempDir tmp("report");
  write_csv(tmp / "sub/t.csv", t);
  const auto back = read_csv_table(tmp / "sub/t.csv");
  EXPECT_EQ(back.header, t.header);
  EXPECT_EQ(back.rows, t.rows);
}
