#pragma once

#include <chrono>
#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "censorlens/analytics/rates.hpp"
#include "censorlens/category.hpp"
#include "censorlens/corpus.hpp"
#include "censorlens/timeutil.hpp"

namespace censorlens::analytics {

/// Order statistics use the lower nearest rank: the value at sorted index
/// floor(q * (n - 1)). For even counts the median is the lower middle value.
struct LifetimeSummary {
  Category category = Category::Other;
  std::size_t count = 0;
  double min = 0.0;
  double q1 = 0.0;
  double median = 0.0;
  double q3 = 0.0;
  double max = 0.0;
};

/// `sorted` must be ascending and non-empty; q in [0, 1].
double lower_quantile(std::span<const double> sorted, double q);

/// Throws InvalidArgument on an empty list or a negative lifetime.
LifetimeSummary summarize_lifetimes(Category category, std::vector<double> minutes);

struct LifetimeTable {
  std::vector<LifetimeSummary> rows;
  std::vector<std::string> notes;
};

/// Categories without censored posts are omitted with a note.
LifetimeTable lifetime_summary(const std::map<Category, std::vector<double>>& lifetimes);

/// Collects lifetimes of the censored members of each category.
std::map<Category, std::vector<double>> censored_lifetimes(const corpus::Corpus& corpus,
                                                           const MembershipMap& membership);

struct Histogram {
  Timestamp start{};
  std::chrono::seconds bucket{};
  std::vector<std::size_t> counts;

  std::size_t total() const;
};

struct CreationTimeDistribution {
  Category category = Category::Other;
  Histogram censored;
  Histogram uncensored;
};

/// Buckets created_at over [window_start, window_end]; the final bucket is
/// closed on the right. Posts outside the window are ignored. Throws
/// InvalidArgument unless bucket > 0.
std::vector<CreationTimeDistribution> creation_time_distribution(const corpus::Corpus& corpus,
                                                                 const MembershipMap& membership,
                                                                 std::chrono::seconds bucket);

}  // namespace censorlens::analytics
