#include "censorlens/analytics/lifetimes.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include <fmt/format.h>

#include "censorlens/error.hpp"

namespace censorlens::analytics {

double lower_quantile(std::span<const double> sorted, double q) {
  if (sorted.empty()) throw InvalidArgument("quantile of an empty list");
  if (!(q >= 0.0 && q <= 1.0)) throw InvalidArgument("quantile level must be in [0, 1]");
  const auto idx = static_cast<std::size_t>(std::floor(q * static_cast<double>(sorted.size() - 1)));
  return sorted[idx];
}

LifetimeSummary summarize_lifetimes(Category category, std::vector<double> minutes) {
  if (minutes.empty()) throw InvalidArgument(fmt::format("no lifetimes for {}", display_name(category)));
  for (double m : minutes) {
    if (!(m >= 0.0) || !std::isfinite(m)) throw InvalidArgument("lifetimes must be finite and non-negative");
  }
  std::sort(minutes.begin(), minutes.end());
  LifetimeSummary s;
  s.category = category;
  s.count = minutes.size();
  s.min = minutes.front();
  s.q1 = lower_quantile(minutes, 0.25);
  s.median = lower_quantile(minutes, 0.5);
  s.q3 = lower_quantile(minutes, 0.75);
  s.max = minutes.back();
  return s;
}

LifetimeTable lifetime_summary(const std::map<Category, std::vector<double>>& lifetimes) {
  LifetimeTable table;
  for (const auto& [c, values] : lifetimes) {
    if (values.empty()) {
      table.notes.push_back(fmt::format("{}: no censored posts, row omitted", display_name(c)));
      continue;
    }
    table.rows.push_back(summarize_lifetimes(c, values));
  }
  return table;
}

namespace {

std::unordered_map<std::string_view, const corpus::Post*> index_posts(const corpus::Corpus& corpus) {
  std::unordered_map<std::string_view, const corpus::Post*> by_id;
  by_id.reserve(corpus.posts.size());
  for (const auto& p : corpus.posts) by_id.emplace(p.id, &p);
  return by_id;
}

}  // namespace

std::map<Category, std::vector<double>> censored_lifetimes(const corpus::Corpus& corpus,
                                                           const MembershipMap& membership) {
  const auto by_id = index_posts(corpus);
  std::map<Category, std::vector<double>> out;
  for (const auto& [c, m] : membership) {
    auto& values = out[c];
    for (const auto& id : m.censored) {
      const auto it = by_id.find(id);
      if (it == by_id.end()) continue;
      if (auto life = corpus::lifetime_minutes(*it->second)) values.push_back(*life);
    }
  }
  return out;
}

std::size_t Histogram::total() const {
  std::size_t t = 0;
  for (auto c : counts) t += c;
  return t;
}

std::vector<CreationTimeDistribution> creation_time_distribution(const corpus::Corpus& corpus,
                                                                 const MembershipMap& membership,
                                                                 std::chrono::seconds bucket) {
  if (bucket.count() <= 0) throw InvalidArgument("histogram bucket must be positive");
  const auto span = corpus.window_end - corpus.window_start;
  if (span.count() < 0) throw InvalidArgument("window_end precedes window_start");
  const auto n_buckets = std::max<std::int64_t>(1, (span.count() + bucket.count() - 1) / bucket.count());

  const auto by_id = index_posts(corpus);
  auto fill = [&](const std::vector<std::string>& ids) {
    Histogram h{corpus.window_start, bucket, std::vector<std::size_t>(static_cast<std::size_t>(n_buckets), 0)};
    for (const auto& id : ids) {
      const auto it = by_id.find(id);
      if (it == by_id.end()) continue;
      const auto t = it->second->created_at;
      if (t < corpus.window_start || t > corpus.window_end) continue;
      auto k = (t - corpus.window_start).count() / bucket.count();
      k = std::min<std::int64_t>(k, n_buckets - 1);
      ++h.counts[static_cast<std::size_t>(k)];
    }
    return h;
  };

  std::vector<CreationTimeDistribution> out;
  for (const auto& [c, m] : membership) out.push_back({c, fill(m.censored), fill(m.uncensored)});
  return out;
}

}  // namespace censorlens::analytics
