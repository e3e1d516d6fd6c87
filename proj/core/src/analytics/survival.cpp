#include "censorlens/analytics/survival.hpp"

#include <cmath>
#include <fstream>

#include <fmt/format.h>

#include "censorlens/csv.hpp"
#include "censorlens/error.hpp"

namespace censorlens::analytics {

const std::array<std::string_view, kNumCovariates>& covariate_names() {
  static const std::array<std::string_view, kNumCovariates> names{"image", "text", "reposts", "comments",
                                                                   "sentiment"};
  return names;
}

std::string_view covariate_name(Covariate c) { return covariate_names()[static_cast<std::size_t>(c)]; }

SurvivalBuild build_survival_records(const corpus::Corpus& corpus, Category category,
                                     const std::map<std::string, Category>& image_decisions,
                                     const std::map<std::string, Category>& text_decisions,
                                     const std::map<std::string, double>& sentiment, Timestamp window_end,
                                     const SurvivalOptions& options) {
  if (options.max_followup_minutes && !(*options.max_followup_minutes > 0.0)) {
    throw InvalidArgument("max_followup_minutes must be positive");
  }
  SurvivalBuild out;
  std::size_t clamped = 0;
  std::size_t missing_sentiment = 0;
  auto matches = [&](const std::map<std::string, Category>& decisions, const std::string& id) {
    const auto it = decisions.find(id);
    return it != decisions.end() && it->second == category;
  };
  auto count_value = [&](std::int64_t n) {
    return options.log1p_counts ? std::log1p(static_cast<double>(n)) : static_cast<double>(n);
  };

  for (const auto& post : corpus.posts) {
    const bool image_match = matches(image_decisions, post.id);
    const bool text_match = matches(text_decisions, post.id);
    if (!image_match && !text_match) continue;

    SurvivalRecord r;
    r.post_id = post.id;
    switch (corpus::status_of(post)) {
      case corpus::CensorshipStatus::VoluntaryOrUnknown:
        continue;
      case corpus::CensorshipStatus::Censored:
        r.duration = *corpus::lifetime_minutes(post);
        r.event = 1;
        break;
      case corpus::CensorshipStatus::Live:
        if (post.created_at > window_end) {
          throw InvalidArgument(fmt::format("post {} was created after window_end", post.id));
        }
        r.duration = minutes_between(post.created_at, window_end);
        r.event = 0;
        break;
    }
    if (options.max_followup_minutes && r.duration > *options.max_followup_minutes) {
      r.duration = *options.max_followup_minutes;
      r.event = 0;
    }
    if (r.duration <= 0.0) {
      r.duration = 1.0;
      ++clamped;
    }

    double s = 2.0;
    if (const auto it = sentiment.find(post.id); it != sentiment.end()) {
      s = it->second;
    } else {
      ++missing_sentiment;
    }
    r.x = {image_match ? 1.0 : 0.0, text_match ? 1.0 : 0.0, count_value(post.repost_count),
           count_value(post.comment_count), s};
    out.records.push_back(std::move(r));
  }
  if (clamped > 0) {
    out.warnings.push_back(fmt::format("{}: {} zero-duration records clamped to 1 minute", display_name(category), clamped));
  }
  if (missing_sentiment > 0) {
    out.warnings.push_back(
        fmt::format("{}: {} posts without a sentiment score set to neutral", display_name(category), missing_sentiment));
  }
  return out;
}

void write_survival_records(const std::filesystem::path& path, std::span<const SurvivalRecord> records) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << "post_id,duration,event";
  for (auto name : covariate_names()) out << ',' << name;
  out << '\n';
  for (const auto& r : records) {
    out << csv::escape(r.post_id) << ',' << fmt::format("{:.17g}", r.duration) << ',' << r.event;
    for (double v : r.x) out << ',' << fmt::format("{:.17g}", v);
    out << '\n';
  }
}

std::vector<SurvivalRecord> read_survival_records(const std::filesystem::path& path) {
  const auto rows = csv::read_file(path);
  if (rows.empty()) throw InvalidArgument("survival file is empty: " + path.string());
  std::vector<SurvivalRecord> out;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& row = rows[i];
    if (row.size() != 3 + kNumCovariates) {
      throw InvalidArgument(fmt::format("{}: row {} has {} columns", path.string(), i + 1, row.size()));
    }
    try {
      SurvivalRecord r;
      r.post_id = row[0];
      r.duration = std::stod(row[1]);
      r.event = std::stoi(row[2]);
      for (std::size_t k = 0; k < kNumCovariates; ++k) r.x[k] = std::stod(row[3 + k]);
      if (!(r.duration > 0.0) || (r.event != 0 && r.event != 1)) throw InvalidArgument("bad duration or event");
      out.push_back(std::move(r));
    } catch (const std::exception& e) {
      throw InvalidArgument(fmt::format("{}: row {}: {}", path.string(), i + 1, e.what()));
    }
  }
  return out;
}

}  // namespace censorlens::analytics
