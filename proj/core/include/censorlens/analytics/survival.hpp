#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "censorlens/category.hpp"
#include "censorlens/corpus.hpp"
#include "censorlens/timeutil.hpp"

namespace censorlens::analytics {

enum class Covariate { ImageMatch, TextMatch, Reposts, Comments, Sentiment };

inline constexpr std::size_t kNumCovariates = 5;

std::string_view covariate_name(Covariate c);
const std::array<std::string_view, kNumCovariates>& covariate_names();

struct SurvivalRecord {
  std::string post_id;
  /// Minutes, > 0.
  double duration = 1.0;
  /// 1 = censored by the platform, 0 = right-censored observation.
  int event = 0;
  /// Indexed by Covariate.
  std::array<double, kNumCovariates> x{};

  double operator[](Covariate c) const { return x[static_cast<std::size_t>(c)]; }
};

struct SurvivalOptions {
  /// Caps follow-up at this many minutes after creation: a censoring later
  /// than the cap is treated as right-censored at the cap.
  std::optional<double> max_followup_minutes;
  /// Enter repost and comment counts as log1p(count).
  bool log1p_counts = false;
};

struct SurvivalBuild {
  std::vector<SurvivalRecord> records;
  std::vector<std::string> warnings;
};

/// Records for the posts assigned to `category` by either modality. Censored
/// posts contribute their lifetime with event = 1, Live posts the time to
/// `window_end` with event = 0, and VoluntaryOrUnknown posts are skipped.
/// Posts missing from `sentiment` get the neutral score with a warning.
/// Zero durations are clamped to one minute with a warning. Throws
/// InvalidArgument if a Live post was created after `window_end`.
SurvivalBuild build_survival_records(const corpus::Corpus& corpus, Category category,
                                     const std::map<std::string, Category>& image_decisions,
                                     const std::map<std::string, Category>& text_decisions,
                                     const std::map<std::string, double>& sentiment, Timestamp window_end,
                                     const SurvivalOptions& options = {});

/// Column order: post_id, duration, event, image_match, text_match, reposts,
/// comments, sentiment.
void write_survival_records(const std::filesystem::path& path, std::span<const SurvivalRecord> records);
std::vector<SurvivalRecord> read_survival_records(const std::filesystem::path& path);

}  // namespace censorlens::analytics
