#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "censorlens/category.hpp"

namespace censorlens::analytics {

/// Post ids assigned to one category, split by censorship status.
struct Membership {
  std::vector<std::string> censored;
  std::vector<std::string> uncensored;
};

using MembershipMap = std::map<Category, Membership>;

struct RateRow {
  Category category = Category::Other;
  std::size_t n_censored = 0;
  std::size_t n_uncensored = 0;
  double rate = 0.0;
};

struct RateTable {
  std::vector<RateRow> rows;
  /// One note per omitted category.
  std::vector<std::string> notes;
};

/// n_c / (n_c + n_u). Throws InvalidArgument when both counts are zero.
double censorship_rate(std::size_t n_censored, std::size_t n_uncensored);

/// One row per category with a non-empty total, in category order.
RateTable censorship_rate(const MembershipMap& membership);

/// A published row: counts and the percentage printed next to them.
struct PublishedRate {
  Category category = Category::Other;
  std::size_t n_censored = 0;
  std::size_t n_uncensored = 0;
  int printed_percent = 0;
};

/// The 14 reference rows used as a regression fixture for the formula.
const std::array<PublishedRate, kNumTopics>& published_rates();

struct RateCheck {
  PublishedRate published;
  double computed_percent = 0.0;
  /// |computed - printed| < tolerance_pp.
  bool consistent = true;
};

/// The default tolerance accepts any printed value that is the floor or
/// ceiling of the computed percentage.
inline constexpr double kRateTolerancePp = 1.0;

std::vector<RateCheck> check_published_rates(double tolerance_pp = kRateTolerancePp);

}  // namespace censorlens::analytics
