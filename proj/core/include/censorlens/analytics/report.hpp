#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "censorlens/analytics/cox.hpp"
#include "censorlens/analytics/lifetimes.hpp"
#include "censorlens/analytics/rates.hpp"

namespace censorlens::analytics {

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

/// "<0.005" below 0.005, otherwise two decimals.
std::string format_p(double p);
/// Two decimals, never "-0.00".
std::string format_coefficient(double beta);

/// Category, censored, uncensored, rate (%).
Table rate_table(const RateTable& rates);
/// Published rows with the recomputed percentage and a consistency flag.
Table published_rate_check_table(const std::vector<RateCheck>& checks);
Table lifetime_table(const LifetimeTable& lifetimes);
Table creation_time_table(const std::vector<CreationTimeDistribution>& distributions);

/// Per category a coefficient and p column for each covariate. Absent
/// estimates render as "n/a". Throws InvalidArgument on an empty map.
Table wald_table(const std::map<Category, CoxFit>& fits);

/// Fixed-width text rendering with a header rule.
std::string render_text(const Table& table);
void write_csv(const std::filesystem::path& path, const Table& table);
Table read_csv_table(const std::filesystem::path& path);

}  // namespace censorlens::analytics
