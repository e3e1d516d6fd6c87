#pragma once

#include <filesystem>
#include <vector>

#include "censorlens/analytics/lifetimes.hpp"
#include "censorlens/analytics/rates.hpp"

namespace censorlens::app {

/// SVG charts for the analysis report.
void write_rate_chart(const std::filesystem::path& path, const analytics::RateTable& rates);
void write_lifetime_chart(const std::filesystem::path& path, const analytics::LifetimeTable& lifetimes);
void write_creation_time_chart(const std::filesystem::path& path,
                               const std::vector<analytics::CreationTimeDistribution>& distributions);

}  // namespace censorlens::app
