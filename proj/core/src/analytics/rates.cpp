#include "censorlens/analytics/rates.hpp"

#include <cmath>

#include <fmt/format.h>

#include "censorlens/error.hpp"

namespace censorlens::analytics {

double censorship_rate(std::size_t n_censored, std::size_t n_uncensored) {
  const std::size_t total = n_censored + n_uncensored;
  if (total == 0) throw InvalidArgument("censorship rate is undefined for an empty category");
  return static_cast<double>(n_censored) / static_cast<double>(total);
}

RateTable censorship_rate(const MembershipMap& membership) {
  RateTable table;
  for (auto c : all_categories()) {
    const auto it = membership.find(c);
    const std::size_t nc = it == membership.end() ? 0 : it->second.censored.size();
    const std::size_t nu = it == membership.end() ? 0 : it->second.uncensored.size();
    if (nc + nu == 0) {
      if (it != membership.end()) table.notes.push_back(fmt::format("{}: no posts, row omitted", display_name(c)));
      continue;
    }
    table.rows.push_back({c, nc, nu, censorship_rate(nc, nu)});
  }
  return table;
}

const std::array<PublishedRate, kNumTopics>& published_rates() {
  static const std::array<PublishedRate, kNumTopics> rows{{
      {Category::BoXilai, 665, 336, 64},
      {Category::DengXiaoping, 281, 125, 70},
      {Category::Fire, 431, 530, 45},
      {Category::InjuryDead, 1799, 1029, 51},
      {Category::LiuXiaobo, 184, 123, 60},
      {Category::MaoZedong, 1093, 486, 70},
      {Category::PeoplesCongress, 145, 113, 56},
      {Category::PolicemanMilitary, 1311, 927, 59},
      {Category::Protest, 536, 220, 71},
      {Category::PrurientNudity, 2664, 2551, 51},
      {Category::Rainstorm, 153, 207, 43},
      {Category::WinnieThePooh, 160, 177, 48},
      {Category::XiJinping, 1745, 1029, 63},
      {Category::ZhouKehua, 102, 134, 43},
  }};
  return rows;
}

std::vector<RateCheck> check_published_rates(double tolerance_pp) {
  std::vector<RateCheck> out;
  for (const auto& row : published_rates()) {
    const double pct = 100.0 * censorship_rate(row.n_censored, row.n_uncensored);
    out.push_back({row, pct, std::abs(pct - row.printed_percent) < tolerance_pp});
  }
  return out;
}

}  // namespace censorlens::analytics
