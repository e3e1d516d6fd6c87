#include "censorlens/analytics/report.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "censorlens/csv.hpp"
#include "censorlens/error.hpp"

namespace censorlens::analytics {

std::string format_p(double p) {
  if (std::isnan(p)) return "n/a";
  if (p < 0.005) return "<0.005";
  return fmt::format("{:.2f}", p);
}

std::string format_coefficient(double beta) {
  if (std::isnan(beta)) return "n/a";
  auto s = fmt::format("{:.2f}", beta);
  if (s == "-0.00") s = "0.00";
  return s;
}

Table rate_table(const RateTable& rates) {
  Table t{{"category", "censored", "uncensored", "rate_percent"}, {}};
  for (const auto& r : rates.rows) {
    t.rows.push_back({std::string(display_name(r.category)), std::to_string(r.n_censored),
                      std::to_string(r.n_uncensored), fmt::format("{:.1f}", 100.0 * r.rate)});
  }
  return t;
}

Table published_rate_check_table(const std::vector<RateCheck>& checks) {
  Table t{{"category", "censored", "uncensored", "printed_percent", "computed_percent", "status"}, {}};
  for (const auto& c : checks) {
    t.rows.push_back({std::string(display_name(c.published.category)), std::to_string(c.published.n_censored),
                      std::to_string(c.published.n_uncensored), std::to_string(c.published.printed_percent),
                      fmt::format("{:.1f}", c.computed_percent), c.consistent ? "consistent" : "UNRECONCILED"});
  }
  return t;
}

Table lifetime_table(const LifetimeTable& lifetimes) {
  Table t{{"category", "count", "min", "q1", "median", "q3", "max"}, {}};
  for (const auto& r : lifetimes.rows) {
    t.rows.push_back({std::string(display_name(r.category)), std::to_string(r.count), fmt::format("{:.1f}", r.min),
                      fmt::format("{:.1f}", r.q1), fmt::format("{:.1f}", r.median), fmt::format("{:.1f}", r.q3),
                      fmt::format("{:.1f}", r.max)});
  }
  return t;
}

Table creation_time_table(const std::vector<CreationTimeDistribution>& distributions) {
  Table t{{"category", "bucket_start", "censored", "uncensored"}, {}};
  for (const auto& d : distributions) {
    for (std::size_t k = 0; k < d.censored.counts.size(); ++k) {
      const auto start = d.censored.start + d.censored.bucket * static_cast<std::int64_t>(k);
      t.rows.push_back({std::string(display_name(d.category)), format_iso8601(start),
                        std::to_string(d.censored.counts[k]), std::to_string(d.uncensored.counts[k])});
    }
  }
  return t;
}

Table wald_table(const std::map<Category, CoxFit>& fits) {
  if (fits.empty()) throw InvalidArgument("wald table needs at least one fit");
  Table t;
  t.header.push_back("category");
  for (auto name : covariate_names()) {
    t.header.push_back(std::string(name) + "_coef");
    t.header.push_back(std::string(name) + "_p");
  }
  for (const auto& [c, fit] : fits) {
    std::vector<std::string> row{std::string(display_name(c))};
    for (auto name : covariate_names()) {
      const auto* term = fit.term(name);
      if (term && term->estimate) {
        row.push_back(format_coefficient(term->estimate->beta));
        row.push_back(format_p(term->estimate->p));
      } else {
        row.push_back("n/a");
        row.push_back("n/a");
      }
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

std::string render_text(const Table& table) {
  std::vector<std::size_t> width(table.header.size(), 0);
  auto widen = [&](const std::vector<std::string>& row) {
    for (std::size_t i = 0; i < row.size() && i < width.size(); ++i) width[i] = std::max(width[i], row[i].size());
  };
  widen(table.header);
  for (const auto& r : table.rows) widen(r);

  std::ostringstream out;
  auto emit = [&](const std::vector<std::string>& row) {
    for (std::size_t i = 0; i < width.size(); ++i) {
      const std::string cell = i < row.size() ? row[i] : "";
      if (i == 0) {
        out << fmt::format("{:<{}}", cell, width[i]);
      } else {
        out << "  " << fmt::format("{:>{}}", cell, width[i]);
      }
    }
    out << '\n';
  };
  emit(table.header);
  std::size_t total = 0;
  for (auto w : width) total += w;
  out << std::string(total + 2 * (width.empty() ? 0 : width.size() - 1), '-') << '\n';
  for (const auto& r : table.rows) emit(r);
  return out.str();
}

void write_csv(const std::filesystem::path& path, const Table& table) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << csv::join(table.header) << '\n';
  for (const auto& r : table.rows) out << csv::join(r) << '\n';
}

Table read_csv_table(const std::filesystem::path& path) {
  auto rows = csv::read_file(path);
  if (rows.empty()) throw InvalidArgument("empty table: " + path.string());
  Table t;
  t.header = std::move(rows.front());
  t.rows.assign(std::make_move_iterator(rows.begin() + 1), std::make_move_iterator(rows.end()));
  return t;
}

}  // namespace censorlens::analytics
