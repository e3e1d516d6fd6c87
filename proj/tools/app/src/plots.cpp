#include "censorlens/app/plots.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "censorlens/error.hpp"

namespace censorlens::app {
namespace {

constexpr int kWidth = 900;
constexpr int kRowHeight = 26;
constexpr int kLabelWidth = 190;
constexpr int kMargin = 20;

std::string escape_xml(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&':
        out += "&amp;";
        break;
      case '<':
        out += "&lt;";
        break;
      case '>':
        out += "&gt;";
        break;
      case '"':
        out += "&quot;";
        break;
      default:
        out += c;
    }
  }
  return out;
}

void save(const std::filesystem::path& path, int height, const std::string& body, std::string_view title) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << fmt::format(R"(<svg xmlns="http://www.w3.org/2000/svg" width="{}" height="{}" font-family="sans-serif" font-size="12">)",
                     kWidth, height)
      << '\n'
      << fmt::format(R"(<rect width="100%" height="100%" fill="white"/><text x="{}" y="16" font-size="14">{}</text>)",
                     kMargin, escape_xml(title))
      << '\n'
      << body << "</svg>\n";
}

}  // namespace

void write_rate_chart(const std::filesystem::path& path, const analytics::RateTable& rates) {
  std::ostringstream body;
  const int plot_w = kWidth - kLabelWidth - 2 * kMargin - 50;
  int y = 30;
  for (const auto& r : rates.rows) {
    const int w = static_cast<int>(r.rate * plot_w);
    body << fmt::format(R"(<text x="{}" y="{}">{}</text>)", kMargin, y + 16, escape_xml(display_name(r.category)))
         << fmt::format(R"(<rect x="{}" y="{}" width="{}" height="{}" fill="#c0392b"/>)", kLabelWidth, y + 4, w,
                        kRowHeight - 8)
         << fmt::format(R"(<text x="{}" y="{}">{:.1f}%</text>)", kLabelWidth + w + 6, y + 16, 100.0 * r.rate) << '\n';
    y += kRowHeight;
  }
  save(path, y + kMargin, body.str(), "Censorship rate per category");
}

void write_lifetime_chart(const std::filesystem::path& path, const analytics::LifetimeTable& lifetimes) {
  double hi = 1.0;
  for (const auto& r : lifetimes.rows) hi = std::max(hi, r.max);
  const int plot_w = kWidth - kLabelWidth - 2 * kMargin - 60;
  auto px = [&](double v) { return kLabelWidth + static_cast<int>(v / hi * plot_w); };

  std::ostringstream body;
  int y = 30;
  for (const auto& r : lifetimes.rows) {
    const int mid = y + kRowHeight / 2;
    body << fmt::format(R"(<text x="{}" y="{}">{}</text>)", kMargin, y + 16, escape_xml(display_name(r.category)))
         << fmt::format(R"(<line x1="{}" x2="{}" y1="{}" y2="{}" stroke="black"/>)", px(r.min), px(r.max), mid, mid)
         << fmt::format(R"(<rect x="{}" y="{}" width="{}" height="{}" fill="#5dade2" stroke="black"/>)", px(r.q1),
                        y + 5, std::max(1, px(r.q3) - px(r.q1)), kRowHeight - 10)
         << fmt::format(R"(<line x1="{0}" x2="{0}" y1="{1}" y2="{2}" stroke="black" stroke-width="2"/>)", px(r.median),
                        y + 5, y + kRowHeight - 5)
         << fmt::format(R"(<text x="{}" y="{}">{:.0f} min</text>)", px(r.max) + 6, y + 16, r.median) << '\n';
    y += kRowHeight;
  }
  body << fmt::format(R"(<text x="{}" y="{}">0</text><text x="{}" y="{}">{:.0f} min</text>)", kLabelWidth, y + 14,
                      kLabelWidth + plot_w - 20, y + 14, hi);
  save(path, y + 2 * kMargin, body.str(), "Lifetime of censored posts (min, quartiles, max; label = median)");
}

void write_creation_time_chart(const std::filesystem::path& path,
                               const std::vector<analytics::CreationTimeDistribution>& distributions) {
  std::vector<std::size_t> censored, uncensored;
  for (const auto& d : distributions) {
    censored.resize(std::max(censored.size(), d.censored.counts.size()), 0);
    uncensored.resize(std::max(uncensored.size(), d.uncensored.counts.size()), 0);
    for (std::size_t k = 0; k < d.censored.counts.size(); ++k) censored[k] += d.censored.counts[k];
    for (std::size_t k = 0; k < d.uncensored.counts.size(); ++k) uncensored[k] += d.uncensored.counts[k];
  }
  const int plot_h = 300;
  const int plot_w = kWidth - 2 * kMargin - 40;
  std::size_t hi = 1;
  for (auto v : censored) hi = std::max(hi, v);
  for (auto v : uncensored) hi = std::max(hi, v);
  auto polyline = [&](const std::vector<std::size_t>& values, std::string_view color) {
    std::string pts;
    const auto n = std::max<std::size_t>(values.size(), 2);
    for (std::size_t k = 0; k < values.size(); ++k) {
      const int x = kMargin + 40 + static_cast<int>(static_cast<double>(k) / static_cast<double>(n - 1) * plot_w);
      const int y = 30 + plot_h - static_cast<int>(static_cast<double>(values[k]) / static_cast<double>(hi) * plot_h);
      pts += fmt::format("{},{} ", x, y);
    }
    return fmt::format(R"(<polyline points="{}" fill="none" stroke="{}" stroke-width="2"/>)", pts, color);
  };
  std::ostringstream body;
  body << fmt::format(R"(<line x1="{0}" x2="{0}" y1="30" y2="{1}" stroke="black"/>)", kMargin + 40, 30 + plot_h)
       << fmt::format(R"(<line x1="{0}" x2="{1}" y1="{2}" y2="{2}" stroke="black"/>)", kMargin + 40,
                      kMargin + 40 + plot_w, 30 + plot_h)
       << fmt::format(R"(<text x="{}" y="40">{}</text>)", kMargin, hi) << polyline(censored, "#c0392b")
       << polyline(uncensored, "#2471a3")
       << fmt::format(R"(<text x="{}" y="{}" fill="#c0392b">censored</text>)", kMargin + 50, plot_h + 55)
       << fmt::format(R"(<text x="{}" y="{}" fill="#2471a3">uncensored</text>)", kMargin + 150, plot_h + 55) << '\n';
  save(path, plot_h + 80, body.str(), "Post creation time, all topic categories (posts per bucket)");
}

}  // namespace censorlens::app
