#pragma once

#include <atomic>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <string>
#include <vector>

#include <unistd.h>

#include "censorlens/analytics/survival.hpp"
#include "censorlens/synth.hpp"

namespace fixture {

/// Unique scratch directory removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag = "t") {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("censorlens_" + tag + "_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

inline void write_text(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream(path) << content;
}

inline std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

/// Survival records of all 14 topics under the oracle classifier, with
/// follow-up capped at the generator horizon.
inline std::vector<censorlens::analytics::SurvivalRecord> pooled_oracle_records(
    const censorlens::synth::GeneratedCorpus& g, const censorlens::synth::GeneratorConfig& config) {
  const auto oracle = censorlens::synth::oracle_classifier(g.truth);
  censorlens::analytics::SurvivalOptions opts;
  opts.max_followup_minutes = config.horizon_minutes;
  std::vector<censorlens::analytics::SurvivalRecord> pooled;
  for (auto c : censorlens::topic_categories()) {
    auto built = censorlens::analytics::build_survival_records(g.corpus, c, oracle.image, oracle.text,
                                                               oracle.sentiment, config.window_end(), opts);
    pooled.insert(pooled.end(), built.records.begin(), built.records.end());
  }
  return pooled;
}

}  // namespace fixture
