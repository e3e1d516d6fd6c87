#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>

namespace censorlens::app {

/// An upstream stage has not produced the artifact a command needs.
class MissingDependency : public std::runtime_error {
 public:
  MissingDependency(std::string stage, const std::filesystem::path& artifact);
  const std::string& stage() const { return stage_; }

 private:
  std::string stage_;
};

/// Invalid flag combination detected after parsing; maps to the usage exit code.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Directory layout shared by all subcommands.
struct Workspace {
  std::filesystem::path root;

  std::filesystem::path ingest_dir() const { return root / "ingest"; }
  std::filesystem::path corpus_file() const { return ingest_dir() / "corpus.jsonl"; }
  std::filesystem::path ingest_summary() const { return ingest_dir() / "summary.json"; }
  std::filesystem::path models_dir() const { return root / "models"; }
  std::filesystem::path image_model() const { return models_dir() / "image.json"; }
  std::filesystem::path text_model() const { return models_dir() / "text.json"; }
  std::filesystem::path classify_dir() const { return root / "classify"; }
  std::filesystem::path decisions_file() const { return classify_dir() / "decisions.csv"; }
  std::filesystem::path classify_items() const { return classify_dir() / "items.jsonl"; }
  std::filesystem::path localize_dir() const { return root / "localize"; }
  std::filesystem::path localize_items() const { return localize_dir() / "items.jsonl"; }
  std::filesystem::path analysis_dir() const { return root / "analysis"; }
  std::filesystem::path review_dir() const { return root / "review"; }

  /// Throws MissingDependency naming `stage` when `artifact` does not exist.
  static void require(const std::filesystem::path& artifact, const std::string& stage);
};

}  // namespace censorlens::app
