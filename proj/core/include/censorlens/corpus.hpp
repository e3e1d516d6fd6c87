#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "censorlens/category.hpp"
#include "censorlens/timeutil.hpp"

namespace censorlens::corpus {

struct Post {
  std::string id;
  std::string user_id;
  std::string text;
  std::vector<std::string> image_refs;
  Timestamp created_at{};
  std::optional<Timestamp> deleted_at;
  std::optional<std::string> deletion_message;
  std::int64_t repost_count = 0;
  std::int64_t comment_count = 0;
};

enum class CensorshipStatus { Censored, VoluntaryOrUnknown, Live };

std::string_view to_string(CensorshipStatus s);

struct Corpus {
  std::vector<Post> posts;
  std::map<std::string, std::filesystem::path> image_store;
  /// Image ids referenced by some post but absent from the image root.
  std::set<std::string> missing_images;
  Timestamp window_start{};
  Timestamp window_end{};

  const Post* find(std::string_view id) const;
};

struct RecordError {
  std::size_t line_no = 0;
  std::string reason;
};

struct LoadOptions {
  std::optional<Timestamp> window_start;
  std::optional<Timestamp> window_end;
};

struct LoadResult {
  Corpus corpus;
  std::vector<RecordError> errors;
  /// Count of non-blank input lines, so posts + errors == records.
  std::size_t records = 0;
};

/// Reads a line-delimited JSON post file. Malformed records become entries in
/// `errors`; an unreadable file throws IoError. Image ids are resolved
/// against `<image_root>/<id>.<ext>`.
LoadResult load_posts(const std::filesystem::path& path,
                      const std::filesystem::path& image_root,
                      const LoadOptions& options = {});

/// Validates one JSON record. Throws InvalidArgument describing the first
/// violated field or invariant.
Post parse_post_record(std::string_view json_line);

std::string to_record_line(const Post& post);

void write_posts(const std::filesystem::path& path, const std::vector<Post>& posts);
void write_error_report(const std::filesystem::path& path, const std::vector<RecordError>& errors);

/// Scans a directory for `<image_id>.<ext>` files.
std::map<std::string, std::filesystem::path> scan_image_store(const std::filesystem::path& root);

/// Maps platform deletion messages onto censorship status. Matching is
/// case-insensitive after whitespace normalization. Only messages mapped to
/// Censored count as censorship; anything unrecognized is treated as
/// VoluntaryOrUnknown and reported through `warning`.
class DeletionClassifier {
 public:
  struct Result {
    CensorshipStatus status = CensorshipStatus::Live;
    std::optional<std::string> warning;
  };

  /// Default table: "permission denied" -> Censored,
  /// "weibo does not exist" -> VoluntaryOrUnknown.
  DeletionClassifier();

  void add_alias(std::string_view message, CensorshipStatus status);

  Result classify(const std::optional<std::string>& message, bool has_deleted_at) const;

 private:
  std::map<std::string, CensorshipStatus> table_;
};

CensorshipStatus classify_deletion(const std::optional<std::string>& message, bool has_deleted_at);

CensorshipStatus status_of(const Post& post);

std::optional<double> lifetime_minutes(const Post& post);

/// Uniform random subset of Live posts, ordered by position in the corpus.
/// Throws InvalidArgument naming the available count when fewer than n exist.
std::vector<Post> sample_uncensored(const Corpus& corpus, std::size_t n, std::uint64_t seed);

/// Post ids whose NFC-normalized, ASCII-case-folded text contains at least one keyword of the
/// category. A post may appear under several categories; ids are ordered by
/// created_at (then id). Throws InvalidArgument on an empty keyword list.
std::map<Category, std::vector<std::string>> partition_by_keywords(
    const Corpus& corpus, const std::map<Category, std::vector<std::string>>& keyword_map);

}  // namespace censorlens::corpus
