#pragma once

#include <cstddef>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <vector>

#include "censorlens/analytics/kappa.hpp"
#include "censorlens/category.hpp"

namespace censorlens::review {

enum class Status { Pending, Accepted, Rejected, Disputed };

std::string_view to_string(Status s);
std::optional<Status> parse_status(std::string_view text);

struct RaterDecision {
  std::string rater;
  Category category = Category::Other;
};

/// One reviewable classifier output. The classifier fields never change;
/// the review fields are derived by replaying the decision log.
struct ReviewItem {
  std::string id;
  std::optional<std::string> image_path;
  std::optional<std::string> text;
  Category decision = Category::Other;
  double confidence = 0.0;
  std::optional<std::string> cam_path;

  Status status = Status::Pending;
  std::vector<RaterDecision> raters;
  std::optional<Category> expert;
  /// Set by triage; false means the item was rerouted to Other.
  std::optional<bool> triage_accepted;

  /// Final label of an accepted item.
  std::optional<Category> label() const;
};

/// Reads the classifier-output manifest: one JSON object per line with
/// id, decision, confidence and optional image_path, text and cam_path.
std::vector<ReviewItem> read_items(const std::filesystem::path& path);
void write_items(const std::filesystem::path& path, const std::vector<ReviewItem>& items);

enum class Order { AscendingConfidence, DescendingConfidence };

struct Page {
  std::vector<ReviewItem> items;
  std::size_t total = 0;
  std::size_t offset = 0;
};

struct ExportRow {
  std::string id;
  Category label = Category::Other;
  std::optional<std::string> image_path;
  std::optional<std::string> text;
};

/// Review state machine backed by an append-only JSON-lines log.
///
///   pending --rater--> pending (one vote) --rater--> accepted | disputed
///   disputed --expert--> accepted
///   pending --triage--> accepted | rejected
///
/// Actions on an item in the wrong state throw Conflict; unknown ids throw
/// NotFound; malformed input throws InvalidArgument. Log appends are
/// serialized by a single writer lock.
class ReviewStore {
 public:
  /// Replays `log_path` if it exists. Log entries naming unknown items or
  /// illegal transitions throw InvalidArgument.
  ReviewStore(std::vector<ReviewItem> items, std::filesystem::path log_path);

  std::vector<std::string> ids() const;
  ReviewItem get(std::string_view id) const;

  /// Status filter is optional; limit 0 means no limit.
  Page list(std::optional<Status> status, Order order, std::size_t offset = 0, std::size_t limit = 50) const;

  ReviewItem submit_decision(std::string_view id, std::string_view rater, Category category);
  ReviewItem submit_resolution(std::string_view id, Category category);
  ReviewItem submit_triage(std::string_view id, bool accept);

  /// Over items with two rater decisions; per item the raters are ordered
  /// by rater id.
  analytics::KappaResult kappa() const;

  /// Accepted items in id order. Rejected and unresolved items are excluded.
  std::vector<ExportRow> export_accepted() const;

  std::map<Status, std::size_t> counts() const;

  const std::filesystem::path& log_path() const { return log_path_; }

 private:
  ReviewItem& find(std::string_view id);
  const ReviewItem& find(std::string_view id) const;
  void apply(const std::string& line, bool from_log);
  void append(const std::string& line);

  std::vector<ReviewItem> items_;
  std::map<std::string, std::size_t, std::less<>> index_;
  std::filesystem::path log_path_;
  std::ofstream log_;
  std::size_t seq_ = 0;
  mutable std::shared_mutex mutex_;
};

/// Writes the export as CSV with columns id, category, image_path, text.
void write_export_csv(const std::filesystem::path& path, const std::vector<ExportRow>& rows);

}  // namespace censorlens::review
