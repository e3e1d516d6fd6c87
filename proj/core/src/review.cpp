#include "censorlens/review.hpp"

#include <algorithm>
#include <chrono>
#include <mutex>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "censorlens/csv.hpp"
#include "censorlens/error.hpp"
#include "censorlens/timeutil.hpp"

namespace censorlens::review {

using nlohmann::json;

std::string_view to_string(Status s) {
  switch (s) {
    case Status::Pending:
      return "pending";
    case Status::Accepted:
      return "accepted";
    case Status::Rejected:
      return "rejected";
    case Status::Disputed:
      return "disputed";
  }
  return "pending";
}

std::optional<Status> parse_status(std::string_view text) {
  for (auto s : {Status::Pending, Status::Accepted, Status::Rejected, Status::Disputed}) {
    if (to_string(s) == text) return s;
  }
  return std::nullopt;
}

std::optional<Category> ReviewItem::label() const {
  if (status != Status::Accepted) return std::nullopt;
  if (expert) return expert;
  if (raters.size() == 2 && raters[0].category == raters[1].category) return raters[0].category;
  if (triage_accepted && *triage_accepted) return decision;
  return std::nullopt;
}

std::vector<ReviewItem> read_items(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read review items " + path.string());
  std::vector<ReviewItem> items;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const auto j = json::parse(line);
      ReviewItem item;
      item.id = j.at("id").get<std::string>();
      item.decision = category_from_string(j.at("decision").get<std::string>());
      item.confidence = j.at("confidence").get<double>();
      if (j.contains("image_path") && !j["image_path"].is_null()) item.image_path = j["image_path"].get<std::string>();
      if (j.contains("text") && !j["text"].is_null()) item.text = j["text"].get<std::string>();
      if (j.contains("cam_path") && !j["cam_path"].is_null()) item.cam_path = j["cam_path"].get<std::string>();
      if (item.id.empty()) throw InvalidArgument("empty id");
      items.push_back(std::move(item));
    } catch (const std::exception& e) {
      throw InvalidArgument(fmt::format("{}:{}: {}", path.string(), line_no, e.what()));
    }
  }
  return items;
}

void write_items(const std::filesystem::path& path, const std::vector<ReviewItem>& items) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  for (const auto& item : items) {
    json j;
    j["id"] = item.id;
    j["decision"] = std::string(display_name(item.decision));
    j["confidence"] = item.confidence;
    j["image_path"] = item.image_path ? json(*item.image_path) : json(nullptr);
    j["text"] = item.text ? json(*item.text) : json(nullptr);
    j["cam_path"] = item.cam_path ? json(*item.cam_path) : json(nullptr);
    out << j.dump(-1, ' ', false, json::error_handler_t::replace) << '\n';
  }
}

namespace {

/// Returns the item after the event, or throws without touching it.
ReviewItem transition(const ReviewItem& item, const json& event) {
  ReviewItem next = item;
  const auto type = event.at("type").get<std::string>();
  if (type == "decision") {
    const auto rater = event.at("rater").get<std::string>();
    const auto category = category_from_string(event.at("category").get<std::string>());
    if (rater.empty()) throw InvalidArgument("rater id must be non-empty");
    if (item.status != Status::Pending || item.triage_accepted) {
      throw Conflict(fmt::format("item {} is {}; rater decisions need a pending item", item.id, to_string(item.status)));
    }
    for (const auto& r : item.raters) {
      if (r.rater == rater) throw Conflict(fmt::format("rater {} already labeled item {}", rater, item.id));
    }
    next.raters.push_back({rater, category});
    if (next.raters.size() == 2) {
      next.status = next.raters[0].category == next.raters[1].category ? Status::Accepted : Status::Disputed;
    }
  } else if (type == "resolution") {
    const auto category = category_from_string(event.at("category").get<std::string>());
    if (item.status != Status::Disputed) {
      throw Conflict(fmt::format("item {} is {}; only disputed items take an expert resolution", item.id,
                                 to_string(item.status)));
    }
    next.expert = category;
    next.status = Status::Accepted;
  } else if (type == "triage") {
    const bool accept = event.at("accept").get<bool>();
    if (item.status != Status::Pending || !item.raters.empty()) {
      throw Conflict(fmt::format("item {} is {} or under annotation; triage needs an untouched pending item", item.id,
                                 to_string(item.status)));
    }
    next.triage_accepted = accept;
    next.status = accept ? Status::Accepted : Status::Rejected;
  } else {
    throw InvalidArgument("unknown review event type '" + type + "'");
  }
  return next;
}

}  // namespace

ReviewStore::ReviewStore(std::vector<ReviewItem> items, std::filesystem::path log_path)
    : items_(std::move(items)), log_path_(std::move(log_path)) {
  for (std::size_t i = 0; i < items_.size(); ++i) {
    auto& item = items_[i];
    item.status = Status::Pending;
    item.raters.clear();
    item.expert.reset();
    item.triage_accepted.reset();
    if (!index_.emplace(item.id, i).second) throw InvalidArgument("duplicate review item id " + item.id);
  }
  if (std::filesystem::exists(log_path_)) {
    std::ifstream in(log_path_);
    if (!in) throw IoError("cannot read review log " + log_path_.string());
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      try {
        apply(line, true);
      } catch (const std::exception& e) {
        throw InvalidArgument(fmt::format("{}:{}: {}", log_path_.string(), line_no, e.what()));
      }
    }
  } else if (log_path_.has_parent_path()) {
    std::filesystem::create_directories(log_path_.parent_path());
  }
  log_.open(log_path_, std::ios::app);
  if (!log_) throw IoError("cannot open review log " + log_path_.string());
}

ReviewItem& ReviewStore::find(std::string_view id) {
  const auto it = index_.find(id);
  if (it == index_.end()) throw NotFound(fmt::format("unknown review item '{}'", id));
  return items_[it->second];
}

const ReviewItem& ReviewStore::find(std::string_view id) const {
  const auto it = index_.find(id);
  if (it == index_.end()) throw NotFound(fmt::format("unknown review item '{}'", id));
  return items_[it->second];
}

void ReviewStore::apply(const std::string& line, bool from_log) {
  const auto event = json::parse(line);
  auto& item = find(event.at("item").get<std::string>());
  auto next = transition(item, event);
  if (!from_log) append(line);
  item = std::move(next);
  ++seq_;
}

void ReviewStore::append(const std::string& line) {
  log_ << line << '\n';
  log_.flush();
  if (!log_) throw IoError("failed to append to review log " + log_path_.string());
}

std::vector<std::string> ReviewStore::ids() const {
  std::shared_lock lock(mutex_);
  std::vector<std::string> out;
  for (const auto& item : items_) out.push_back(item.id);
  return out;
}

ReviewItem ReviewStore::get(std::string_view id) const {
  std::shared_lock lock(mutex_);
  return find(id);
}

Page ReviewStore::list(std::optional<Status> status, Order order, std::size_t offset, std::size_t limit) const {
  std::shared_lock lock(mutex_);
  std::vector<const ReviewItem*> selected;
  for (const auto& item : items_) {
    if (!status || item.status == *status) selected.push_back(&item);
  }
  std::stable_sort(selected.begin(), selected.end(), [&](const ReviewItem* a, const ReviewItem* b) {
    if (a->confidence != b->confidence) {
      return order == Order::AscendingConfidence ? a->confidence < b->confidence : a->confidence > b->confidence;
    }
    return a->id < b->id;
  });
  Page page;
  page.total = selected.size();
  page.offset = offset;
  const std::size_t end = limit == 0 ? selected.size() : std::min(selected.size(), offset + limit);
  for (std::size_t i = offset; i < end; ++i) page.items.push_back(*selected[i]);
  return page;
}

namespace {

std::string event_line(std::size_t seq, json event) {
  event["seq"] = seq;
  event["at"] = format_iso8601(std::chrono::time_point_cast<std::chrono::seconds>(std::chrono::system_clock::now()));
  return event.dump(-1, ' ', false, json::error_handler_t::replace);
}

}  // namespace

ReviewItem ReviewStore::submit_decision(std::string_view id, std::string_view rater, Category category) {
  std::unique_lock lock(mutex_);
  apply(event_line(seq_, {{"type", "decision"},
                          {"item", std::string(id)},
                          {"rater", std::string(rater)},
                          {"category", std::string(slug(category))}}),
        false);
  return find(id);
}

ReviewItem ReviewStore::submit_resolution(std::string_view id, Category category) {
  std::unique_lock lock(mutex_);
  apply(event_line(seq_, {{"type", "resolution"}, {"item", std::string(id)}, {"category", std::string(slug(category))}}),
        false);
  return find(id);
}

ReviewItem ReviewStore::submit_triage(std::string_view id, bool accept) {
  std::unique_lock lock(mutex_);
  apply(event_line(seq_, {{"type", "triage"}, {"item", std::string(id)}, {"accept", accept}}), false);
  return find(id);
}

analytics::KappaResult ReviewStore::kappa() const {
  std::shared_lock lock(mutex_);
  std::vector<Category> a, b;
  for (const auto& item : items_) {
    if (item.raters.size() != 2) continue;
    const bool swap = item.raters[1].rater < item.raters[0].rater;
    a.push_back(item.raters[swap ? 1 : 0].category);
    b.push_back(item.raters[swap ? 0 : 1].category);
  }
  if (a.empty()) return {};
  return analytics::cohens_kappa<Category>(a, b);
}

std::vector<ExportRow> ReviewStore::export_accepted() const {
  std::shared_lock lock(mutex_);
  std::vector<ExportRow> rows;
  for (const auto& item : items_) {
    if (auto label = item.label()) rows.push_back({item.id, *label, item.image_path, item.text});
  }
  std::sort(rows.begin(), rows.end(), [](const ExportRow& x, const ExportRow& y) { return x.id < y.id; });
  return rows;
}

std::map<Status, std::size_t> ReviewStore::counts() const {
  std::shared_lock lock(mutex_);
  std::map<Status, std::size_t> out{{Status::Pending, 0}, {Status::Accepted, 0}, {Status::Rejected, 0},
                                    {Status::Disputed, 0}};
  for (const auto& item : items_) ++out[item.status];
  return out;
}

void write_export_csv(const std::filesystem::path& path, const std::vector<ExportRow>& rows) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << "id,category,image_path,text\n";
  for (const auto& r : rows) {
    out << csv::join({r.id, std::string(slug(r.label)), r.image_path.value_or(""), r.text.value_or("")}) << '\n';
  }
}

}  // namespace censorlens::review
