#include "censorlens/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>

#include <fmt/format.h>
#include <nlohmann/json.hpp>
#include <spdlog/spdlog.h>

#include "censorlens/error.hpp"
#include "censorlens/random.hpp"
#include "censorlens/text.hpp"

namespace censorlens::corpus {

using nlohmann::json;

std::string_view to_string(CensorshipStatus s) {
  switch (s) {
    case CensorshipStatus::Censored:
      return "censored";
    case CensorshipStatus::VoluntaryOrUnknown:
      return "voluntary_or_unknown";
    case CensorshipStatus::Live:
      return "live";
  }
  return "unknown";
}

const Post* Corpus::find(std::string_view id) const {
  for (const auto& p : posts) {
    if (p.id == id) return &p;
  }
  return nullptr;
}

namespace {

std::string require_string(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) throw InvalidArgument(fmt::format("missing field '{}'", key));
  if (!it->is_string()) throw InvalidArgument(fmt::format("field '{}' must be a string", key));
  return it->get<std::string>();
}

Timestamp require_time(const json& j, const char* key) {
  const std::string s = require_string(j, key);
  auto t = parse_iso8601(s);
  if (!t) throw InvalidArgument(fmt::format("field '{}' is not an ISO-8601 UTC timestamp: '{}'", key, s));
  return *t;
}

std::int64_t count_field(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return 0;
  if (!it->is_number_integer()) throw InvalidArgument(fmt::format("field '{}' must be an integer", key));
  const auto v = it->get<std::int64_t>();
  if (v < 0) throw InvalidArgument(fmt::format("field '{}' must be non-negative", key));
  return v;
}

}  // namespace

Post parse_post_record(std::string_view line) {
  json j;
  try {
    j = json::parse(line);
  } catch (const json::parse_error& e) {
    throw InvalidArgument(fmt::format("malformed JSON: {}", e.what()));
  }
  if (!j.is_object()) throw InvalidArgument("record is not a JSON object");

  Post p;
  p.id = require_string(j, "id");
  if (p.id.empty()) throw InvalidArgument("field 'id' is empty");
  p.user_id = j.contains("user_id") && j["user_id"].is_string() ? j["user_id"].get<std::string>() : "";
  if (auto it = j.find("text"); it != j.end() && !it->is_null()) {
    if (!it->is_string()) throw InvalidArgument("field 'text' must be a string");
    p.text = it->get<std::string>();
  }
  if (auto it = j.find("image_refs"); it != j.end() && !it->is_null()) {
    if (!it->is_array()) throw InvalidArgument("field 'image_refs' must be an array");
    for (const auto& ref : *it) {
      if (!ref.is_string()) throw InvalidArgument("image_refs entries must be strings");
      p.image_refs.push_back(ref.get<std::string>());
    }
  }
  p.created_at = require_time(j, "created_at");
  if (auto it = j.find("deleted_at"); it != j.end() && !it->is_null()) {
    p.deleted_at = require_time(j, "deleted_at");
  }
  if (auto it = j.find("deletion_message"); it != j.end() && !it->is_null()) {
    if (!it->is_string()) throw InvalidArgument("field 'deletion_message' must be a string");
    p.deletion_message = it->get<std::string>();
  }
  p.repost_count = count_field(j, "repost_count");
  p.comment_count = count_field(j, "comment_count");

  if (p.deleted_at && *p.deleted_at < p.created_at) {
    throw InvalidArgument("invariant violation: deleted_at precedes created_at");
  }
  if (p.deletion_message && !p.deleted_at) {
    throw InvalidArgument("invariant violation: deletion_message without deleted_at");
  }
  if (p.text.empty() && p.image_refs.empty()) {
    throw InvalidArgument("invariant violation: post has neither text nor images");
  }
  return p;
}

std::string to_record_line(const Post& p) {
  json j;
  j["id"] = p.id;
  j["user_id"] = p.user_id;
  j["text"] = p.text;
  j["image_refs"] = p.image_refs;
  j["created_at"] = format_iso8601(p.created_at);
  j["deleted_at"] = p.deleted_at ? json(format_iso8601(*p.deleted_at)) : json(nullptr);
  j["deletion_message"] = p.deletion_message ? json(*p.deletion_message) : json(nullptr);
  j["repost_count"] = p.repost_count;
  j["comment_count"] = p.comment_count;
  return j.dump();
}

void write_posts(const std::filesystem::path& path, const std::vector<Post>& posts) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  for (const auto& p : posts) out << to_record_line(p) << '\n';
}

void write_error_report(const std::filesystem::path& path, const std::vector<RecordError>& errors) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  for (const auto& e : errors) {
    out << json{{"line_no", e.line_no}, {"reason", e.reason}}.dump() << '\n';
  }
}

std::map<std::string, std::filesystem::path> scan_image_store(const std::filesystem::path& root) {
  std::map<std::string, std::filesystem::path> store;
  std::error_code ec;
  if (root.empty() || !std::filesystem::is_directory(root, ec)) return store;
  for (const auto& entry : std::filesystem::directory_iterator(root)) {
    if (!entry.is_regular_file()) continue;
    const auto& path = entry.path();
    if (!path.has_extension()) continue;
    store.emplace(path.stem().string(), path);
  }
  return store;
}

LoadResult load_posts(const std::filesystem::path& path, const std::filesystem::path& image_root,
                      const LoadOptions& options) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read post file " + path.string());

  LoadResult result;
  std::set<std::string> seen_ids;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    ++result.records;
    try {
      Post p = parse_post_record(line);
      if (options.window_start && p.created_at < *options.window_start) {
        throw InvalidArgument("created_at precedes window_start");
      }
      if (options.window_end && p.created_at > *options.window_end) {
        throw InvalidArgument("created_at is after window_end");
      }
      if (!seen_ids.insert(p.id).second) throw InvalidArgument("duplicate post id '" + p.id + "'");
      result.corpus.posts.push_back(std::move(p));
    } catch (const InvalidArgument& e) {
      result.errors.push_back({line_no, e.what()});
    }
  }
  if (in.bad()) throw IoError("read failure on " + path.string());

  auto& corpus = result.corpus;
  corpus.image_store = scan_image_store(image_root);
  for (const auto& p : corpus.posts) {
    for (const auto& ref : p.image_refs) {
      if (!corpus.image_store.contains(ref)) corpus.missing_images.insert(ref);
    }
  }
  if (!corpus.posts.empty()) {
    auto [lo, hi] = std::minmax_element(corpus.posts.begin(), corpus.posts.end(),
                                        [](const Post& a, const Post& b) { return a.created_at < b.created_at; });
    corpus.window_start = lo->created_at;
    // Without an explicit end, the last observed event closes the window.
    corpus.window_end = hi->created_at;
    for (const auto& p : corpus.posts) {
      if (p.deleted_at && *p.deleted_at > corpus.window_end) corpus.window_end = *p.deleted_at;
    }
  }
  if (options.window_start) corpus.window_start = *options.window_start;
  if (options.window_end) corpus.window_end = *options.window_end;
  if (!corpus.missing_images.empty()) {
    spdlog::warn("{} referenced image(s) missing from {}", corpus.missing_images.size(), image_root.string());
  }
  return result;
}

DeletionClassifier::DeletionClassifier() {
  add_alias("permission denied", CensorshipStatus::Censored);
  add_alias("weibo does not exist", CensorshipStatus::VoluntaryOrUnknown);
}

void DeletionClassifier::add_alias(std::string_view message, CensorshipStatus status) {
  table_[text::fold_ascii_whitespace_case(text::normalize_nfc(message))] = status;
}

DeletionClassifier::Result DeletionClassifier::classify(const std::optional<std::string>& message,
                                                        bool has_deleted_at) const {
  if (!has_deleted_at) {
    Result r{CensorshipStatus::Live, std::nullopt};
    if (message) r.warning = "deletion message present on a post without deleted_at; treated as live";
    return r;
  }
  if (!message) {
    return {CensorshipStatus::VoluntaryOrUnknown, "deleted post without a deletion message"};
  }
  const auto key = text::fold_ascii_whitespace_case(text::normalize_nfc(*message));
  if (auto it = table_.find(key); it != table_.end()) return {it->second, std::nullopt};
  return {CensorshipStatus::VoluntaryOrUnknown, "unrecognized deletion message: '" + *message + "'"};
}

CensorshipStatus classify_deletion(const std::optional<std::string>& message, bool has_deleted_at) {
  static const DeletionClassifier classifier;
  return classifier.classify(message, has_deleted_at).status;
}

CensorshipStatus status_of(const Post& post) {
  return classify_deletion(post.deletion_message, post.deleted_at.has_value());
}

std::optional<double> lifetime_minutes(const Post& post) {
  if (!post.deleted_at) return std::nullopt;
  return minutes_between(post.created_at, *post.deleted_at);
}

std::vector<Post> sample_uncensored(const Corpus& corpus, std::size_t n, std::uint64_t seed) {
  if (n == 0) throw InvalidArgument("sample size must be positive");
  std::vector<std::size_t> live;
  for (std::size_t i = 0; i < corpus.posts.size(); ++i) {
    if (status_of(corpus.posts[i]) == CensorshipStatus::Live) live.push_back(i);
  }
  if (live.size() < n) {
    throw InvalidArgument(fmt::format("requested {} uncensored posts but only {} are available", n, live.size()));
  }
  // Partial Fisher-Yates: the first n slots become a uniform sample.
  Rng rng(mix_seed(seed));
  for (std::size_t i = 0; i < n; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, live.size() - 1);
    std::swap(live[i], live[pick(rng)]);
  }
  live.resize(n);
  std::sort(live.begin(), live.end());
  std::vector<Post> out;
  out.reserve(n);
  for (auto i : live) out.push_back(corpus.posts[i]);
  return out;
}

std::map<Category, std::vector<std::string>> partition_by_keywords(
    const Corpus& corpus, const std::map<Category, std::vector<std::string>>& keyword_map) {
  std::map<Category, std::vector<std::string>> normalized;
  for (const auto& [category, keywords] : keyword_map) {
    if (keywords.empty()) {
      throw InvalidArgument(fmt::format("empty keyword list for category '{}'", display_name(category)));
    }
    auto& dst = normalized[category];
    for (const auto& k : keywords) {
      if (k.empty()) throw InvalidArgument("empty keyword");
      dst.push_back(text::fold_ascii_whitespace_case(text::normalize_nfc(k)));
    }
  }

  std::vector<std::size_t> order(corpus.posts.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const auto& pa = corpus.posts[a];
    const auto& pb = corpus.posts[b];
    return pa.created_at != pb.created_at ? pa.created_at < pb.created_at : pa.id < pb.id;
  });

  std::map<Category, std::vector<std::string>> out;
  for (const auto& [category, _] : normalized) out[category];
  for (auto i : order) {
    const auto& post = corpus.posts[i];
    const std::string body = text::fold_ascii_whitespace_case(text::normalize_nfc(post.text));
    for (const auto& [category, keywords] : normalized) {
      const bool hit = std::any_of(keywords.begin(), keywords.end(),
                                   [&](const std::string& k) { return body.find(k) != std::string::npos; });
      if (hit) out[category].push_back(post.id);
    }
  }
  return out;
}

}  // namespace censorlens::corpus
