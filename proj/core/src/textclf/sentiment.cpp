#include "censorlens/textclf/sentiment.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include <httplib.h>
#include <nlohmann/json.hpp>
#include <spdlog/spdlog.h>

#include "censorlens/error.hpp"
#include "censorlens/textclf/ngram.hpp"

namespace censorlens::textclf {

double lexicon_score(std::size_t positive_hits, std::size_t negative_hits) {
  const double pos = static_cast<double>(positive_hits);
  const double neg = static_cast<double>(negative_hits);
  const double ratio = std::clamp((pos - neg) / std::max(1.0, pos + neg), -1.0, 1.0);
  return kNeutralSentiment + 2.0 * ratio;
}

LexiconSentiment::LexiconSentiment(std::vector<std::string> positive, std::vector<std::string> negative,
                                   std::shared_ptr<const Tokenizer> tokenizer)
    : tokenizer_(std::move(tokenizer)) {
  if (!tokenizer_) throw InvalidArgument("lexicon scorer needs a tokenizer");
  auto add = [&](const std::vector<std::string>& terms, std::unordered_set<std::string>& into) {
    for (const auto& term : terms) {
      const auto tokens = tokenizer_->tokenize(term);
      if (tokens.empty()) continue;
      max_terms_ = std::max(max_terms_, tokens.size());
      into.insert(NgramVocabulary::join(tokens));
    }
  };
  add(positive, positive_);
  add(negative, negative_);
}

namespace {

std::vector<std::string> read_terms(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read lexicon " + path.string());
  std::vector<std::string> terms;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    terms.push_back(line);
  }
  return terms;
}

}  // namespace

LexiconSentiment LexiconSentiment::from_files(const std::filesystem::path& positive,
                                              const std::filesystem::path& negative,
                                              std::shared_ptr<const Tokenizer> tokenizer) {
  return LexiconSentiment(read_terms(positive), read_terms(negative), std::move(tokenizer));
}

LexiconHits LexiconSentiment::hits(std::string_view text) const {
  LexiconHits h;
  const auto tokens = tokenizer_->tokenize(text);
  const std::span<const std::string> all(tokens);
  for (std::size_t n = 1; n <= max_terms_; ++n) {
    for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
      const auto key = NgramVocabulary::join(all.subspan(i, n));
      if (positive_.contains(key)) ++h.positive;
      if (negative_.contains(key)) ++h.negative;
    }
  }
  return h;
}

double LexiconSentiment::score(std::string_view text) const {
  const auto h = hits(text);
  return lexicon_score(h.positive, h.negative);
}

HttpSentimentClient::HttpSentimentClient(HttpSentimentConfig config,
                                         std::shared_ptr<const SentimentProvider> fallback)
    : config_(std::move(config)),
      fallback_(std::move(fallback)),
      slots_(static_cast<std::ptrdiff_t>(std::max<std::size_t>(1, config_.max_parallel))) {
  if (config_.endpoint.empty()) throw InvalidArgument("sentiment endpoint is empty");
  if (config_.retries < 0) throw InvalidArgument("retries must be >= 0");
  if (config_.on_failure == FailurePolicy::Lexicon && !fallback_) {
    throw InvalidArgument("lexicon fallback policy needs a fallback provider");
  }
}

std::size_t HttpSentimentClient::fallback_count() const {
  std::lock_guard lock(stats_mutex_);
  return fallbacks_;
}

double HttpSentimentClient::score(std::string_view text) const {
  struct SlotGuard {
    std::counting_semaphore<>& s;
    explicit SlotGuard(std::counting_semaphore<>& sem) : s(sem) { s.acquire(); }
    ~SlotGuard() { s.release(); }
  };

  std::string last_error = "no attempt made";
  {
    SlotGuard guard(slots_);
    httplib::Client client(config_.endpoint);
    const auto seconds = std::chrono::duration_cast<std::chrono::seconds>(config_.timeout);
    const auto micros = std::chrono::duration_cast<std::chrono::microseconds>(config_.timeout - seconds);
    client.set_connection_timeout(seconds.count(), micros.count());
    client.set_read_timeout(seconds.count(), micros.count());
    client.set_write_timeout(seconds.count(), micros.count());
    const std::string body = nlohmann::json{{"text", std::string(text)}}.dump(-1, ' ', false,
                                                                                nlohmann::json::error_handler_t::replace);
    for (int attempt = 0; attempt <= config_.retries; ++attempt) {
      auto res = client.Post(config_.path, body, "application/json");
      if (!res) {
        last_error = httplib::to_string(res.error());
        continue;
      }
      if (res->status != 200) {
        last_error = "HTTP " + std::to_string(res->status);
        continue;
      }
      const auto parsed = nlohmann::json::parse(res->body, nullptr, false);
      if (parsed.is_discarded() || !parsed.is_object() || !parsed.contains("score") || !parsed["score"].is_number()) {
        last_error = "malformed response body";
        continue;
      }
      const double s = parsed["score"].get<double>();
      if (!std::isfinite(s) || s < kMinSentiment || s > kMaxSentiment) {
        last_error = "score out of range";
        continue;
      }
      return s;
    }
  }

  if (config_.on_failure == FailurePolicy::Error) {
    throw Error("sentiment service failed after " + std::to_string(config_.retries + 1) + " attempts: " + last_error);
  }
  {
    std::lock_guard lock(stats_mutex_);
    ++fallbacks_;
  }
  spdlog::debug("sentiment service failed ({}); using lexicon fallback", last_error);
  return fallback_->score(text);
}

}  // namespace censorlens::textclf
