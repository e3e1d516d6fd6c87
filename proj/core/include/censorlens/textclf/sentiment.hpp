#pragma once

#include <chrono>
#include <cstddef>
#include <filesystem>
#include <memory>
#include <mutex>
#include <semaphore>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "censorlens/textclf/tokenizer.hpp"

namespace censorlens::textclf {

inline constexpr double kMinSentiment = 0.0;
inline constexpr double kMaxSentiment = 4.0;
inline constexpr double kNeutralSentiment = 2.0;

/// Text to a score in [0, 4]; 0 is very negative, 4 very positive.
/// Implementations must be safe for concurrent calls.
class SentimentProvider {
 public:
  virtual ~SentimentProvider() = default;
  virtual double score(std::string_view text) const = 0;
};

/// 2 + 2 * clamp((pos - neg) / max(1, pos + neg), -1, 1).
double lexicon_score(std::size_t positive_hits, std::size_t negative_hits);

struct LexiconHits {
  std::size_t positive = 0;
  std::size_t negative = 0;
};

/// Counts lexicon terms in the token stream. A multi-token term matches a
/// contiguous run of tokens produced by the same tokenizer.
class LexiconSentiment final : public SentimentProvider {
 public:
  LexiconSentiment(std::vector<std::string> positive, std::vector<std::string> negative,
                   std::shared_ptr<const Tokenizer> tokenizer = default_tokenizer());

  /// One term per line; blank lines and lines starting with '#' are skipped.
  static LexiconSentiment from_files(const std::filesystem::path& positive, const std::filesystem::path& negative,
                                     std::shared_ptr<const Tokenizer> tokenizer = default_tokenizer());

  LexiconHits hits(std::string_view text) const;
  double score(std::string_view text) const override;

 private:
  std::shared_ptr<const Tokenizer> tokenizer_;
  std::unordered_set<std::string> positive_;
  std::unordered_set<std::string> negative_;
  std::size_t max_terms_ = 1;
};

enum class FailurePolicy { Error, Lexicon };

struct HttpSentimentConfig {
  /// scheme://host:port, e.g. http://127.0.0.1:9000
  std::string endpoint;
  std::string path = "/sentiment";
  std::chrono::milliseconds timeout{2000};
  int retries = 2;
  std::size_t max_parallel = 4;
  FailurePolicy on_failure = FailurePolicy::Lexicon;
};

/// Client for an external scorer. Request body {"text": ...}, response body
/// {"score": x} with x in [0, 4]. A timeout, transport error, non-200 status,
/// malformed body or out-of-range score counts as a failed attempt. After
/// all retries fail the call throws Error or falls back to the lexicon.
class HttpSentimentClient final : public SentimentProvider {
 public:
  HttpSentimentClient(HttpSentimentConfig config, std::shared_ptr<const SentimentProvider> fallback);

  double score(std::string_view text) const override;

  std::size_t fallback_count() const;

 private:
  HttpSentimentConfig config_;
  std::shared_ptr<const SentimentProvider> fallback_;
  mutable std::counting_semaphore<> slots_;
  mutable std::mutex stats_mutex_;
  mutable std::size_t fallbacks_ = 0;
};

}  // namespace censorlens::textclf
