#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace censorlens::textclf {

/// Sparse counts sorted by feature index.
using FeatureVector = std::vector<std::pair<std::size_t, double>>;

/// Frozen mapping from contiguous 1-, 2- and 3-grams to dense indices.
/// Terms are stored with tokens joined by a single space and indexed in
/// lexicographic order.
class NgramVocabulary {
 public:
  static constexpr int kMaxOrder = 3;

  NgramVocabulary() = default;
  explicit NgramVocabulary(std::vector<std::string> terms);

  /// Keeps n-grams whose total corpus frequency is at least `min_count`.
  static NgramVocabulary fit(std::span<const std::vector<std::string>> documents, std::size_t min_count = 2);

  std::size_t size() const { return terms_.size(); }
  const std::vector<std::string>& terms() const { return terms_; }
  std::optional<std::size_t> find(const std::string& term) const;

  /// Counts every in-vocabulary n-gram of the token sequence.
  FeatureVector extract(std::span<const std::string> tokens) const;

  static std::string join(std::span<const std::string> tokens);

 private:
  std::vector<std::string> terms_;
  std::unordered_map<std::string, std::size_t> index_;
};

}  // namespace censorlens::textclf
