#include "censorlens/textclf/ngram.hpp"

#include <algorithm>
#include <map>

#include "censorlens/error.hpp"

namespace censorlens::textclf {

NgramVocabulary::NgramVocabulary(std::vector<std::string> terms) : terms_(std::move(terms)) {
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    if (!index_.emplace(terms_[i], i).second) throw InvalidArgument("duplicate n-gram in vocabulary: " + terms_[i]);
  }
}

std::string NgramVocabulary::join(std::span<const std::string> tokens) {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i) out.push_back(' ');
    out += tokens[i];
  }
  return out;
}

NgramVocabulary NgramVocabulary::fit(std::span<const std::vector<std::string>> documents, std::size_t min_count) {
  std::map<std::string, std::size_t> counts;
  for (const auto& tokens : documents) {
    for (std::size_t i = 0; i < tokens.size(); ++i) {
      for (int n = 1; n <= kMaxOrder && i + n <= tokens.size(); ++n) {
        ++counts[join(std::span(tokens).subspan(i, n))];
      }
    }
  }
  std::vector<std::string> terms;
  for (auto& [term, count] : counts) {
    if (count >= min_count) terms.push_back(term);
  }
  return NgramVocabulary(std::move(terms));
}

std::optional<std::size_t> NgramVocabulary::find(const std::string& term) const {
  if (auto it = index_.find(term); it != index_.end()) return it->second;
  return std::nullopt;
}

FeatureVector NgramVocabulary::extract(std::span<const std::string> tokens) const {
  std::map<std::size_t, double> counts;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    for (int n = 1; n <= kMaxOrder && i + n <= tokens.size(); ++n) {
      if (auto idx = find(join(tokens.subspan(i, n)))) counts[*idx] += 1.0;
    }
  }
  return {counts.begin(), counts.end()};
}

}  // namespace censorlens::textclf
