#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace censorlens::textclf {

/// Maps text to an ordered token list. Implementations must be deterministic
/// and return an empty list for empty input.
class Tokenizer {
 public:
  virtual ~Tokenizer() = default;
  virtual std::vector<std::string> tokenize(std::string_view text) const = 0;
};

/// NFC-normalizes, splits on whitespace and punctuation, lowercases ASCII,
/// and turns each run of CJK ideographs into overlapping character bigrams
/// (a lone ideograph becomes a unigram).
class DefaultTokenizer final : public Tokenizer {
 public:
  std::vector<std::string> tokenize(std::string_view text) const override;
};

std::shared_ptr<const Tokenizer> default_tokenizer();

}  // namespace censorlens::textclf
