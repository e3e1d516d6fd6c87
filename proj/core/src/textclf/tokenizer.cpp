#include "censorlens/textclf/tokenizer.hpp"

#include "censorlens/text.hpp"

namespace censorlens::textclf {
namespace {

bool is_cjk(char32_t cp) {
  return (cp >= 0x4E00 && cp <= 0x9FFF) || (cp >= 0x3400 && cp <= 0x4DBF) || (cp >= 0xF900 && cp <= 0xFAFF) ||
         (cp >= 0x20000 && cp <= 0x2FA1F);
}

bool is_separator(char32_t cp) {
  if (cp < 0x80) {
    return !((cp >= '0' && cp <= '9') || (cp >= 'a' && cp <= 'z') || (cp >= 'A' && cp <= 'Z') || cp == '_');
  }
  return (cp >= 0x2000 && cp <= 0x206F) ||  // general punctuation and spaces
         (cp >= 0x3000 && cp <= 0x303F) ||  // CJK symbols and punctuation
         (cp >= 0xFF01 && cp <= 0xFF0F) || (cp >= 0xFF1A && cp <= 0xFF20) || (cp >= 0xFF3B && cp <= 0xFF40) ||
         (cp >= 0xFF5B && cp <= 0xFF65) || cp == 0x00A0 || cp == 0xFFFD || cp == 0x00B7;
}

}  // namespace

std::vector<std::string> DefaultTokenizer::tokenize(std::string_view input) const {
  std::vector<std::string> tokens;
  if (input.empty()) return tokens;
  const auto cps = text::decode_utf8(text::normalize_nfc(input));

  std::string word;
  std::vector<char32_t> cjk_run;
  auto flush_word = [&] {
    if (!word.empty()) tokens.push_back(std::move(word));
    word.clear();
  };
  auto flush_cjk = [&] {
    if (cjk_run.size() == 1) {
      std::string t;
      text::append_utf8(t, cjk_run[0]);
      tokens.push_back(std::move(t));
    }
    for (std::size_t i = 0; i + 1 < cjk_run.size(); ++i) {
      std::string t;
      text::append_utf8(t, cjk_run[i]);
      text::append_utf8(t, cjk_run[i + 1]);
      tokens.push_back(std::move(t));
    }
    cjk_run.clear();
  };

  for (char32_t cp : cps) {
    if (is_separator(cp)) {
      flush_word();
      flush_cjk();
    } else if (is_cjk(cp)) {
      flush_word();
      cjk_run.push_back(cp);
    } else {
      flush_cjk();
      if (cp >= 'A' && cp <= 'Z') cp = cp - 'A' + 'a';
      text::append_utf8(word, cp);
    }
  }
  flush_word();
  flush_cjk();
  return tokens;
}

std::shared_ptr<const Tokenizer> default_tokenizer() {
  static const auto instance = std::make_shared<const DefaultTokenizer>();
  return instance;
}

}  // namespace censorlens::textclf
