#include "censorlens/category.hpp"

#include <algorithm>
#include <cctype>

#include "censorlens/error.hpp"

namespace censorlens {
namespace {

struct Names {
  std::string_view display;
  std::string_view slug;
};

constexpr std::array<Names, kNumCategories> kNames{{
    {"Bo Xilai", "bo_xilai"},
    {"Deng Xiaoping", "deng_xiaoping"},
    {"Fire", "fire"},
    {"Injury/Dead", "injury_dead"},
    {"Liu Xiaobo", "liu_xiaobo"},
    {"Mao Zedong", "mao_zedong"},
    {"People's Congress", "peoples_congress"},
    {"Policeman/Military", "policeman_military"},
    {"Protest", "protest"},
    {"Prurient/Nudity", "prurient_nudity"},
    {"Rainstorm", "rainstorm"},
    {"Winnie the Pooh", "winnie_the_pooh"},
    {"Xi Jinping", "xi_jinping"},
    {"Zhou Kehua", "zhou_kehua"},
    {"Other", "other"},
}};

bool iequals(std::string_view a, std::string_view b) {
  return a.size() == b.size() &&
         std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
           return std::tolower(static_cast<unsigned char>(x)) ==
                  std::tolower(static_cast<unsigned char>(y));
         });
}

}  // namespace

Category category_at(std::size_t i) {
  if (i >= kNumCategories) {
    throw InvalidArgument("category index out of range: " + std::to_string(i));
  }
  return static_cast<Category>(i);
}

const std::array<Category, kNumCategories>& all_categories() {
  static const auto all = [] {
    std::array<Category, kNumCategories> a{};
    for (std::size_t i = 0; i < kNumCategories; ++i) a[i] = static_cast<Category>(i);
    return a;
  }();
  return all;
}

const std::array<Category, kNumTopics>& topic_categories() {
  static const auto topics = [] {
    std::array<Category, kNumTopics> a{};
    for (std::size_t i = 0; i < kNumTopics; ++i) a[i] = static_cast<Category>(i);
    return a;
  }();
  return topics;
}

std::string_view display_name(Category c) { return kNames.at(index_of(c)).display; }

std::string_view slug(Category c) { return kNames.at(index_of(c)).slug; }

std::optional<Category> parse_category(std::string_view text) {
  for (std::size_t i = 0; i < kNumCategories; ++i) {
    if (iequals(text, kNames[i].display) || iequals(text, kNames[i].slug)) {
      return static_cast<Category>(i);
    }
  }
  return std::nullopt;
}

Category category_from_string(std::string_view text) {
  if (auto c = parse_category(text)) return *c;
  throw InvalidArgument("unknown category: '" + std::string(text) + "'");
}

}  // namespace censorlens
