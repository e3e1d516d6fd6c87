#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace censorlens {

/// The 14 sensitive topics in alphabetical order, followed by the fallback
/// class. The enumerator order is the tie-breaking order used everywhere.
enum class Category : std::uint8_t {
  BoXilai,
  DengXiaoping,
  Fire,
  InjuryDead,
  LiuXiaobo,
  MaoZedong,
  PeoplesCongress,
  PolicemanMilitary,
  Protest,
  PrurientNudity,
  Rainstorm,
  WinnieThePooh,
  XiJinping,
  ZhouKehua,
  Other,
};

inline constexpr std::size_t kNumCategories = 15;
inline constexpr std::size_t kNumTopics = 14;

constexpr std::size_t index_of(Category c) { return static_cast<std::size_t>(c); }

/// Throws InvalidArgument when `i >= kNumCategories`.
Category category_at(std::size_t i);

const std::array<Category, kNumCategories>& all_categories();
const std::array<Category, kNumTopics>& topic_categories();

/// Human-readable name, e.g. "Injury/Dead".
std::string_view display_name(Category c);

/// Filesystem-safe identifier, e.g. "injury_dead". Used for dataset
/// subdirectories and CSV columns.
std::string_view slug(Category c);

/// Accepts a display name or a slug, ASCII case-insensitive.
std::optional<Category> parse_category(std::string_view text);

/// Like parse_category but throws InvalidArgument on unknown names.
Category category_from_string(std::string_view text);

}  // namespace censorlens
