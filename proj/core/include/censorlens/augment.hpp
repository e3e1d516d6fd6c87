#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

#include "censorlens/category.hpp"
#include "censorlens/image.hpp"
#include "censorlens/random.hpp"

namespace censorlens::augment {

enum class Kind { ContrastNormalization, Affine, Perspective, Sharpen, GaussianBlur, Padding };

inline constexpr std::array<Kind, 6> kAllKinds{Kind::ContrastNormalization, Kind::Affine, Kind::Perspective,
                                               Kind::Sharpen,              Kind::GaussianBlur, Kind::Padding};

std::string_view to_string(Kind kind);
std::optional<Kind> parse_kind(std::string_view name);

// Accepted parameter ranges. Each range contains the identity setting; the
// sampler in sample_spec() draws from the narrower "label-safe" ranges noted
// alongside.

/// v' = 128 + gain * (v - 128). Accepted [0.75, 1.5].
struct ContrastParams {
  double gain = 1.0;
};

/// Rotation about the image center followed by isotropic scale and a shift
/// given as a fraction of the image size. Accepted rotation [-15, 15] deg,
/// scale [0.9, 1.1], |shift| <= 0.1.
struct AffineParams {
  double rotation_deg = 0.0;
  double scale = 1.0;
  double shift_x = 0.0;
  double shift_y = 0.0;
};

/// Each corner moves by up to `jitter` * edge length in a direction drawn
/// from the spec seed. Accepted [0, 0.08]; sampled from [0.02, 0.08].
struct PerspectiveParams {
  double jitter = 0.0;
};

/// v' = v + amount * (4v - sum of 4-neighbours). Accepted [0, 1]; sampled
/// from [0.5, 1].
struct SharpenParams {
  double amount = 0.0;
};

/// Accepted sigma [0, 2]; sampled from [0.5, 2].
struct BlurParams {
  double sigma = 0.0;
};

/// Edge-replicated border of `pad` pixels on every side. Accepted [0, 25];
/// sampled from [5, 25].
struct PaddingParams {
  int pad = 0;
};

using Params = std::variant<ContrastParams, AffineParams, PerspectiveParams, SharpenParams, BlurParams, PaddingParams>;

struct AugmentationSpec {
  Params params;
  std::uint64_t seed = 0;

  Kind kind() const;
};

/// Throws InvalidArgument when a parameter is outside its accepted range.
void validate(const AugmentationSpec& spec);

/// Draws a spec of the given kind from the label-safe sampling ranges.
AugmentationSpec sample_spec(Kind kind, Rng& rng);

/// Pure and deterministic in (image, spec). Padding grows each dimension by
/// 2*pad; every other transform keeps the input size, with out-of-canvas
/// samples edge-replicated.
Image apply_transform(const Image& image, const AugmentationSpec& spec);

struct Item {
  Image image;
  Category label = Category::Other;
};

struct AugmentedItem {
  Image image;
  Category label = Category::Other;
  std::size_t source = 0;
  /// Absent for the untouched original.
  std::optional<Kind> kind;
};

/// Every original followed by one output per spec. Randomness inside a spec
/// is re-seeded per item from (seed, spec.seed, item index).
std::vector<AugmentedItem> augment_dataset(std::span<const Item> items, std::span<const AugmentationSpec> specs,
                                           std::uint64_t seed);

/// Number of augmentations assigned to each of `n` items so that the
/// expanded dataset has exactly `target` entries. Throws InvalidArgument if
/// target < n or target > n * (1 + max_per_item).
std::vector<std::size_t> plan_target_counts(std::size_t n, std::size_t target, std::size_t max_per_item,
                                            std::uint64_t seed);

/// Target-size mode: each item receives k_i kinds sampled without
/// replacement (parameters sampled per item) so the output size is `target`.
std::vector<AugmentedItem> augment_to_target_size(std::span<const Item> items, std::size_t target,
                                                  std::uint64_t seed, std::span<const Kind> kinds = kAllKinds);

}  // namespace censorlens::augment
