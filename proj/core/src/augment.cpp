#include "censorlens/augment.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include <Eigen/Dense>
#include <fmt/format.h>

#include "censorlens/error.hpp"

namespace censorlens::augment {

std::string_view to_string(Kind kind) {
  switch (kind) {
    case Kind::ContrastNormalization:
      return "contrast";
    case Kind::Affine:
      return "affine";
    case Kind::Perspective:
      return "perspective";
    case Kind::Sharpen:
      return "sharpen";
    case Kind::GaussianBlur:
      return "blur";
    case Kind::Padding:
      return "padding";
  }
  return "unknown";
}

std::optional<Kind> parse_kind(std::string_view name) {
  for (Kind k : kAllKinds) {
    if (to_string(k) == name) return k;
  }
  return std::nullopt;
}

Kind AugmentationSpec::kind() const {
  return std::visit(
      [](const auto& p) -> Kind {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, ContrastParams>) return Kind::ContrastNormalization;
        if constexpr (std::is_same_v<T, AffineParams>) return Kind::Affine;
        if constexpr (std::is_same_v<T, PerspectiveParams>) return Kind::Perspective;
        if constexpr (std::is_same_v<T, SharpenParams>) return Kind::Sharpen;
        if constexpr (std::is_same_v<T, BlurParams>) return Kind::GaussianBlur;
        if constexpr (std::is_same_v<T, PaddingParams>) return Kind::Padding;
      },
      params);
}

namespace {

void check_range(double v, double lo, double hi, const char* name) {
  if (!std::isfinite(v) || v < lo || v > hi) {
    throw InvalidArgument(fmt::format("{} = {} outside [{}, {}]", name, v, lo, hi));
  }
}

std::uint8_t to_pixel(double v) { return static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0, 255.0))); }

Image contrast(const Image& in, const ContrastParams& p) {
  Image out = in;
  for (auto& v : out.data()) v = to_pixel(128.0 + p.gain * (static_cast<double>(v) - 128.0));
  return out;
}

/// Resamples `in` through an inverse map dst -> src.
template <typename InverseMap>
Image warp(const Image& in, InverseMap&& inverse) {
  Image out(in.height(), in.width());
  for (int y = 0; y < in.height(); ++y) {
    for (int x = 0; x < in.width(); ++x) {
      const auto [sx, sy] = inverse(static_cast<double>(x), static_cast<double>(y));
      for (int c = 0; c < Image::kChannels; ++c) out.at(y, x, c) = to_pixel(sample_bilinear(in, sx, sy, c));
    }
  }
  return out;
}

Image affine(const Image& in, const AffineParams& p) {
  if (p.rotation_deg == 0.0 && p.scale == 1.0 && p.shift_x == 0.0 && p.shift_y == 0.0) return in;
  const double theta = p.rotation_deg * std::numbers::pi / 180.0;
  const double cx = (in.width() - 1) / 2.0;
  const double cy = (in.height() - 1) / 2.0;
  const double tx = p.shift_x * in.width();
  const double ty = p.shift_y * in.height();
  // Forward: dst = R*S*(src - c) + c + t; invert analytically.
  const double cos_t = std::cos(theta) / p.scale;
  const double sin_t = std::sin(theta) / p.scale;
  return warp(in, [&](double x, double y) {
    const double dx = x - cx - tx;
    const double dy = y - cy - ty;
    return std::pair{cos_t * dx + sin_t * dy + cx, -sin_t * dx + cos_t * dy + cy};
  });
}

Eigen::Matrix3d homography(const std::array<Eigen::Vector2d, 4>& from, const std::array<Eigen::Vector2d, 4>& to) {
  Eigen::Matrix<double, 8, 8> a;
  Eigen::Matrix<double, 8, 1> b;
  for (int i = 0; i < 4; ++i) {
    const double x = from[i].x(), y = from[i].y(), u = to[i].x(), v = to[i].y();
    a.row(2 * i) << x, y, 1, 0, 0, 0, -u * x, -u * y;
    a.row(2 * i + 1) << 0, 0, 0, x, y, 1, -v * x, -v * y;
    b(2 * i) = u;
    b(2 * i + 1) = v;
  }
  const Eigen::Matrix<double, 8, 1> h = a.fullPivLu().solve(b);
  Eigen::Matrix3d m;
  m << h(0), h(1), h(2), h(3), h(4), h(5), h(6), h(7), 1.0;
  return m;
}

Image perspective(const Image& in, const PerspectiveParams& p, std::uint64_t seed) {
  if (p.jitter == 0.0) return in;
  Rng rng(mix_seed(seed));
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  const double w = in.width() - 1;
  const double h = in.height() - 1;
  const std::array<Eigen::Vector2d, 4> corners{Eigen::Vector2d{0, 0}, Eigen::Vector2d{w, 0}, Eigen::Vector2d{w, h},
                                               Eigen::Vector2d{0, h}};
  std::array<Eigen::Vector2d, 4> moved = corners;
  for (auto& c : moved) {
    c.x() += unit(rng) * p.jitter * in.width();
    c.y() += unit(rng) * p.jitter * in.height();
  }
  // The output canvas shows the moved quadrilateral; map output -> input.
  const Eigen::Matrix3d inv = homography(moved, corners);
  return warp(in, [&](double x, double y) {
    const Eigen::Vector3d s = inv * Eigen::Vector3d(x, y, 1.0);
    return std::pair{s.x() / s.z(), s.y() / s.z()};
  });
}

Image sharpen(const Image& in, const SharpenParams& p) {
  if (p.amount == 0.0) return in;
  Image out(in.height(), in.width());
  for (int y = 0; y < in.height(); ++y) {
    for (int x = 0; x < in.width(); ++x) {
      for (int c = 0; c < Image::kChannels; ++c) {
        const double v = in.at(y, x, c);
        const double lap = 4.0 * v - in.clamped(y - 1, x, c) - in.clamped(y + 1, x, c) - in.clamped(y, x - 1, c) -
                           in.clamped(y, x + 1, c);
        out.at(y, x, c) = to_pixel(v + p.amount * lap);
      }
    }
  }
  return out;
}

Image blur(const Image& in, const BlurParams& p) {
  if (p.sigma == 0.0) return in;
  const int radius = std::max(1, static_cast<int>(std::ceil(3.0 * p.sigma)));
  std::vector<double> kernel(2 * radius + 1);
  for (int i = -radius; i <= radius; ++i) kernel[i + radius] = std::exp(-0.5 * i * i / (p.sigma * p.sigma));
  const double sum = std::accumulate(kernel.begin(), kernel.end(), 0.0);
  for (auto& k : kernel) k /= sum;

  const int h = in.height(), w = in.width();
  std::vector<double> tmp(static_cast<std::size_t>(h) * w * Image::kChannels);
  auto tmp_at = [&](int y, int x, int c) -> double& {
    return tmp[(static_cast<std::size_t>(y) * w + x) * Image::kChannels + c];
  };
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      for (int c = 0; c < Image::kChannels; ++c) {
        double acc = 0;
        for (int i = -radius; i <= radius; ++i) acc += kernel[i + radius] * in.clamped(y, x + i, c);
        tmp_at(y, x, c) = acc;
      }
  Image out(h, w);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      for (int c = 0; c < Image::kChannels; ++c) {
        double acc = 0;
        for (int i = -radius; i <= radius; ++i) acc += kernel[i + radius] * tmp_at(std::clamp(y + i, 0, h - 1), x, c);
        out.at(y, x, c) = to_pixel(acc);
      }
  return out;
}

Image pad(const Image& in, const PaddingParams& p) {
  if (p.pad == 0) return in;
  Image out(in.height() + 2 * p.pad, in.width() + 2 * p.pad);
  for (int y = 0; y < out.height(); ++y)
    for (int x = 0; x < out.width(); ++x)
      for (int c = 0; c < Image::kChannels; ++c) out.at(y, x, c) = in.clamped(y - p.pad, x - p.pad, c);
  return out;
}

AugmentationSpec reseeded(const AugmentationSpec& spec, std::uint64_t seed, std::size_t index) {
  AugmentationSpec s = spec;
  s.seed = derive_seed(mix_seed(seed) ^ spec.seed, index);
  return s;
}

}  // namespace

void validate(const AugmentationSpec& spec) {
  std::visit(
      [](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, ContrastParams>) {
          check_range(p.gain, 0.75, 1.5, "contrast gain");
        } else if constexpr (std::is_same_v<T, AffineParams>) {
          check_range(p.rotation_deg, -15.0, 15.0, "affine rotation");
          check_range(p.scale, 0.9, 1.1, "affine scale");
          check_range(p.shift_x, -0.1, 0.1, "affine shift_x");
          check_range(p.shift_y, -0.1, 0.1, "affine shift_y");
        } else if constexpr (std::is_same_v<T, PerspectiveParams>) {
          check_range(p.jitter, 0.0, 0.08, "perspective jitter");
        } else if constexpr (std::is_same_v<T, SharpenParams>) {
          check_range(p.amount, 0.0, 1.0, "sharpen amount");
        } else if constexpr (std::is_same_v<T, BlurParams>) {
          check_range(p.sigma, 0.0, 2.0, "blur sigma");
        } else if constexpr (std::is_same_v<T, PaddingParams>) {
          check_range(p.pad, 0, 25, "padding");
        }
      },
      spec.params);
}

AugmentationSpec sample_spec(Kind kind, Rng& rng) {
  auto uniform = [&](double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); };
  AugmentationSpec spec;
  switch (kind) {
    case Kind::ContrastNormalization:
      spec.params = ContrastParams{uniform(0.75, 1.5)};
      break;
    case Kind::Affine:
      spec.params = AffineParams{uniform(-15.0, 15.0), uniform(0.9, 1.1), uniform(-0.05, 0.05), uniform(-0.05, 0.05)};
      break;
    case Kind::Perspective:
      spec.params = PerspectiveParams{uniform(0.02, 0.08)};
      break;
    case Kind::Sharpen:
      spec.params = SharpenParams{uniform(0.5, 1.0)};
      break;
    case Kind::GaussianBlur:
      spec.params = BlurParams{uniform(0.5, 2.0)};
      break;
    case Kind::Padding:
      spec.params = PaddingParams{std::uniform_int_distribution<int>(5, 25)(rng)};
      break;
  }
  spec.seed = rng();
  return spec;
}

Image apply_transform(const Image& image, const AugmentationSpec& spec) {
  if (image.empty()) throw InvalidArgument("cannot augment an empty image");
  validate(spec);
  return std::visit(
      [&](const auto& p) -> Image {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, ContrastParams>) return contrast(image, p);
        if constexpr (std::is_same_v<T, AffineParams>) return affine(image, p);
        if constexpr (std::is_same_v<T, PerspectiveParams>) return perspective(image, p, spec.seed);
        if constexpr (std::is_same_v<T, SharpenParams>) return sharpen(image, p);
        if constexpr (std::is_same_v<T, BlurParams>) return blur(image, p);
        if constexpr (std::is_same_v<T, PaddingParams>) return pad(image, p);
      },
      spec.params);
}

std::vector<AugmentedItem> augment_dataset(std::span<const Item> items, std::span<const AugmentationSpec> specs,
                                           std::uint64_t seed) {
  for (const auto& s : specs) validate(s);
  std::vector<AugmentedItem> out;
  out.reserve(items.size() * (1 + specs.size()));
  for (std::size_t i = 0; i < items.size(); ++i) {
    out.push_back({items[i].image, items[i].label, i, std::nullopt});
    for (const auto& spec : specs) {
      out.push_back({apply_transform(items[i].image, reseeded(spec, seed, i)), items[i].label, i, spec.kind()});
    }
  }
  return out;
}

std::vector<std::size_t> plan_target_counts(std::size_t n, std::size_t target, std::size_t max_per_item,
                                            std::uint64_t seed) {
  if (n == 0) {
    if (target != 0) throw InvalidArgument("cannot reach a positive target size from an empty dataset");
    return {};
  }
  if (target < n || target > n * (1 + max_per_item)) {
    throw InvalidArgument(fmt::format("target size {} unreachable from {} items with at most {} augmentations each",
                                      target, n, max_per_item));
  }
  const std::size_t extra = target - n;
  std::vector<std::size_t> counts(n, extra / n);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  Rng rng(mix_seed(seed));
  std::shuffle(order.begin(), order.end(), rng);
  for (std::size_t r = 0; r < extra % n; ++r) ++counts[order[r]];
  return counts;
}

std::vector<AugmentedItem> augment_to_target_size(std::span<const Item> items, std::size_t target,
                                                  std::uint64_t seed, std::span<const Kind> kinds) {
  const auto counts = plan_target_counts(items.size(), target, kinds.size(), seed);
  std::vector<AugmentedItem> out;
  out.reserve(target);
  for (std::size_t i = 0; i < items.size(); ++i) {
    out.push_back({items[i].image, items[i].label, i, std::nullopt});
    Rng rng(derive_seed(seed, i));
    std::vector<Kind> pool(kinds.begin(), kinds.end());
    std::shuffle(pool.begin(), pool.end(), rng);
    for (std::size_t k = 0; k < counts[i]; ++k) {
      const AugmentationSpec spec = sample_spec(pool[k], rng);
      out.push_back({apply_transform(items[i].image, spec), items[i].label, i, pool[k]});
    }
  }
  return out;
}

}  // namespace censorlens::augment
