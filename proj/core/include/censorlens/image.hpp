#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace censorlens {

/// 8-bit RGB image stored row-major, interleaved (HWC).
class Image {
 public:
  static constexpr int kChannels = 3;

  Image() = default;
  /// Throws InvalidArgument unless height, width >= 1.
  Image(int height, int width, std::uint8_t fill = 0);

  int height() const { return height_; }
  int width() const { return width_; }
  bool empty() const { return data_.empty(); }

  std::uint8_t& at(int y, int x, int c) { return data_[offset(y, x, c)]; }
  std::uint8_t at(int y, int x, int c) const { return data_[offset(y, x, c)]; }

  /// Edge-replicating access for out-of-range coordinates.
  std::uint8_t clamped(int y, int x, int c) const;

  std::span<std::uint8_t> data() { return data_; }
  std::span<const std::uint8_t> data() const { return data_; }

  friend bool operator==(const Image&, const Image&) = default;

 private:
  std::size_t offset(int y, int x, int c) const {
    return (static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(x)) * kChannels +
           static_cast<std::size_t>(c);
  }

  int height_ = 0;
  int width_ = 0;
  std::vector<std::uint8_t> data_;
};

/// Decodes PNG or JPEG. Throws IoError when the file is missing or undecodable.
Image load_image(const std::filesystem::path& path);

/// Encodes according to the extension (.png, .jpg/.jpeg). Throws IoError.
void save_image(const std::filesystem::path& path, const Image& image);

/// Bilinear sample with edge replication; (x, y) in pixel-center coordinates.
double sample_bilinear(const Image& image, double x, double y, int c);

/// Placement of a source image inside a square letterbox canvas.
struct LetterboxGeometry {
  int side = 0;
  double scale = 1.0;
  double offset_x = 0.0;
  double offset_y = 0.0;
};

LetterboxGeometry letterbox_geometry(int height, int width, int side);

/// Aspect-preserving bilinear resize into a `side`x`side` canvas, centered,
/// with the remaining border filled with black.
Image letterbox(const Image& image, int side);

}  // namespace censorlens
