#include "censorlens/image.hpp"

#include <algorithm>
#include <cmath>

#include <opencv2/core.hpp>
#include <opencv2/imgcodecs.hpp>

#include "censorlens/error.hpp"

namespace censorlens {

Image::Image(int height, int width, std::uint8_t fill) : height_(height), width_(width) {
  if (height < 1 || width < 1) throw InvalidArgument("image dimensions must be positive");
  data_.assign(static_cast<std::size_t>(height) * static_cast<std::size_t>(width) * kChannels, fill);
}

std::uint8_t Image::clamped(int y, int x, int c) const {
  y = std::clamp(y, 0, height_ - 1);
  x = std::clamp(x, 0, width_ - 1);
  return at(y, x, c);
}

Image load_image(const std::filesystem::path& path) {
  const cv::Mat bgr = cv::imread(path.string(), cv::IMREAD_COLOR);
  if (bgr.empty()) throw IoError("cannot decode image " + path.string());
  Image img(bgr.rows, bgr.cols);
  for (int y = 0; y < bgr.rows; ++y) {
    const auto* row = bgr.ptr<cv::Vec3b>(y);
    for (int x = 0; x < bgr.cols; ++x) {
      img.at(y, x, 0) = row[x][2];
      img.at(y, x, 1) = row[x][1];
      img.at(y, x, 2) = row[x][0];
    }
  }
  return img;
}

void save_image(const std::filesystem::path& path, const Image& image) {
  if (image.empty()) throw InvalidArgument("cannot save an empty image");
  cv::Mat bgr(image.height(), image.width(), CV_8UC3);
  for (int y = 0; y < image.height(); ++y) {
    auto* row = bgr.ptr<cv::Vec3b>(y);
    for (int x = 0; x < image.width(); ++x) {
      row[x] = cv::Vec3b(image.at(y, x, 2), image.at(y, x, 1), image.at(y, x, 0));
    }
  }
  bool ok = false;
  try {
    ok = cv::imwrite(path.string(), bgr);
  } catch (const cv::Exception& e) {
    throw IoError("cannot write image " + path.string() + ": " + e.what());
  }
  if (!ok) throw IoError("cannot write image " + path.string());
}

double sample_bilinear(const Image& image, double x, double y, int c) {
  const double fx = std::floor(x);
  const double fy = std::floor(y);
  const int x0 = static_cast<int>(fx);
  const int y0 = static_cast<int>(fy);
  const double ax = x - fx;
  const double ay = y - fy;
  const double v00 = image.clamped(y0, x0, c);
  if (ax == 0.0 && ay == 0.0) return v00;
  const double v01 = image.clamped(y0, x0 + 1, c);
  const double v10 = image.clamped(y0 + 1, x0, c);
  const double v11 = image.clamped(y0 + 1, x0 + 1, c);
  return (1 - ay) * ((1 - ax) * v00 + ax * v01) + ay * ((1 - ax) * v10 + ax * v11);
}

LetterboxGeometry letterbox_geometry(int height, int width, int side) {
  LetterboxGeometry g;
  g.side = side;
  g.scale = static_cast<double>(side) / std::max(height, width);
  g.offset_x = (side - width * g.scale) / 2.0;
  g.offset_y = (side - height * g.scale) / 2.0;
  return g;
}

Image letterbox(const Image& image, int side) {
  if (side < 1) throw InvalidArgument("letterbox side must be positive");
  if (image.height() == side && image.width() == side) return image;
  const auto g = letterbox_geometry(image.height(), image.width(), side);
  Image out(side, side, 0);
  for (int y = 0; y < side; ++y) {
    for (int x = 0; x < side; ++x) {
      const double sx = (x + 0.5 - g.offset_x) / g.scale - 0.5;
      const double sy = (y + 0.5 - g.offset_y) / g.scale - 0.5;
      if (sx < -0.5 || sy < -0.5 || sx > image.width() - 0.5 || sy > image.height() - 0.5) continue;
      for (int c = 0; c < Image::kChannels; ++c) {
        out.at(y, x, c) = static_cast<std::uint8_t>(std::lround(std::clamp(sample_bilinear(image, sx, sy, c), 0.0, 255.0)));
      }
    }
  }
  return out;
}

}  // namespace censorlens
