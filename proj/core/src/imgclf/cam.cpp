#include "censorlens/imgclf/cam.hpp"

#include <algorithm>
#include <cmath>

#include "censorlens/error.hpp"

namespace censorlens::imgclf {

Heatmap class_activation_map(const Tensor& features, std::span<const double> class_weights) {
  if (class_weights.size() != static_cast<std::size_t>(features.channels)) {
    throw InvalidArgument("class weight count does not match the feature channels");
  }
  Heatmap m{features.height, features.width, std::vector<double>(features.plane(), 0.0)};
  for (int k = 0; k < features.channels; ++k) {
    const double w = class_weights[k];
    const double* f = &features.values[k * features.plane()];
    for (std::size_t j = 0; j < m.values.size(); ++j) m.values[j] += w * f[j];
  }
  return m;
}

Heatmap normalize_minmax(Heatmap map) {
  if (map.values.empty()) return map;
  const auto [lo, hi] = std::minmax_element(map.values.begin(), map.values.end());
  const double min = *lo, range = *hi - *lo;
  for (auto& v : map.values) v = range > 0.0 ? (v - min) / range : 0.0;
  return map;
}

Heatmap cam_grid(const ConvNet& model, const Image& image, Category category) {
  const Tensor f = model.features(model.prepare_input(image));
  return normalize_minmax(class_activation_map(f, model.head_row(category)));
}

Heatmap cam(const ConvNet& model, const Image& image, Category category) {
  const Heatmap grid = cam_grid(model, image, category);
  const auto g = letterbox_geometry(image.height(), image.width(), model.architecture().input_side);
  const double to_grid = static_cast<double>(grid.width) / g.side;

  Heatmap out{image.height(), image.width(), std::vector<double>(static_cast<std::size_t>(image.height()) * image.width())};
  for (int y = 0; y < image.height(); ++y) {
    for (int x = 0; x < image.width(); ++x) {
      const double gx = ((x + 0.5) * g.scale + g.offset_x) * to_grid - 0.5;
      const double gy = ((y + 0.5) * g.scale + g.offset_y) * to_grid - 0.5;
      const double fx = std::floor(gx), fy = std::floor(gy);
      const int x0 = static_cast<int>(fx), y0 = static_cast<int>(fy);
      const double ax = gx - fx, ay = gy - fy;
      auto at = [&](int yy, int xx) {
        return grid.at(std::clamp(yy, 0, grid.height - 1), std::clamp(xx, 0, grid.width - 1));
      };
      out.values[static_cast<std::size_t>(y) * out.width + x] =
          (1 - ay) * ((1 - ax) * at(y0, x0) + ax * at(y0, x0 + 1)) + ay * ((1 - ax) * at(y0 + 1, x0) + ax * at(y0 + 1, x0 + 1));
    }
  }
  // Interpolation is affine-equivariant, so renormalizing restores max = 1.
  return normalize_minmax(std::move(out));
}

Heatmap cam(const ConvNet& model, const Image& image, std::size_t category_index) {
  return cam(model, image, category_at(category_index));
}

Peak peak(const Heatmap& map) {
  if (map.values.empty()) throw InvalidArgument("empty heatmap");
  const auto it = std::max_element(map.values.begin(), map.values.end());
  const auto j = static_cast<std::size_t>(it - map.values.begin());
  return {static_cast<int>(j % map.width), static_cast<int>(j / map.width), *it};
}

namespace {

std::array<double, 3> jet(double v) {
  v = std::clamp(v, 0.0, 1.0);
  auto ramp = [](double t) { return std::clamp(1.5 - std::abs(4.0 * t), 0.0, 1.0); };
  return {ramp(v - 0.75), ramp(v - 0.5), ramp(v - 0.25)};
}

}  // namespace

Image render_overlay(const Image& image, const Heatmap& map, double alpha) {
  if (map.height != image.height() || map.width != image.width()) {
    throw InvalidArgument("heatmap and image sizes differ");
  }
  Image out = image;
  for (int y = 0; y < image.height(); ++y) {
    for (int x = 0; x < image.width(); ++x) {
      const auto rgb = jet(map.at(y, x));
      for (int c = 0; c < Image::kChannels; ++c) {
        const double v = (1 - alpha) * image.at(y, x, c) + alpha * 255.0 * rgb[c];
        out.at(y, x, c) = static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0, 255.0)));
      }
    }
  }
  return out;
}

}  // namespace censorlens::imgclf
