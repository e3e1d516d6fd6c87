#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "censorlens/category.hpp"
#include "censorlens/image.hpp"
#include "censorlens/imgclf/network.hpp"

namespace censorlens::imgclf {

struct Heatmap {
  int height = 0;
  int width = 0;
  std::vector<double> values;

  double at(int y, int x) const { return values[static_cast<std::size_t>(y) * width + x]; }
};

/// Unnormalized class activation map: M(y, x) = sum_k weights[k] * f_k(y, x).
Heatmap class_activation_map(const Tensor& features, std::span<const double> class_weights);

/// (M - min) / (max - min); identically zero when max == min.
Heatmap normalize_minmax(Heatmap map);

/// Normalized CAM at the resolution of the last conv stage.
Heatmap cam_grid(const ConvNet& model, const Image& image, Category category);

/// Normalized CAM bilinearly resampled onto the original image, undoing the
/// letterbox placement used at the network input.
Heatmap cam(const ConvNet& model, const Image& image, Category category);

/// Index-based overload; throws InvalidArgument for an out-of-range index.
Heatmap cam(const ConvNet& model, const Image& image, std::size_t category_index);

struct Peak {
  int x = 0;
  int y = 0;
  double value = 0.0;
};

/// First maximum in row-major order.
Peak peak(const Heatmap& map);

/// Jet-colormapped heatmap alpha-blended over the image.
Image render_overlay(const Image& image, const Heatmap& map, double alpha = 0.5);

}  // namespace censorlens::imgclf
