#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "censorlens/category.hpp"
#include "censorlens/image.hpp"

namespace censorlens::imgclf {

/// Dense channel-major activation volume.
struct Tensor {
  int channels = 0;
  int height = 0;
  int width = 0;
  std::vector<double> values;

  Tensor() = default;
  Tensor(int c, int h, int w) : channels(c), height(h), width(w), values(static_cast<std::size_t>(c) * h * w, 0.0) {}

  double& at(int c, int y, int x) { return values[(static_cast<std::size_t>(c) * height + y) * width + x]; }
  double at(int c, int y, int x) const { return values[(static_cast<std::size_t>(c) * height + y) * width + x]; }
  std::size_t plane() const { return static_cast<std::size_t>(height) * width; }
};

/// Conv stages of 3x3 convolutions (stride 1, zero padding 1) with ReLU. A
/// 2x2 max-pool separates consecutive stages. The last stage feeds a global
/// average pool and a linear head over the 15 categories.
struct Architecture {
  int input_side = 224;
  std::vector<int> channels{16, 32, 64};

  /// Throws InvalidArgument on an unusable descriptor.
  void validate() const;
  int feature_side() const;

  friend bool operator==(const Architecture&, const Architecture&) = default;
};

/// Small convolutional network with a GAP head. All parameters live in one
/// flat buffer so optimizers and checkpoints can treat them uniformly.
class ConvNet {
 public:
  explicit ConvNet(Architecture arch = {}, std::uint64_t seed = 0);

  const Architecture& architecture() const { return arch_; }
  int feature_channels() const { return arch_.channels.back(); }

  std::size_t parameter_count() const { return params_.size(); }
  std::span<double> parameters() { return params_; }
  std::span<const double> parameters() const { return params_; }

  std::span<double> conv_weight(std::size_t stage);
  std::span<double> conv_bias(std::size_t stage);
  /// Row-major 15 x K matrix.
  std::span<double> head_weight();
  std::span<const double> head_weight() const;
  std::span<double> head_bias();
  std::span<const double> head_bias() const;
  std::span<const double> head_row(Category c) const;

  /// Offsets of the head parameters inside parameters().
  std::size_t head_weight_offset() const { return head_w_; }
  std::size_t head_bias_offset() const { return head_b_; }

  /// Letterboxes to the input side and maps pixels to [-0.5, 0.5].
  Tensor prepare_input(const Image& image) const;

  /// Post-ReLU activations of the last conv stage.
  Tensor features(const Tensor& input) const;

  std::array<double, kNumCategories> logits(const Tensor& features) const;

  /// Mean cross-entropy over the batch. Writes d(loss)/d(parameters) into
  /// `grad`, which must have parameter_count() entries.
  double loss_and_gradient(std::span<const Tensor> inputs, std::span<const Category> labels,
                           std::span<double> grad) const;

  double loss(std::span<const Tensor> inputs, std::span<const Category> labels) const;

 private:
  struct StageOffsets {
    std::size_t weight = 0;
    std::size_t bias = 0;
    int in = 0;
    int out = 0;
  };

  Architecture arch_;
  std::vector<StageOffsets> stages_;
  std::size_t head_w_ = 0;
  std::size_t head_b_ = 0;
  std::vector<double> params_;
};

}  // namespace censorlens::imgclf
