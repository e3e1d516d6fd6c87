#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "censorlens/imgclf/dataset.hpp"
#include "censorlens/imgclf/network.hpp"

namespace censorlens::imgclf {

struct TrainConfig {
  Architecture architecture;
  /// Fraction held out per category for validation; the rest trains.
  double validation_fraction = 0.05;
  std::uint64_t seed = 0;
  int epochs = 10;
  int batch_size = 16;
  /// Adam step size for epoch e is learning_rate * lr_decay^e.
  double learning_rate = 0.003;
  double lr_decay = 0.9;
};

struct Split {
  std::vector<std::size_t> train;
  std::vector<std::size_t> validation;
};

/// Stratified, seed-deterministic split. Each category with n examples puts
/// round(fraction * n), clamped to [1, n - 1], into validation. Throws
/// InvalidArgument if fewer than two categories are present or any present
/// category has fewer than two examples.
Split stratified_split(std::span<const Category> labels, double validation_fraction, std::uint64_t seed);

struct EpochStats {
  int epoch = 0;
  double train_loss = 0.0;
  double validation_loss = 0.0;
};

struct TrainResult {
  /// Weights from the epoch with the lowest validation loss.
  ConvNet model;
  std::vector<EpochStats> curve;
  Split split;
  std::vector<std::string> warnings;
};

TrainResult train_image_classifier(std::span<const LabeledImage> data, const TrainConfig& config);

}  // namespace censorlens::imgclf
