#pragma once

#include <span>
#include <vector>

#include "censorlens/image.hpp"
#include "censorlens/imgclf/dataset.hpp"
#include "censorlens/imgclf/network.hpp"
#include "censorlens/metrics.hpp"
#include "censorlens/scores.hpp"

namespace censorlens::imgclf {

ClassScores predict(const ConvNet& model, const Image& image);

struct Evaluation {
  EvalReport report;
  std::vector<Category> predictions;
  std::vector<ClassScores> scores;
};

/// Metrics are computed on gated decisions, so low-confidence predictions
/// count as Other. Throws InvalidArgument on an empty test set.
Evaluation evaluate(const ConvNet& model, std::span<const LabeledImage> test, double threshold = kDefaultThreshold);

}  // namespace censorlens::imgclf
