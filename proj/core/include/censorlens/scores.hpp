#pragma once

#include <array>
#include <span>

#include "censorlens/category.hpp"

namespace censorlens {

/// Probability distribution over the 15-way label space.
struct ClassScores {
  std::array<double, kNumCategories> p{};

  double operator[](Category c) const { return p[index_of(c)]; }

  /// Highest-probability category; ties go to the earliest category.
  Category argmax() const;
  double max() const { return p[index_of(argmax())]; }
};

/// Numerically stable softmax.
ClassScores softmax(std::span<const double, kNumCategories> logits);

inline constexpr double kDefaultThreshold = 0.80;

/// Returns the argmax category when its probability reaches `threshold`,
/// otherwise Other. Throws InvalidArgument unless threshold is in (0, 1].
Category decide(const ClassScores& scores, double threshold = kDefaultThreshold);

}  // namespace censorlens
