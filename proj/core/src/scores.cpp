#include "censorlens/scores.hpp"

#include <algorithm>
#include <cmath>

#include "censorlens/error.hpp"

namespace censorlens {

Category ClassScores::argmax() const {
  std::size_t best = 0;
  for (std::size_t c = 1; c < kNumCategories; ++c) {
    if (p[c] > p[best]) best = c;
  }
  return category_at(best);
}

ClassScores softmax(std::span<const double, kNumCategories> logits) {
  const double zmax = *std::max_element(logits.begin(), logits.end());
  ClassScores s;
  double sum = 0;
  for (std::size_t c = 0; c < kNumCategories; ++c) {
    s.p[c] = std::exp(logits[c] - zmax);
    sum += s.p[c];
  }
  for (auto& v : s.p) v /= sum;
  return s;
}

Category decide(const ClassScores& scores, double threshold) {
  if (!(threshold > 0.0 && threshold <= 1.0)) throw InvalidArgument("threshold must lie in (0, 1]");
  const Category best = scores.argmax();
  return scores[best] >= threshold ? best : Category::Other;
}

}  // namespace censorlens
