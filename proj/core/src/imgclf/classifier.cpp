#include "censorlens/imgclf/classifier.hpp"

#include "censorlens/error.hpp"

namespace censorlens::imgclf {

ClassScores predict(const ConvNet& model, const Image& image) {
  return softmax(model.logits(model.features(model.prepare_input(image))));
}

Evaluation evaluate(const ConvNet& model, std::span<const LabeledImage> test, double threshold) {
  if (test.empty()) throw InvalidArgument("test set is empty");
  Evaluation ev;
  std::vector<Category> truth;
  truth.reserve(test.size());
  for (const auto& item : test) {
    ev.scores.push_back(predict(model, item.image));
    ev.predictions.push_back(decide(ev.scores.back(), threshold));
    truth.push_back(item.label);
  }
  ev.report = evaluate_predictions(truth, ev.predictions);
  return ev;
}

}  // namespace censorlens::imgclf
