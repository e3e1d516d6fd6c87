#include "censorlens/imgclf/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "censorlens/error.hpp"
#include "censorlens/random.hpp"

namespace censorlens::imgclf {

Split stratified_split(std::span<const Category> labels, double validation_fraction, std::uint64_t seed) {
  if (!(validation_fraction > 0.0 && validation_fraction < 1.0)) {
    throw InvalidArgument("validation fraction must lie in (0, 1)");
  }
  std::map<Category, std::vector<std::size_t>> by_category;
  for (std::size_t i = 0; i < labels.size(); ++i) by_category[labels[i]].push_back(i);
  if (by_category.size() < 2) {
    throw InvalidArgument("stratified split needs at least two categories in the training data");
  }
  Split split;
  for (auto& [category, idx] : by_category) {
    if (idx.size() < 2) {
      throw InvalidArgument(fmt::format("category '{}' has {} example(s); at least 2 are required",
                                        display_name(category), idx.size()));
    }
    Rng rng(derive_seed(seed, index_of(category)));
    std::shuffle(idx.begin(), idx.end(), rng);
    const auto n = idx.size();
    const auto n_val = std::clamp<std::size_t>(static_cast<std::size_t>(std::llround(validation_fraction * n)), 1, n - 1);
    split.validation.insert(split.validation.end(), idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(n_val));
    split.train.insert(split.train.end(), idx.begin() + static_cast<std::ptrdiff_t>(n_val), idx.end());
  }
  std::sort(split.train.begin(), split.train.end());
  std::sort(split.validation.begin(), split.validation.end());
  return split;
}

namespace {

class Adam {
 public:
  explicit Adam(std::size_t n) : m_(n, 0.0), v_(n, 0.0) {}

  void step(std::span<double> params, std::span<const double> grad, double lr) {
    ++t_;
    const double c1 = 1.0 - std::pow(kBeta1, t_);
    const double c2 = 1.0 - std::pow(kBeta2, t_);
    for (std::size_t i = 0; i < params.size(); ++i) {
      m_[i] = kBeta1 * m_[i] + (1 - kBeta1) * grad[i];
      v_[i] = kBeta2 * v_[i] + (1 - kBeta2) * grad[i] * grad[i];
      params[i] -= lr * (m_[i] / c1) / (std::sqrt(v_[i] / c2) + kEps);
    }
  }

 private:
  static constexpr double kBeta1 = 0.9;
  static constexpr double kBeta2 = 0.999;
  static constexpr double kEps = 1e-8;
  std::vector<double> m_, v_;
  int t_ = 0;
};

double mean_loss(const ConvNet& net, const std::vector<Tensor>& inputs, const std::vector<Category>& labels,
                 std::span<const std::size_t> idx) {
  if (idx.empty()) return 0.0;
  double total = 0;
  for (auto i : idx) total += net.loss(std::span(&inputs[i], 1), std::span(&labels[i], 1));
  return total / static_cast<double>(idx.size());
}

}  // namespace

TrainResult train_image_classifier(std::span<const LabeledImage> data, const TrainConfig& config) {
  if (config.epochs < 1) throw InvalidArgument("epoch count must be positive");
  if (config.batch_size < 1) throw InvalidArgument("batch size must be positive");
  std::vector<Category> labels;
  labels.reserve(data.size());
  for (const auto& d : data) labels.push_back(d.label);

  TrainResult result{ConvNet(config.architecture, config.seed), {}, stratified_split(labels, config.validation_fraction, config.seed), {}};
  ConvNet& net = result.model;

  std::vector<Tensor> inputs;
  inputs.reserve(data.size());
  for (const auto& d : data) inputs.push_back(net.prepare_input(d.image));

  Adam adam(net.parameter_count());
  std::vector<double> grad(net.parameter_count());
  std::vector<Tensor> batch_inputs;
  std::vector<Category> batch_labels;
  std::vector<std::size_t> order = result.split.train;
  Rng rng(derive_seed(config.seed, 0xB47C4ULL));

  ConvNet best = net;
  double best_val = std::numeric_limits<double>::infinity();
  bool improved = false;
  double first_val = std::numeric_limits<double>::quiet_NaN();

  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    const double lr = config.learning_rate * std::pow(config.lr_decay, epoch);
    double train_total = 0;
    for (std::size_t start = 0; start < order.size(); start += config.batch_size) {
      const std::size_t end = std::min(order.size(), start + static_cast<std::size_t>(config.batch_size));
      batch_inputs.clear();
      batch_labels.clear();
      for (std::size_t j = start; j < end; ++j) {
        batch_inputs.push_back(inputs[order[j]]);
        batch_labels.push_back(labels[order[j]]);
      }
      train_total += net.loss_and_gradient(batch_inputs, batch_labels, grad) * static_cast<double>(end - start);
      adam.step(net.parameters(), grad, lr);
    }
    EpochStats stats{epoch + 1, train_total / static_cast<double>(order.size()),
                     mean_loss(net, inputs, labels, result.split.validation)};
    spdlog::debug("epoch {} train_loss={:.4f} val_loss={:.4f}", stats.epoch, stats.train_loss, stats.validation_loss);
    result.curve.push_back(stats);
    if (epoch == 0) first_val = stats.validation_loss;
    if (epoch > 0 && stats.validation_loss < result.curve[epoch - 1].validation_loss) improved = true;
    if (stats.validation_loss < best_val) {
      best_val = stats.validation_loss;
      best = net;
    }
  }
  if (config.epochs > 1 && !improved) {
    result.warnings.push_back(fmt::format("validation loss never decreased (first epoch {:.4f})", first_val));
    spdlog::warn("{}", result.warnings.back());
  }
  result.model = std::move(best);
  return result;
}

}  // namespace censorlens::imgclf
