#include "censorlens/textclf/model.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <fstream>
#include <map>

#include <fmt/format.h>
#include <nlohmann/json.hpp>
#include <spdlog/spdlog.h>

#include "censorlens/csv.hpp"
#include "censorlens/error.hpp"
#include "censorlens/random.hpp"

namespace censorlens::textclf {

using nlohmann::json;

std::vector<LabeledText> read_labeled_texts(const std::filesystem::path& path) {
  const auto rows = csv::read_file(path);
  if (rows.empty()) throw InvalidArgument("labeled text file is empty: " + path.string());
  const auto& header = rows.front();
  const auto text_col = std::find(header.begin(), header.end(), "text") - header.begin();
  const auto cat_col = std::find(header.begin(), header.end(), "category") - header.begin();
  if (text_col == static_cast<std::ptrdiff_t>(header.size()) || cat_col == static_cast<std::ptrdiff_t>(header.size())) {
    throw InvalidArgument("labeled text file needs 'text' and 'category' columns: " + path.string());
  }
  std::vector<LabeledText> out;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.size() <= static_cast<std::size_t>(std::max(text_col, cat_col))) {
      throw InvalidArgument(fmt::format("{}: row {} has too few columns", path.string(), r + 1));
    }
    const auto category = parse_category(row[cat_col]);
    if (!category) throw InvalidArgument(fmt::format("{}: row {} has unknown category '{}'", path.string(), r + 1, row[cat_col]));
    out.push_back({row[text_col], *category});
  }
  return out;
}

void write_labeled_texts(const std::filesystem::path& path, std::span<const LabeledText> rows) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << "text,category\n";
  for (const auto& r : rows) out << csv::join({r.text, std::string(slug(r.label))}) << '\n';
}

TextModel::TextModel(NgramVocabulary vocabulary, Eigen::MatrixXd weights, Eigen::VectorXd bias, double lambda,
                     std::shared_ptr<const Tokenizer> tokenizer)
    : vocabulary_(std::move(vocabulary)),
      weights_(std::move(weights)),
      bias_(std::move(bias)),
      lambda_(lambda),
      tokenizer_(std::move(tokenizer)) {
  if (weights_.rows() != static_cast<Eigen::Index>(kNumCategories) ||
      weights_.cols() != static_cast<Eigen::Index>(vocabulary_.size()) ||
      bias_.size() != static_cast<Eigen::Index>(kNumCategories)) {
    throw InvalidArgument("text model weight shapes do not match the vocabulary");
  }
  if (!weights_.allFinite() || !bias_.allFinite()) throw InvalidArgument("text model weights must be finite");
  if (!tokenizer_) throw InvalidArgument("text model needs a tokenizer");
}

FeatureVector TextModel::features(std::string_view text) const {
  return vocabulary_.extract(tokenizer_->tokenize(text));
}

ClassScores TextModel::predict_features(const FeatureVector& x) const {
  std::array<double, kNumCategories> z{};
  for (std::size_t c = 0; c < kNumCategories; ++c) {
    double acc = bias_(static_cast<Eigen::Index>(c));
    for (const auto& [j, v] : x) acc += weights_(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(j)) * v;
    z[c] = acc;
  }
  return softmax(z);
}

ClassScores TextModel::predict(std::string_view text) const { return predict_features(features(text)); }

void TextModel::save(const std::filesystem::path& path) const {
  json j;
  j["format"] = "censorlens-textclf";
  j["version"] = 1;
  j["lambda"] = lambda_;
  j["tokenizer"] = "default";
  std::vector<std::string> names;
  for (auto c : all_categories()) names.emplace_back(display_name(c));
  j["categories"] = names;
  j["terms"] = vocabulary_.terms();
  std::vector<double> w(weights_.size());
  for (Eigen::Index c = 0; c < weights_.rows(); ++c)
    for (Eigen::Index v = 0; v < weights_.cols(); ++v) w[c * weights_.cols() + v] = weights_(c, v);
  j["weights"] = w;
  j["bias"] = std::vector<double>(bias_.data(), bias_.data() + bias_.size());
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw IoError("cannot write text model " + path.string());
  out << j.dump();
}

TextModel TextModel::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read text model " + path.string());
  try {
    json j;
    in >> j;
    if (j.at("format") != "censorlens-textclf") throw InvalidArgument("not a text model: " + path.string());
    NgramVocabulary vocab(j.at("terms").get<std::vector<std::string>>());
    const auto w = j.at("weights").get<std::vector<double>>();
    const auto b = j.at("bias").get<std::vector<double>>();
    const auto v = static_cast<Eigen::Index>(vocab.size());
    if (w.size() != kNumCategories * vocab.size() || b.size() != kNumCategories) {
      throw InvalidArgument("text model weight count mismatch in " + path.string());
    }
    Eigen::MatrixXd weights(static_cast<Eigen::Index>(kNumCategories), v);
    for (Eigen::Index c = 0; c < weights.rows(); ++c)
      for (Eigen::Index k = 0; k < v; ++k) weights(c, k) = w[c * v + k];
    Eigen::VectorXd bias = Eigen::Map<const Eigen::VectorXd>(b.data(), static_cast<Eigen::Index>(b.size()));
    return TextModel(std::move(vocab), std::move(weights), std::move(bias), j.at("lambda").get<double>());
  } catch (const json::exception& e) {
    throw InvalidArgument("malformed text model " + path.string() + ": " + e.what());
  }
}

SoftmaxObjective::SoftmaxObjective(std::vector<FeatureVector> features, std::vector<Category> labels,
                                   std::size_t vocabulary_size, double lambda)
    : features_(std::move(features)), labels_(std::move(labels)), vocabulary_size_(vocabulary_size), lambda_(lambda) {
  if (features_.size() != labels_.size() || features_.empty()) throw InvalidArgument("objective needs labeled data");
  if (lambda_ < 0.0 || !std::isfinite(lambda_)) throw InvalidArgument("lambda must be finite and non-negative");
}

Eigen::MatrixXd SoftmaxObjective::unpack_weights(const Eigen::VectorXd& theta) const {
  const auto v = static_cast<Eigen::Index>(vocabulary_size_);
  Eigen::MatrixXd w(static_cast<Eigen::Index>(kNumCategories), v);
  for (Eigen::Index c = 0; c < w.rows(); ++c) w.row(c) = theta.segment(c * v, v).transpose();
  return w;
}

Eigen::VectorXd SoftmaxObjective::unpack_bias(const Eigen::VectorXd& theta) const {
  return theta.tail(static_cast<Eigen::Index>(kNumCategories));
}

double SoftmaxObjective::value(const Eigen::VectorXd& theta) const {
  Eigen::VectorXd scratch;
  return value_and_gradient(theta, scratch);
}

double SoftmaxObjective::value_and_gradient(const Eigen::VectorXd& theta, Eigen::VectorXd& grad) const {
  const auto v = vocabulary_size_;
  const std::size_t bias_at = v * kNumCategories;
  grad.setZero(static_cast<Eigen::Index>(dimension()));
  const double inv_n = 1.0 / static_cast<double>(features_.size());
  double loss = 0;
  std::array<double, kNumCategories> z{};
  for (std::size_t i = 0; i < features_.size(); ++i) {
    const auto& x = features_[i];
    for (std::size_t c = 0; c < kNumCategories; ++c) {
      double acc = theta(static_cast<Eigen::Index>(bias_at + c));
      for (const auto& [j, val] : x) acc += theta(static_cast<Eigen::Index>(c * v + j)) * val;
      z[c] = acc;
    }
    const double zmax = *std::max_element(z.begin(), z.end());
    double sum = 0;
    for (double zc : z) sum += std::exp(zc - zmax);
    const double log_norm = zmax + std::log(sum);
    const std::size_t y = index_of(labels_[i]);
    loss += log_norm - z[y];
    for (std::size_t c = 0; c < kNumCategories; ++c) {
      const double r = (std::exp(z[c] - log_norm) - (c == y ? 1.0 : 0.0)) * inv_n;
      grad(static_cast<Eigen::Index>(bias_at + c)) += r;
      for (const auto& [j, val] : x) grad(static_cast<Eigen::Index>(c * v + j)) += r * val;
    }
  }
  loss *= inv_n;
  const auto nw = static_cast<Eigen::Index>(bias_at);
  loss += 0.5 * lambda_ * theta.head(nw).squaredNorm();
  grad.head(nw) += lambda_ * theta.head(nw);
  return loss;
}

namespace {

struct LbfgsResult {
  Eigen::VectorXd theta;
  int iterations = 0;
  double gradient_norm = 0.0;
  bool converged = false;
};

/// Limited-memory BFGS with Armijo backtracking.
LbfgsResult minimize_lbfgs(const SoftmaxObjective& f, Eigen::VectorXd theta, double tol, int max_iter) {
  constexpr std::size_t kMemory = 10;
  constexpr double kArmijo = 1e-4;
  std::deque<std::pair<Eigen::VectorXd, Eigen::VectorXd>> history;  // (s, y)

  Eigen::VectorXd grad;
  double value = f.value_and_gradient(theta, grad);
  LbfgsResult r;
  for (r.iterations = 0; r.iterations < max_iter; ++r.iterations) {
    r.gradient_norm = grad.norm();
    if (r.gradient_norm <= tol) {
      r.converged = true;
      break;
    }
    // Two-loop recursion.
    Eigen::VectorXd q = grad;
    std::vector<double> alpha(history.size());
    for (std::size_t k = history.size(); k-- > 0;) {
      const auto& [s, y] = history[k];
      alpha[k] = s.dot(q) / y.dot(s);
      q -= alpha[k] * y;
    }
    if (!history.empty()) {
      const auto& [s, y] = history.back();
      q *= s.dot(y) / y.squaredNorm();
    } else {
      q /= std::max(1.0, r.gradient_norm);
    }
    for (std::size_t k = 0; k < history.size(); ++k) {
      const auto& [s, y] = history[k];
      const double beta = y.dot(q) / y.dot(s);
      q += (alpha[k] - beta) * s;
    }
    Eigen::VectorXd direction = -q;
    double slope = grad.dot(direction);
    if (slope >= 0.0) {
      history.clear();
      direction = -grad / std::max(1.0, r.gradient_norm);
      slope = grad.dot(direction);
    }

    double step = 1.0;
    Eigen::VectorXd next_theta, next_grad;
    double next_value = value;
    bool accepted = false;
    for (int halving = 0; halving < 60; ++halving, step *= 0.5) {
      next_theta = theta + step * direction;
      next_value = f.value_and_gradient(next_theta, next_grad);
      if (next_value <= value + kArmijo * step * slope) {
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      // No further decrease is representable; report the current point.
      r.gradient_norm = grad.norm();
      break;
    }
    Eigen::VectorXd s = next_theta - theta;
    Eigen::VectorXd y = next_grad - grad;
    if (s.dot(y) > 1e-12 * s.norm() * y.norm()) {
      history.emplace_back(std::move(s), std::move(y));
      if (history.size() > kMemory) history.pop_front();
    }
    theta = std::move(next_theta);
    grad = std::move(next_grad);
    value = next_value;
  }
  r.gradient_norm = grad.norm();
  r.converged = r.gradient_norm <= tol;
  r.theta = std::move(theta);
  return r;
}

}  // namespace

TextTrainResult train_text_classifier(std::span<const LabeledText> data, const TextTrainOptions& options) {
  if (data.empty()) throw InvalidArgument("cannot train a text classifier on an empty dataset");
  if (!options.tokenizer) throw InvalidArgument("a tokenizer is required");

  std::vector<std::string> warnings;
  std::map<Category, std::size_t> per_category;
  for (const auto& d : data) ++per_category[d.label];
  for (const auto& [c, n] : per_category) {
    if (n < 2) warnings.push_back(fmt::format("category '{}' has only {} training example", display_name(c), n));
  }

  std::vector<std::vector<std::string>> docs;
  docs.reserve(data.size());
  for (const auto& d : data) docs.push_back(options.tokenizer->tokenize(d.text));
  NgramVocabulary vocab = NgramVocabulary::fit(docs, options.min_count);

  std::vector<FeatureVector> features;
  std::vector<Category> labels;
  for (std::size_t i = 0; i < data.size(); ++i) {
    features.push_back(vocab.extract(docs[i]));
    labels.push_back(data[i].label);
  }
  const SoftmaxObjective objective(std::move(features), std::move(labels), vocab.size(), options.lambda);
  auto opt = minimize_lbfgs(objective, Eigen::VectorXd::Zero(static_cast<Eigen::Index>(objective.dimension())),
                            options.tolerance, options.max_iterations);
  if (!opt.converged) {
    warnings.push_back(fmt::format("text classifier stopped after {} iterations with gradient norm {:.3g}",
                                   opt.iterations, opt.gradient_norm));
  }
  for (const auto& w : warnings) spdlog::warn("{}", w);

  TextModel model(std::move(vocab), objective.unpack_weights(opt.theta), objective.unpack_bias(opt.theta),
                  options.lambda, options.tokenizer);
  return {std::move(model), opt.iterations, opt.gradient_norm, opt.converged, std::move(warnings)};
}

std::vector<std::size_t> stratified_folds(std::span<const Category> labels, std::size_t k, std::uint64_t seed) {
  if (k < 2) throw InvalidArgument("cross-validation needs k >= 2");
  std::map<Category, std::vector<std::size_t>> by_category;
  for (std::size_t i = 0; i < labels.size(); ++i) by_category[labels[i]].push_back(i);
  std::vector<std::size_t> fold(labels.size(), 0);
  std::size_t counter = 0;
  for (auto& [category, idx] : by_category) {
    Rng rng(derive_seed(seed, index_of(category)));
    std::shuffle(idx.begin(), idx.end(), rng);
    for (auto i : idx) fold[i] = counter++ % k;
  }
  return fold;
}

CrossValidation crossvalidate(std::span<const LabeledText> data, std::size_t k, const TextTrainOptions& options) {
  if (k < 2) throw InvalidArgument("cross-validation needs k >= 2");
  if (k > data.size()) throw InvalidArgument(fmt::format("k = {} exceeds the {} available examples", k, data.size()));

  CrossValidation cv;
  std::vector<Category> labels;
  for (const auto& d : data) labels.push_back(d.label);
  std::map<Category, std::size_t> per_category;
  for (auto c : labels) ++per_category[c];
  for (const auto& [c, n] : per_category) {
    if (n < k) {
      cv.warnings.push_back(
          fmt::format("category '{}' has {} examples (< k = {}); some folds will not contain it", display_name(c), n, k));
    }
  }
  cv.fold_of = stratified_folds(labels, k, options.seed);

  std::vector<Category> predicted(data.size(), Category::Other);
  for (std::size_t f = 0; f < k; ++f) {
    std::vector<LabeledText> train;
    std::vector<std::size_t> held_out;
    for (std::size_t i = 0; i < data.size(); ++i) {
      if (cv.fold_of[i] == f) {
        held_out.push_back(i);
      } else {
        train.push_back(data[i]);
      }
    }
    if (held_out.empty()) continue;
    auto result = train_text_classifier(train, options);
    for (auto i : held_out) predicted[i] = result.model.predict(data[i].text).argmax();
  }
  cv.report = evaluate_predictions(labels, predicted);
  for (const auto& w : cv.warnings) spdlog::warn("{}", w);
  return cv;
}

}  // namespace censorlens::textclf
