#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "censorlens/category.hpp"
#include "censorlens/metrics.hpp"
#include "censorlens/scores.hpp"
#include "censorlens/textclf/ngram.hpp"
#include "censorlens/textclf/tokenizer.hpp"

namespace censorlens::textclf {

struct LabeledText {
  std::string text;
  Category label = Category::Other;
};

/// Reads a delimited file with a header naming `text` and `category`
/// columns (any order). Throws IoError / InvalidArgument.
std::vector<LabeledText> read_labeled_texts(const std::filesystem::path& path);
void write_labeled_texts(const std::filesystem::path& path, std::span<const LabeledText> rows);

/// Multinomial logistic regression over n-gram counts. Decision is the
/// argmax of the softmax; no confidence gate is applied to text.
class TextModel {
 public:
  TextModel(NgramVocabulary vocabulary, Eigen::MatrixXd weights, Eigen::VectorXd bias, double lambda,
            std::shared_ptr<const Tokenizer> tokenizer = default_tokenizer());

  const NgramVocabulary& vocabulary() const { return vocabulary_; }
  /// kNumCategories x V.
  const Eigen::MatrixXd& weights() const { return weights_; }
  const Eigen::VectorXd& bias() const { return bias_; }
  double lambda() const { return lambda_; }
  const Tokenizer& tokenizer() const { return *tokenizer_; }

  FeatureVector features(std::string_view text) const;
  ClassScores predict_features(const FeatureVector& x) const;
  ClassScores predict(std::string_view text) const;

  void save(const std::filesystem::path& path) const;
  static TextModel load(const std::filesystem::path& path);

 private:
  NgramVocabulary vocabulary_;
  Eigen::MatrixXd weights_;
  Eigen::VectorXd bias_;
  double lambda_ = 0.0;
  std::shared_ptr<const Tokenizer> tokenizer_;
};

/// f(W, b) = mean_i -log softmax(W x_i + b)[y_i] + (lambda / 2) ||W||^2.
/// Parameters are packed as W (row-major) followed by b. The bias is not
/// regularized.
class SoftmaxObjective {
 public:
  SoftmaxObjective(std::vector<FeatureVector> features, std::vector<Category> labels, std::size_t vocabulary_size,
                   double lambda);

  std::size_t dimension() const { return (vocabulary_size_ + 1) * kNumCategories; }
  double value(const Eigen::VectorXd& theta) const;
  double value_and_gradient(const Eigen::VectorXd& theta, Eigen::VectorXd& gradient) const;

  Eigen::MatrixXd unpack_weights(const Eigen::VectorXd& theta) const;
  Eigen::VectorXd unpack_bias(const Eigen::VectorXd& theta) const;

 private:
  std::vector<FeatureVector> features_;
  std::vector<Category> labels_;
  std::size_t vocabulary_size_;
  double lambda_;
};

struct TextTrainOptions {
  double lambda = 1e-3;
  /// Recorded for reproducibility; optimization is full-batch from a zero
  /// start and does not consume randomness.
  std::uint64_t seed = 0;
  double tolerance = 1e-5;
  int max_iterations = 500;
  std::size_t min_count = 2;
  std::shared_ptr<const Tokenizer> tokenizer = default_tokenizer();
};

struct TextTrainResult {
  TextModel model;
  int iterations = 0;
  double gradient_norm = 0.0;
  bool converged = false;
  std::vector<std::string> warnings;
};

/// L-BFGS on the convex objective until ||grad|| <= tolerance or the
/// iteration cap (reported as a warning). Throws InvalidArgument on empty data.
TextTrainResult train_text_classifier(std::span<const LabeledText> data, const TextTrainOptions& options = {});

/// Stratified fold assignment: each category's shuffled examples are dealt
/// round-robin, continuing the counter across categories.
std::vector<std::size_t> stratified_folds(std::span<const Category> labels, std::size_t k, std::uint64_t seed);

struct CrossValidation {
  EvalReport report;
  std::vector<std::size_t> fold_of;
  std::vector<std::string> warnings;
};

/// Stratified k-fold CV with a pooled confusion matrix. The vocabulary is
/// refit on each training fold. Throws InvalidArgument when k < 2 or k
/// exceeds the data size.
CrossValidation crossvalidate(std::span<const LabeledText> data, std::size_t k, const TextTrainOptions& options = {});

}  // namespace censorlens::textclf
