#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>

#include "censorlens/category.hpp"

namespace censorlens {

struct ClassMetrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  /// FP / (FP + TN).
  double false_positive_rate = 0.0;
  std::size_t support = 0;
};

using ConfusionMatrix = std::array<std::array<std::size_t, kNumCategories>, kNumCategories>;

/// Single-label classification report. Rows of `confusion` are true labels,
/// columns predicted labels. Categories without test examples have no
/// per-class entry and are excluded from the macro averages. Micro averages
/// equal accuracy for single-label data and are reported for completeness.
struct EvalReport {
  std::array<std::optional<ClassMetrics>, kNumCategories> per_class{};
  ConfusionMatrix confusion{};
  std::size_t total = 0;
  double accuracy = 0.0;
  double macro_precision = 0.0;
  double macro_recall = 0.0;
  double macro_f1 = 0.0;
  double micro_precision = 0.0;
  double micro_recall = 0.0;
  double micro_f1 = 0.0;
};

/// Throws InvalidArgument on length mismatch or empty input.
EvalReport evaluate_predictions(std::span<const Category> truth, std::span<const Category> predicted);

std::string format_report(const EvalReport& report);

/// Writes per-class metrics and the confusion matrix as two CSV files:
/// `<stem>_metrics.csv` and `<stem>_confusion.csv` in `dir`.
void write_report_csv(const std::filesystem::path& dir, const std::string& stem, const EvalReport& report);

}  // namespace censorlens
