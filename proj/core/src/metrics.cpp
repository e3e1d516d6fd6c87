#include "censorlens/metrics.hpp"

#include <fstream>

#include <fmt/format.h>

#include "censorlens/error.hpp"

namespace censorlens {

EvalReport evaluate_predictions(std::span<const Category> truth, std::span<const Category> predicted) {
  if (truth.size() != predicted.size()) throw InvalidArgument("truth and prediction lengths differ");
  if (truth.empty()) throw InvalidArgument("cannot evaluate an empty test set");

  EvalReport r;
  r.total = truth.size();
  for (std::size_t i = 0; i < truth.size(); ++i) ++r.confusion[index_of(truth[i])][index_of(predicted[i])];

  std::size_t correct = 0;
  std::size_t present = 0;
  for (std::size_t c = 0; c < kNumCategories; ++c) {
    std::size_t support = 0, predicted_c = 0;
    for (std::size_t k = 0; k < kNumCategories; ++k) {
      support += r.confusion[c][k];
      predicted_c += r.confusion[k][c];
    }
    const std::size_t tp = r.confusion[c][c];
    correct += tp;
    if (support == 0) continue;
    const std::size_t fp = predicted_c - tp;
    const std::size_t tn = r.total - support - fp;
    ClassMetrics m;
    m.support = support;
    m.precision = predicted_c > 0 ? static_cast<double>(tp) / predicted_c : 0.0;
    m.recall = static_cast<double>(tp) / support;
    m.f1 = m.precision + m.recall > 0 ? 2 * m.precision * m.recall / (m.precision + m.recall) : 0.0;
    m.false_positive_rate = fp + tn > 0 ? static_cast<double>(fp) / (fp + tn) : 0.0;
    r.per_class[c] = m;
    r.macro_precision += m.precision;
    r.macro_recall += m.recall;
    r.macro_f1 += m.f1;
    ++present;
  }
  r.macro_precision /= present;
  r.macro_recall /= present;
  r.macro_f1 /= present;
  r.accuracy = static_cast<double>(correct) / r.total;
  r.micro_precision = r.micro_recall = r.micro_f1 = r.accuracy;
  return r;
}

std::string format_report(const EvalReport& r) {
  std::string out = fmt::format("{:<20} {:>9} {:>9} {:>9} {:>9} {:>8}\n", "category", "precision", "recall", "f1",
                                "fp_rate", "support");
  for (std::size_t c = 0; c < kNumCategories; ++c) {
    const auto& m = r.per_class[c];
    if (!m) continue;
    out += fmt::format("{:<20} {:>9.3f} {:>9.3f} {:>9.3f} {:>9.3f} {:>8}\n", display_name(category_at(c)),
                       m->precision, m->recall, m->f1, m->false_positive_rate, m->support);
  }
  out += fmt::format("{:<20} {:>9.3f} {:>9.3f} {:>9.3f}\n", "macro", r.macro_precision, r.macro_recall, r.macro_f1);
  out += fmt::format("{:<20} {:>9.3f} {:>9.3f} {:>9.3f}\n", "micro", r.micro_precision, r.micro_recall, r.micro_f1);
  out += fmt::format("accuracy {:.4f} over {} examples\n", r.accuracy, r.total);
  return out;
}

void write_report_csv(const std::filesystem::path& dir, const std::string& stem, const EvalReport& r) {
  std::ofstream metrics(dir / (stem + "_metrics.csv"));
  std::ofstream confusion(dir / (stem + "_confusion.csv"));
  if (!metrics || !confusion) throw IoError("cannot write report files in " + dir.string());

  metrics << "category,precision,recall,f1,fp_rate,support\n";
  for (std::size_t c = 0; c < kNumCategories; ++c) {
    const auto& m = r.per_class[c];
    if (!m) continue;
    metrics << fmt::format("{},{:.6f},{:.6f},{:.6f},{:.6f},{}\n", slug(category_at(c)), m->precision, m->recall, m->f1,
                           m->false_positive_rate, m->support);
  }
  metrics << fmt::format("macro,{:.6f},{:.6f},{:.6f},,{}\n", r.macro_precision, r.macro_recall, r.macro_f1, r.total);
  metrics << fmt::format("micro,{:.6f},{:.6f},{:.6f},,{}\n", r.micro_precision, r.micro_recall, r.micro_f1, r.total);

  confusion << "true\\predicted";
  for (auto c : all_categories()) confusion << ',' << slug(c);
  confusion << '\n';
  for (std::size_t t = 0; t < kNumCategories; ++t) {
    confusion << slug(category_at(t));
    for (std::size_t p = 0; p < kNumCategories; ++p) confusion << ',' << r.confusion[t][p];
    confusion << '\n';
  }
}

}  // namespace censorlens
