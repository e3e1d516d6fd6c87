// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any
// failure. Thresholds are fixed here and must not be relaxed to get green.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <numeric>
#include <random>
#include <set>
#include <string>
#include <vector>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "censorlens/analytics/cox.hpp"
#include "censorlens/analytics/kappa.hpp"
#include "censorlens/analytics/rates.hpp"
#include "censorlens/analytics/report.hpp"
#include "censorlens/app/cli.hpp"
#include "censorlens/augment.hpp"
#include "censorlens/imgclf/cam.hpp"
#include "censorlens/scores.hpp"
#include "censorlens/synth.hpp"
#include "censorlens/textclf/model.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace censorlens;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

// ---------------------------------------------------------------------------

Outcome cox_grid_oracle() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(20240601);
  std::uniform_int_distribution<int> size(4, 8);
  std::bernoulli_distribution coin(0.5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int datasets = 0, attempts = 0;
  double worst = 0.0;
  Outcome out;
  while (datasets < 25 && attempts < 1000) {
    ++attempts;
    const int n = size(rng);
    Eigen::MatrixXd X(n, 1);
    std::vector<double> t(n);
    std::vector<int> e(n);
    std::vector<double> perm(n);
    std::iota(perm.begin(), perm.end(), 1.0);
    std::shuffle(perm.begin(), perm.end(), rng);
    for (int i = 0; i < n; ++i) {
      X(i, 0) = coin(rng) ? 1.0 : 0.0;
      t[i] = perm[i];  // distinct times: no ties
      e[i] = u(rng) < 0.75 ? 1 : 0;
    }
    // Skip data whose maximizer lies at infinity (or off the grid); there
    // is no finite estimate to compare.
    const double grid = oracle::grid_argmax(X, t, e, -5.0, 5.0, 1e-3);
    if (std::abs(grid) > 4.5) continue;
    analytics::CoxFit fit;
    try {
      fit = analytics::fit_cox(X, t, e, {"x"}, {.tolerance = 1e-10});
    } catch (const std::exception&) {
      continue;  // constant covariate
    }
    const auto* term = fit.term("x");
    if (!term || !term->estimate) continue;
    const double diff = std::abs(term->estimate->beta - grid);
    worst = std::max(worst, diff);
    if (diff >= 2e-3) out.pass = false;
    ++datasets;
  }
  const double secs = seconds_since(t0);
  if (datasets < 20 || secs >= 10.0) out.pass = false;
  out.detail = fmt::format("{} datasets, max |beta_fit - beta_grid| = {:.2e} (< 2e-3), {:.2f} s (< 10 s)", datasets,
                           worst, secs);
  return out;
}

Outcome cox_gradient_check() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(77);
  std::uniform_int_distribution<int> size(5, 40);
  std::uniform_int_distribution<int> dims(1, 5);
  std::normal_distribution<double> z(0.0, 0.7);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const auto n = static_cast<std::size_t>(size(rng));
    const auto p = static_cast<std::size_t>(dims(rng));
    auto d = oracle::random_survival(n, p, rng, 0.7, trial % 2 == 1);
    Eigen::VectorXd beta(static_cast<Eigen::Index>(p));
    for (auto& b : beta) b = z(rng);
    const auto pl = analytics::breslow_partial_likelihood(d.X, d.time, d.event, beta);
    const auto fd = oracle::breslow_fd_gradient(d.X, d.time, d.event, beta, 1e-5);
    const double rel = (pl.gradient - fd).norm() / std::max(fd.norm(), 1e-300);
    worst = std::max(worst, rel);
  }
  const double secs = seconds_since(t0);
  return {worst < 1e-6 && secs < 10.0,
          fmt::format("100 pairs, max relative error {:.2e} (< 1e-6), {:.2f} s (< 10 s)", worst, secs)};
}

Outcome planted_recovery() {
  const auto t0 = Clock::now();
  synth::GeneratorConfig config;
  config.n = 5000;
  config.render_images = false;
  config.seed = 1;
  const auto base = analytics::fit_cox(fixture::pooled_oracle_records(synth::generate_corpus(config), config));
  const auto& s = *base.term("sentiment")->estimate;
  int negative = 0;
  for (std::uint64_t r = 0; r < 20; ++r) {
    config.seed = 1000 + r;
    const auto fit = analytics::fit_cox(fixture::pooled_oracle_records(synth::generate_corpus(config), config));
    if (fit.term("sentiment")->estimate->beta < 0) ++negative;
  }
  const double secs = seconds_since(t0);
  const bool pass = s.beta >= -0.4 && s.beta <= -0.2 && s.p < 0.05 && negative >= 19 && secs < 120.0;
  return {pass, fmt::format("beta_hat = {:.4f} in [-0.4, -0.2], p = {:.1e} (< 0.05), negative in {}/20 reseeds "
                            "(>= 95%), {:.1f} s (< 120 s)",
                            s.beta, s.p, negative, secs)};
}

Outcome cox_invariances() {
  std::mt19937_64 rng(4242);
  auto d = oracle::random_survival(300, 3, rng, 0.6, true);
  // Plant some signal so estimates are not all near zero.
  for (Eigen::Index i = 0; i < d.X.rows(); ++i) d.time[i] *= std::exp(-0.5 * d.X(i, 0) + 0.3 * d.X(i, 2));
  const std::vector<std::string> names{"a", "b", "c"};
  const analytics::CoxOptions opts{.tolerance = 1e-12, .max_iterations = 200};
  const auto base = analytics::fit_cox(d.X, d.time, d.event, names, opts);

  double worst_scale = 0.0, worst_shift = 0.0, worst_ll = 0.0;
  for (double a : {1e-3, 0.25, 7.5, 1e3}) {
    Eigen::MatrixXd Xs = d.X;
    Xs.col(1) *= a;
    const auto fit = analytics::fit_cox(Xs, d.time, d.event, names, opts);
    for (std::size_t k = 0; k < 3; ++k) {
      const double expect = base.terms[k].estimate->beta / (k == 1 ? a : 1.0);
      worst_scale = std::max(worst_scale, std::abs(fit.terms[k].estimate->beta - expect) / std::abs(expect));
    }
    worst_ll = std::max(worst_ll, std::abs(fit.log_likelihood - base.log_likelihood));
  }
  for (double c : {-50.0, 3.0, 1e4}) {
    Eigen::MatrixXd Xs = d.X;
    Xs.col(0).array() += c;
    const auto fit = analytics::fit_cox(Xs, d.time, d.event, names, opts);
    for (std::size_t k = 0; k < 3; ++k) {
      worst_shift = std::max(worst_shift, std::abs(fit.terms[k].estimate->beta - base.terms[k].estimate->beta));
    }
    worst_ll = std::max(worst_ll, std::abs(fit.log_likelihood - base.log_likelihood));
  }
  const bool pass = worst_scale < 1e-6 && worst_shift < 1e-8 && worst_ll < 1e-8;
  return {pass, fmt::format("rescale rel err {:.1e} (< 1e-6), shift abs err {:.1e} (< 1e-8), log-lik diff {:.1e} "
                            "(< 1e-8)",
                            worst_scale, worst_shift, worst_ll)};
}

Outcome cam_equivalence() {
  std::mt19937_64 rng(31337);
  std::uniform_int_distribution<int> kdist(1, 8), side(1, 5), byte(0, 255);
  std::normal_distribution<double> z;
  double worst = 0.0;
  bool one_hot_exact = true;
  int models = 0;
  for (int trial = 0; trial < 60; ++trial) {
    const int K = kdist(rng);
    const int s = side(rng);
    imgclf::ConvNet net({.input_side = s, .channels = {K}}, rng());
    for (auto& w : net.head_weight()) w = z(rng);
    Image img(s, s);
    for (auto& v : img.data()) v = static_cast<std::uint8_t>(byte(rng));
    const auto f = net.features(net.prepare_input(img));
    for (auto c : all_categories()) {
      const auto expect = oracle::cam(f, net.head_row(c));
      const auto grid = imgclf::cam_grid(net, img, c);
      const auto full = imgclf::cam(net, img, c);
      for (std::size_t j = 0; j < expect.size(); ++j) {
        worst = std::max({worst, std::abs(grid.values[j] - expect[j]), std::abs(full.values[j] - expect[j])});
      }
    }
    // One-hot head row: the CAM is the normalized selected feature map.
    const int k = std::uniform_int_distribution<int>(0, K - 1)(rng);
    const auto cat = Category::Protest;
    auto w = net.head_weight();
    for (int j = 0; j < K; ++j) w[index_of(cat) * K + j] = j == k ? 1.0 : 0.0;
    const auto m = imgclf::cam_grid(net, img, cat);
    imgclf::Heatmap fk{s, s, std::vector<double>(f.values.begin() + static_cast<std::ptrdiff_t>(k * f.plane()),
                                                 f.values.begin() + static_cast<std::ptrdiff_t>((k + 1) * f.plane()))};
    if (m.values != imgclf::normalize_minmax(fk).values) one_hot_exact = false;
    ++models;
  }
  return {worst < 1e-6 && one_hot_exact,
          fmt::format("{} random models (K <= 8, h,w <= 5), max |cam - oracle| = {:.1e} (< 1e-6), one-hot exact: {}",
                      models, worst, one_hot_exact)};
}

Outcome kappa_oracles() {
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<int> label(0, 14);
  std::vector<int> a(200), b(200);
  for (auto& v : a) v = label(rng);
  const auto perfect = analytics::cohens_kappa<int>(a, a);
  const bool perfect_ok = perfect.kappa && *perfect.kappa == 1.0;

  std::vector<int> ra, rb;
  auto add = [&](int x, int y, int count) {
    for (int i = 0; i < count; ++i) {
      ra.push_back(x);
      rb.push_back(y);
    }
  };
  add(0, 0, 20);
  add(0, 1, 5);
  add(1, 0, 10);
  add(1, 1, 15);
  const auto table = analytics::cohens_kappa<int>(ra, rb);
  const bool table_ok = table.kappa && *table.kappa == 0.4 &&
                        std::abs(oracle::kappa_from_table({{20, 5}, {10, 15}}) - 0.4) < 1e-12;

  for (auto& v : b) v = std::bernoulli_distribution(0.6)(rng) ? a[&v - b.data()] : label(rng);
  const auto ref = *analytics::cohens_kappa<int>(a, b).kappa;
  bool invariant = true;
  std::vector<int> perm(15);
  std::iota(perm.begin(), perm.end(), 0);
  for (int r = 0; r < 50; ++r) {
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<int> pa(a.size()), pb(b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      pa[i] = perm[a[i]];
      pb[i] = perm[b[i]];
    }
    if (*analytics::cohens_kappa<int>(pa, pb).kappa != ref) invariant = false;
  }
  return {perfect_ok && table_ok && invariant,
          fmt::format("perfect = {}, [[20,5],[10,15]] = {}, invariant over 50 permutations: {}",
                      perfect.kappa.value_or(NAN), table.kappa.value_or(NAN), invariant)};
}

Outcome threshold_gate() {
  std::mt19937_64 rng(8080);
  std::normal_distribution<double> z;
  std::uniform_real_distribution<double> temp(0.2, 8.0);
  int iff_violations = 0, monotone_violations = 0, topic_argmax = 0;
  std::vector<double> grid;
  for (int k = 1; k <= 20; ++k) grid.push_back(0.05 * k);
  for (int i = 0; i < 1000; ++i) {
    std::array<double, kNumCategories> logits{};
    const double t = temp(rng);
    for (auto& l : logits) l = z(rng) * t;
    const auto s = softmax(logits);
    const bool other = decide(s, 0.80) == Category::Other;
    // Other is also the answer when Other itself is the confident argmax.
    const bool expect_other = s.max() < 0.80 || s.argmax() == Category::Other;
    if (other != expect_other) ++iff_violations;
    if (s.argmax() != Category::Other) ++topic_argmax;
    bool seen_other = false;
    for (double th : grid) {
      const bool o = decide(s, th) == Category::Other;
      if (seen_other && !o) ++monotone_violations;
      seen_other = seen_other || o;
    }
  }
  return {iff_violations == 0 && monotone_violations == 0,
          fmt::format("1000 vectors ({} with topic argmax): iff violations {}, monotonicity violations {} over a "
                      "20-point grid",
                      topic_argmax, iff_violations, monotone_violations)};
}

Outcome rate_arithmetic() {
  struct Case {
    std::size_t c, u;
    double printed;
  };
  bool ok = true;
  std::string detail;
  for (const auto& cs : {Case{536, 220, 70.9}, Case{2664, 2551, 51.1}, Case{1745, 1029, 62.9}}) {
    const double pct = 100.0 * analytics::censorship_rate(cs.c, cs.u);
    ok = ok && std::abs(pct - cs.printed) <= 0.5;
    detail += fmt::format("({},{}) -> {:.2f}% ", cs.c, cs.u, pct);
  }
  const auto checks = analytics::check_published_rates();
  const auto table = analytics::render_text(analytics::published_rate_check_table(checks));
  std::set<Category> flagged;
  for (const auto& r : checks) {
    if (!r.consistent) flagged.insert(r.published.category);
  }
  std::size_t flagged_lines = 0;
  for (auto pos = table.find("UNRECONCILED"); pos != std::string::npos; pos = table.find("UNRECONCILED", pos + 1)) {
    ++flagged_lines;
  }
  const bool mismatch = flagged == std::set<Category>{Category::BoXilai, Category::InjuryDead} && flagged_lines == 2;
  ok = ok && mismatch;
  detail += fmt::format("| flagged rows: {}", flagged.size());
  for (auto c : flagged) detail += fmt::format(" [{}]", display_name(c));
  return {ok, detail};
}

Outcome augmentation() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(5);
  auto random_image = [&](int side) {
    Image img(side, side);
    for (auto& v : img.data()) v = static_cast<std::uint8_t>(rng() & 0xFF);
    return img;
  };
  std::vector<augment::Item> ten;
  for (int i = 0; i < 10; ++i) ten.push_back({random_image(64), category_at(static_cast<std::size_t>(i % 15))});
  Rng spec_rng(17);
  std::vector<augment::AugmentationSpec> specs;
  for (auto k : augment::kAllKinds) specs.push_back(augment::sample_spec(k, spec_rng));
  const auto first = augment::augment_dataset(ten, specs, 123);
  const auto second = augment::augment_dataset(ten, specs, 123);
  bool identical = first.size() == second.size();
  for (std::size_t i = 0; identical && i < first.size(); ++i) identical = first[i].image == second[i].image;

  std::vector<augment::Item> big;
  big.reserve(5038);
  for (int i = 0; i < 5038; ++i) big.push_back({random_image(64), category_at(static_cast<std::size_t>(i % 15))});
  const auto expanded = augment::augment_to_target_size(big, 18966, 2024);
  const auto again = augment::augment_to_target_size(std::span(big).first(200), 700, 2024);
  const auto again2 = augment::augment_to_target_size(std::span(big).first(200), 700, 2024);
  bool target_identical = again.size() == again2.size();
  for (std::size_t i = 0; target_identical && i < again.size(); ++i) {
    target_identical = again[i].image == again2[i].image;
  }
  const double secs = seconds_since(t0);
  const auto diff = static_cast<long>(expanded.size()) - 18966L;
  const bool pass = identical && target_identical && first.size() == 70 && std::abs(diff) <= 6 && secs < 120.0;
  return {pass, fmt::format("reruns identical: {}, 10 x 6 specs -> {} (= 70), 5038 -> {} (18966 +/- 6), {:.1f} s "
                            "(< 120 s at 64x64)",
                            identical && target_identical, first.size(), expanded.size(), secs)};
}

Outcome end_to_end() {
  const auto t0 = Clock::now();
  fixture::TempDir tmp("e2e");
  const auto root = tmp.path();
  const auto syn = (root / "syn").string();
  const auto ws = (root / "ws").string();
  const auto ws_oracle = (root / "ws_oracle").string();
  std::vector<std::string> failures;
  auto run = [&](std::vector<std::string> args) {
    args.insert(args.begin(), {"censorlens", "--log-level", "warn"});
    const int code = app::run(args);
    if (code != 0) failures.push_back(fmt::format("`{}` exited {}", fmt::join(args, " "), code));
    return code == 0;
  };
  const std::string start = "2015-01-01T00:00:00Z", end = "2015-01-31T12:00:00Z";
  bool ok = run({"synth", "--out", syn, "-n", "5000", "--seed", "7"}) &&
            run({"-w", ws, "ingest", "--posts", syn + "/posts.jsonl", "--images", syn + "/images", "--window-start",
                 start, "--window-end", end}) &&
            run({"-w", ws, "train-image", "--train", syn + "/images_train", "--test", syn + "/images_test",
                 "--input-side", "32", "--channels", "8", "16", "32", "--epochs", "30", "--learning-rate", "0.02",
                 "--lr-decay", "0.95"}) &&
            run({"-w", ws, "train-text", "--train", syn + "/texts_train.csv", "--test", syn + "/texts_test.csv"}) &&
            run({"-w", ws, "classify", "--lexicon-positive", syn + "/lexicon/positive.txt", "--lexicon-negative",
                 syn + "/lexicon/negative.txt"}) &&
            run({"-w", ws, "analyze", "--max-followup-minutes", "720"}) &&
            run({"-w", ws_oracle, "ingest", "--posts", syn + "/posts.jsonl", "--images", syn + "/images",
                 "--window-start", start, "--window-end", end}) &&
            run({"-w", ws_oracle, "classify", "--oracle", syn + "/ground_truth.csv", "--sentiment", "oracle"}) &&
            run({"-w", ws_oracle, "analyze", "--max-followup-minutes", "720"});
  const double secs = seconds_since(t0);
  if (!ok) return {false, failures.empty() ? "pipeline failed" : failures.front()};

  auto load = [](const std::string& path) { return nlohmann::json::parse(std::ifstream(path)); };
  const double f1_image = load(ws + "/models/image_train.json")["test"]["macro_f1"].get<double>();
  const double f1_text = load(ws + "/models/text_train.json")["test"]["macro_f1"].get<double>();
  const double b_model = load(ws + "/analysis/summary.json")["pooled"]["terms"]["sentiment"]["beta"].get<double>();
  const double b_oracle =
      load(ws_oracle + "/analysis/summary.json")["pooled"]["terms"]["sentiment"]["beta"].get<double>();
  const double delta = std::abs(b_model - b_oracle);
  const bool pass = f1_image >= 0.9 && f1_text >= 0.9 && delta < 0.05 && secs < 600.0;
  return {pass, fmt::format("image macro-F1 {:.3f}, text macro-F1 {:.3f} (>= 0.9), beta_sentiment model {:.4f} vs "
                            "oracle {:.4f}, |diff| {:.4f} (< 0.05), {:.1f} s (< 600 s)",
                            f1_image, f1_text, b_model, b_oracle, delta, secs)};
}

Outcome text_regularization() {
  const auto vocab = synth::make_vocabulary(20150101);
  const auto data = synth::generate_labeled_texts(vocab, 20, {}, 3);
  double prev = INFINITY;
  bool monotone = true;
  std::string norms;
  for (double lambda : {1e-4, 1e-3, 1e-2, 1e-1, 1.0}) {
    const auto r = textclf::train_text_classifier(data, {.lambda = lambda, .tolerance = 1e-8, .max_iterations = 2000});
    const double norm = r.model.weights().norm();
    if (norm > prev) monotone = false;
    prev = norm;
    norms += fmt::format("{:.3f} ", norm);
  }
  std::vector<Category> labels;
  for (const auto& d : data) labels.push_back(d.label);
  const auto folds = textclf::stratified_folds(labels, 10, 11);
  std::vector<std::set<std::size_t>> members(10);
  bool in_range = folds.size() == labels.size();
  for (std::size_t i = 0; i < folds.size(); ++i) {
    if (folds[i] >= 10) {
      in_range = false;
      continue;
    }
    members[folds[i]].insert(i);
  }
  std::size_t covered = 0;
  bool nonempty = true;
  for (const auto& m : members) {
    covered += m.size();
    nonempty = nonempty && !m.empty();
  }
  std::set<std::size_t> uni;
  for (const auto& m : members) uni.insert(m.begin(), m.end());
  const bool cover = in_range && nonempty && covered == labels.size() && uni.size() == labels.size();
  return {monotone && cover, fmt::format("||W|| over lambda 1e-4..1: {}(non-increasing: {}); 10 folds disjoint "
                                         "cover of {} items: {}",
                                         norms, monotone, labels.size(), cover)};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"cox-grid-oracle", cox_grid_oracle},
      {"cox-gradient-check", cox_gradient_check},
      {"planted-coefficient-recovery", planted_recovery},
      {"cox-invariances", cox_invariances},
      {"cam-brute-force", cam_equivalence},
      {"kappa-oracles", kappa_oracles},
      {"threshold-gate", threshold_gate},
      {"rate-arithmetic", rate_arithmetic},
      {"augmentation-determinism-size", augmentation},
      {"end-to-end-synthetic", end_to_end},
      {"text-regularization-folds", text_regularization},
  };
  int failed = 0;
  for (const auto& [name, check] : criteria) {
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::printf("%s %s: %s\n", o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
