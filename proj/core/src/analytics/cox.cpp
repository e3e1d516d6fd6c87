#include "censorlens/analytics/cox.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <fmt/format.h>

#include "censorlens/error.hpp"

namespace censorlens::analytics {
namespace {

void check_shapes(const Eigen::MatrixXd& X, std::span<const double> time, std::span<const int> event) {
  const auto n = static_cast<std::size_t>(X.rows());
  if (time.size() != n || event.size() != n) throw InvalidArgument("cox: X, time and event lengths differ");
  for (std::size_t i = 0; i < n; ++i) {
    if (!(time[i] > 0.0) || !std::isfinite(time[i])) throw InvalidArgument("cox: durations must be positive");
    if (event[i] != 0 && event[i] != 1) throw InvalidArgument("cox: event flags must be 0 or 1");
  }
  if (!X.allFinite()) throw InvalidArgument("cox: covariates must be finite");
}

/// Indices ordered by decreasing time.
std::vector<std::size_t> descending_time_order(std::span<const double> time) {
  std::vector<std::size_t> order(time.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return time[a] > time[b]; });
  return order;
}

PartialLikelihood evaluate(const Eigen::MatrixXd& X, std::span<const double> time, std::span<const int> event,
                           const std::vector<std::size_t>& order, const Eigen::VectorXd& beta, bool with_derivatives) {
  const auto n = X.rows();
  const auto p = X.cols();
  const Eigen::VectorXd eta = X * beta;
  const double shift = n > 0 ? eta.maxCoeff() : 0.0;

  PartialLikelihood out;
  out.gradient = Eigen::VectorXd::Zero(p);
  out.information = Eigen::MatrixXd::Zero(p, p);
  double s0 = 0.0;
  Eigen::VectorXd s1 = Eigen::VectorXd::Zero(p);
  Eigen::MatrixXd s2 = Eigen::MatrixXd::Zero(p, p);

  std::size_t k = 0;
  while (k < order.size()) {
    // Everyone tied at this time enters the risk set before any of the
    // group's events is scored (Breslow).
    std::size_t end = k;
    const double t = time[order[k]];
    while (end < order.size() && time[order[end]] == t) {
      const auto i = static_cast<Eigen::Index>(order[end]);
      const double w = std::exp(eta(i) - shift);
      s0 += w;
      if (with_derivatives) {
        s1.noalias() += w * X.row(i).transpose();
        s2.noalias() += w * X.row(i).transpose() * X.row(i);
      }
      ++end;
    }
    const double log_s0 = shift + std::log(s0);
    Eigen::VectorXd mean;
    Eigen::MatrixXd cov;
    if (with_derivatives) {
      mean = s1 / s0;
      cov = s2 / s0 - mean * mean.transpose();
    }
    for (std::size_t g = k; g < end; ++g) {
      const auto i = static_cast<Eigen::Index>(order[g]);
      if (event[order[g]] == 0) continue;
      out.value += eta(i) - log_s0;
      if (with_derivatives) {
        out.gradient.noalias() += X.row(i).transpose() - mean;
        out.information += cov;
      }
    }
    k = end;
  }
  return out;
}

}  // namespace

PartialLikelihood breslow_partial_likelihood(const Eigen::MatrixXd& X, std::span<const double> time,
                                             std::span<const int> event, const Eigen::VectorXd& beta) {
  check_shapes(X, time, event);
  if (beta.size() != X.cols()) throw InvalidArgument("cox: beta length differs from covariate count");
  return evaluate(X, time, event, descending_time_order(time), beta, true);
}

double breslow_log_likelihood(const Eigen::MatrixXd& X, std::span<const double> time, std::span<const int> event,
                              const Eigen::VectorXd& beta) {
  check_shapes(X, time, event);
  if (beta.size() != X.cols()) throw InvalidArgument("cox: beta length differs from covariate count");
  return evaluate(X, time, event, descending_time_order(time), beta, false).value;
}

double wald_p_value(double z) { return std::erfc(std::abs(z) / std::sqrt(2.0)); }

const CoxTerm* CoxFit::term(std::string_view name) const {
  for (const auto& t : terms) {
    if (t.name == name) return &t;
  }
  return nullptr;
}

CoxFit fit_cox(const Eigen::MatrixXd& X, std::span<const double> time, std::span<const int> event,
               const std::vector<std::string>& names, const CoxOptions& options) {
  check_shapes(X, time, event);
  if (names.size() != static_cast<std::size_t>(X.cols())) throw InvalidArgument("cox: one name per covariate");
  if (!(options.tolerance > 0.0) || options.max_iterations < 1) throw InvalidArgument("cox: bad solver options");

  CoxFit fit;
  fit.n = static_cast<std::size_t>(X.rows());
  fit.events = static_cast<std::size_t>(std::count(event.begin(), event.end(), 1));
  if (fit.events == 0) throw InvalidArgument("cox: no events among the records");

  // Standardize usable columns; drop constant and linearly dependent ones.
  const auto n = X.rows();
  std::vector<Eigen::Index> kept;
  std::vector<double> centers, scales;
  Eigen::MatrixXd Z(n, 0);
  fit.terms.resize(names.size());
  for (Eigen::Index j = 0; j < X.cols(); ++j) {
    auto& term = fit.terms[static_cast<std::size_t>(j)];
    term.name = names[static_cast<std::size_t>(j)];
    const double mean = X.col(j).mean();
    const double sd = std::sqrt((X.col(j).array() - mean).square().mean());
    if (!(sd > 1e-12 * std::max(1.0, std::abs(mean)))) {
      term.diagnostic = "zero variance; not identifiable";
      continue;
    }
    Eigen::MatrixXd candidate(n, Z.cols() + 1);
    candidate << Z, (X.col(j).array() - mean).matrix() / sd;
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(candidate);
    qr.setThreshold(1e-9);
    if (qr.rank() < candidate.cols()) {
      term.diagnostic = "collinear with other covariates; not identifiable";
      continue;
    }
    Z = std::move(candidate);
    kept.push_back(j);
    centers.push_back(mean);
    scales.push_back(sd);
  }
  for (const auto& t : fit.terms) {
    if (!t.diagnostic.empty()) fit.warnings.push_back(t.name + ": " + t.diagnostic);
  }
  if (kept.empty()) throw InvalidArgument("cox: no identifiable covariate");

  const auto order = descending_time_order(time);
  const auto p = Z.cols();
  Eigen::VectorXd beta = Eigen::VectorXd::Zero(p);
  auto current = evaluate(Z, time, event, order, beta, true);
  bool separated = false;
  for (fit.iterations = 0; fit.iterations < options.max_iterations; ++fit.iterations) {
    if (current.gradient.norm() <= options.tolerance) break;

    Eigen::LDLT<Eigen::MatrixXd> ldlt(current.information);
    Eigen::VectorXd delta;
    if (ldlt.info() == Eigen::Success && (ldlt.vectorD().array() > 0.0).all()) {
      delta = ldlt.solve(current.gradient);
    } else {
      const double ridge = 1e-6 * std::max(1.0, current.information.trace());
      delta = (current.information + ridge * Eigen::MatrixXd::Identity(p, p)).ldlt().solve(current.gradient);
    }

    double step = 1.0;
    bool accepted = false;
    const double slack = 1e-12 * (1.0 + std::abs(current.value));
    for (int halving = 0; halving < 40; ++halving, step *= 0.5) {
      Eigen::VectorXd trial = beta + step * delta;
      auto next = evaluate(Z, time, event, order, trial, true);
      if (std::isfinite(next.value) && next.value >= current.value - slack) {
        beta = std::move(trial);
        current = std::move(next);
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      fit.warnings.push_back("step halving could not improve the partial likelihood");
      break;
    }
    for (Eigen::Index j = 0; j < p; ++j) {
      if (std::abs(beta(j)) > options.separation_limit) separated = true;
    }
    if (separated) {
      ++fit.iterations;
      break;
    }
  }

  // A tiny score can also mean the likelihood is still rising along a ray:
  // the next Newton step then stays O(1) instead of vanishing.
  std::vector<bool> diverging(static_cast<std::size_t>(p), false);
  for (Eigen::Index j = 0; j < p; ++j) diverging[static_cast<std::size_t>(j)] = std::abs(beta(j)) > options.separation_limit;
  if (!separated) {
    Eigen::LDLT<Eigen::MatrixXd> ldlt(current.information);
    const bool pd = ldlt.info() == Eigen::Success && (ldlt.vectorD().array() > 0.0).all();
    const Eigen::VectorXd next = pd ? Eigen::VectorXd(ldlt.solve(current.gradient)) : Eigen::VectorXd();
    for (Eigen::Index j = 0; j < p; ++j) {
      const bool stalled = !pd || !std::isfinite(next(j)) || std::abs(next(j)) > 1e-4 * std::max(1.0, std::abs(beta(j)));
      if (stalled && std::abs(beta(j)) > 5.0) {
        diverging[static_cast<std::size_t>(j)] = true;
        separated = true;
      }
    }
  }

  fit.gradient_norm = current.gradient.norm();
  fit.converged = !separated && fit.gradient_norm <= options.tolerance;
  fit.log_likelihood = current.value;
  if (!fit.converged && !separated) {
    fit.warnings.push_back(fmt::format("cox: not converged after {} iterations (gradient norm {:.3g})",
                                       fit.iterations, fit.gradient_norm));
  }

  const Eigen::MatrixXd covariance = current.information.inverse();
  for (Eigen::Index j = 0; j < p; ++j) {
    const auto sd = scales[static_cast<std::size_t>(j)];
    auto& term = fit.terms[static_cast<std::size_t>(kept[static_cast<std::size_t>(j)])];
    const double b = beta(j) / sd;
    if (diverging[static_cast<std::size_t>(j)]) {
      term.diagnostic = "separation: estimate diverges; not identifiable";
      fit.warnings.push_back(term.name + ": " + term.diagnostic);
      continue;
    }
    CoxEstimate e;
    e.beta = b;
    const double var = covariance(j, j);
    e.se = var > 0.0 && std::isfinite(var) ? std::sqrt(var) / sd : std::numeric_limits<double>::quiet_NaN();
    e.z = e.beta / e.se;
    e.p = std::isfinite(e.z) ? wald_p_value(e.z) : 1.0;
    term.estimate = e;
  }
  return fit;
}

CoxFit fit_cox(std::span<const SurvivalRecord> records, const CoxOptions& options) {
  const auto n = static_cast<Eigen::Index>(records.size());
  Eigen::MatrixXd X(n, static_cast<Eigen::Index>(kNumCovariates));
  std::vector<double> time(records.size());
  std::vector<int> event(records.size());
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& r = records[static_cast<std::size_t>(i)];
    for (std::size_t k = 0; k < kNumCovariates; ++k) X(i, static_cast<Eigen::Index>(k)) = r.x[k];
    time[static_cast<std::size_t>(i)] = r.duration;
    event[static_cast<std::size_t>(i)] = r.event;
  }
  std::vector<std::string> names;
  for (auto name : covariate_names()) names.emplace_back(name);
  return fit_cox(X, time, event, names, options);
}

}  // namespace censorlens::analytics
