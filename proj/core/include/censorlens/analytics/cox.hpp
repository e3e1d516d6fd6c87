#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "censorlens/analytics/survival.hpp"

namespace censorlens::analytics {

/// Breslow partial log-likelihood with its gradient and observed information
/// (negative Hessian).
struct PartialLikelihood {
  double value = 0.0;
  Eigen::VectorXd gradient;
  Eigen::MatrixXd information;
};

/// X is n x p, time has n positive entries, event n entries in {0, 1}.
/// Throws InvalidArgument on shape mismatches.
PartialLikelihood breslow_partial_likelihood(const Eigen::MatrixXd& X, std::span<const double> time,
                                             std::span<const int> event, const Eigen::VectorXd& beta);

double breslow_log_likelihood(const Eigen::MatrixXd& X, std::span<const double> time, std::span<const int> event,
                              const Eigen::VectorXd& beta);

struct CoxOptions {
  double tolerance = 1e-8;
  int max_iterations = 100;
  /// |beta * sd(x)| above this is reported as separation. Measured per
  /// standard deviation so the verdict does not depend on covariate units.
  double separation_limit = 50.0;
};

struct CoxEstimate {
  double beta = 0.0;
  double se = 0.0;
  double z = 0.0;
  double p = 1.0;
};

struct CoxTerm {
  std::string name;
  /// Absent when the covariate is not identifiable.
  std::optional<CoxEstimate> estimate;
  std::string diagnostic;
};

struct CoxFit {
  std::vector<CoxTerm> terms;
  double log_likelihood = 0.0;
  int iterations = 0;
  bool converged = false;
  double gradient_norm = 0.0;
  std::size_t n = 0;
  std::size_t events = 0;
  std::vector<std::string> warnings;

  const CoxTerm* term(std::string_view name) const;
};

/// Damped Newton on the centered design with step halving. Covariates with
/// zero variance or linearly dependent on earlier columns are dropped and
/// reported absent. A coefficient past separation_limit, or one beyond 5 sd
/// whose next Newton step has not shrunk at termination, is reported as
/// separation. Throws InvalidArgument when there are no events or no
/// usable covariate.
CoxFit fit_cox(const Eigen::MatrixXd& X, std::span<const double> time, std::span<const int> event,
               const std::vector<std::string>& names, const CoxOptions& options = {});

/// Fits all five covariates in Covariate order.
CoxFit fit_cox(std::span<const SurvivalRecord> records, const CoxOptions& options = {});

/// Two-sided normal p-value for a Wald statistic.
double wald_p_value(double z);

}  // namespace censorlens::analytics
