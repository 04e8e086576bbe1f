#pragma once

#include <Eigen/Dense>

#include "spclust/data.hpp"
#include "spclust/model.hpp"

namespace spclust {

// Vanilla Bayesian linear regression: y = X beta + eps, no spatial effect and
// a single coefficient vector.  Priors mirror the clustered model: beta ~
// MVN(0, tau_b^{-1} I), tau_y and tau_b ~ Gamma(1, 1).
struct BaselineResult {
  Eigen::MatrixXd beta_draws;   // stored_draws x p
  Eigen::VectorXd tau_y_draws;  // stored_draws
  Eigen::MatrixXd loglik;       // stored_draws x n
  Eigen::VectorXd cpo;
  double lpml = 0.0;
  double p_d = 0.0;
  double d_bar = 0.0;
  double d_at_mean = 0.0;
  Eigen::VectorXd beta_mean;    // length p
};

BaselineResult fit_baseline(const ModelConfig& config, const Dataset& data,
                            RngStream& rng);

}  // namespace spclust
