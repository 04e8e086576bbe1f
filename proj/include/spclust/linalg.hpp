#pragma once

#include <Eigen/Dense>
#include <utility>
#include <vector>

#include "spclust/rng.hpp"

namespace spclust {

struct CholeskyFactor {
  Eigen::MatrixXd lower;  // L with L L^T = A
  double log_det = 0.0;   // log det A = 2 sum log L_ii

  Eigen::Index dim() const { return lower.rows(); }
};

// Throws NotPositiveDefinite (with the failing pivot index) when A is not
// numerically SPD; the MCMC phi step treats that as a rejection.
CholeskyFactor cholesky(const Eigen::MatrixXd& a);

Eigen::VectorXd mvn_sample(RngStream& rng, const Eigen::VectorXd& mean,
                           const CholeskyFactor& chol_cov);

double mvn_logpdf(const Eigen::VectorXd& x, const Eigen::VectorXd& mean,
                  const CholeskyFactor& chol_cov);

// Sample from a MVN given the Cholesky factor of its *precision* matrix:
// x = mean + Lp^{-T} z.
Eigen::VectorXd mvn_sample_precision(RngStream& rng,
                                     const Eigen::VectorXd& mean,
                                     const CholeskyFactor& chol_prec);

// Shortest contiguous window over the sorted samples containing
// ceil(level * m) of them; leftmost window on ties.
std::pair<double, double> hpd_interval(std::vector<double> samples,
                                       double level);

}  // namespace spclust
