#pragma once

#include <Eigen/Dense>
#include <vector>

#include "spclust/chain.hpp"
#include "spclust/posterior.hpp"

namespace spclust {

struct AssessmentReport {
  Eigen::VectorXd cpo;      // length n
  double lpml = 0.0;        // sum of log CPO_i
  double lpml_jackknife_se = 0.0;  // delete-one-draw spread diagnostic
  double p_d = 0.0;
  double d_bar = 0.0;
  double d_at_mean = 0.0;
};

// Harmonic-mean CPO estimator, computed with log-sum-exp on the negated
// per-draw log-likelihood terms.
std::pair<Eigen::VectorXd, double> compute_cpo_lpml(
    const Eigen::MatrixXd& loglik);

double lpml_jackknife_se(const Eigen::MatrixXd& loglik);

struct PdResult {
  double p_d;
  double d_bar;
  double d_at_mean;
};

// Effective number of parameters: theta-bar uses posterior means for the
// continuous blocks and the Dahl partition (with per-cluster mean
// coefficients) for z.
PdResult compute_pd(const PosteriorDraws& draws, const Dataset& data,
                    const DahlResult& dahl);

AssessmentReport assess(const PosteriorDraws& draws, const Dataset& data,
                        const DahlResult& dahl);

double rand_index(const Eigen::VectorXi& z1, const Eigen::VectorXi& z2);

struct ReplicateMetrics {
  Eigen::VectorXd mab;   // per coefficient
  Eigen::VectorXd msd;
  Eigen::VectorXd mmse;
  Eigen::VectorXd mcr;
  double mean_ri = 0.0;
  Eigen::MatrixXd beta_bar;  // n x p, replicate-averaged estimates
};

// estimates/hpd_* are one n x p matrix per replicate.  By default MCR is the
// coverage of the true coefficient by each replicate's HPD interval; the
// literal variant checks the estimate against its own interval instead.
ReplicateMetrics replicate_metrics(
    const std::vector<Eigen::MatrixXd>& estimates,
    const Eigen::MatrixXd& truth,
    const std::vector<Eigen::MatrixXd>& hpd_lo,
    const std::vector<Eigen::MatrixXd>& hpd_hi,
    const std::vector<double>& rand_indices, bool literal_mcr = false);

}  // namespace spclust
