#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <string>

#include "spclust/data.hpp"
#include "spclust/linalg.hpp"
#include "spclust/rng.hpp"

namespace spclust {

enum class Scheme { Unity, Exponential, Gaussian };

Scheme scheme_from_string(const std::string& s);
std::string scheme_to_string(Scheme s);

struct ModelConfig {
  int truncation = 50;         // M, stick-breaking truncation level
  double bandwidth_max = 100;  // D, upper bound of the uniform phi prior
  Scheme scheme = Scheme::Exponential;
  double distance_cap = 10.0;
  int n_iter = 10000;
  int thin = 5;
  int burn_in = 500;  // counted in thinned draws
  std::uint64_t seed = 1;
  double phi_proposal_scale = 0.5;  // adapted during burn-in

  int stored_draws() const { return n_iter / thin - burn_in; }
  void validate(Eigen::Index n) const;
};

// Distance matrix plus weighting scheme; caches the Cholesky factor and
// explicit inverse of H(phi) for the current bandwidth.
class SpatialKernel {
 public:
  SpatialKernel(Eigen::MatrixXd dist, Scheme scheme, double phi);

  // H(phi) for an arbitrary bandwidth; does not touch the cache.
  Eigen::MatrixXd kernel_matrix(double phi) const;

  // Rebuilds the cache for a new bandwidth.  Throws NotPositiveDefinite if
  // H(phi) fails to factor; callers treat that as a rejected proposal.
  void set_phi(double phi);

  double phi() const { return phi_; }
  Scheme scheme() const { return scheme_; }
  const Eigen::MatrixXd& dist() const { return dist_; }
  const CholeskyFactor& chol_h() const { return chol_; }
  const Eigen::MatrixXd& h_inverse() const { return h_inv_; }
  Eigen::Index n() const { return dist_.rows(); }

 private:
  Eigen::MatrixXd dist_;
  Scheme scheme_;
  double phi_;
  CholeskyFactor chol_;
  Eigen::MatrixXd h_inv_;
};

struct ChainState {
  Eigen::VectorXi z;           // length n, labels in 0..M-1
  Eigen::MatrixXd beta_table;  // M x p, row c = beta_c (empty clusters live)
  Eigen::VectorXd v;           // length M-1, stick fractions
  Eigen::VectorXd pi;          // length M, stick-breaking weights
  double alpha = 2.0;
  Eigen::VectorXd w;           // length n, spatial random effects
  double tau_y = 1.0;
  double tau_w = 1.0;
  double tau_b = 1.0;
  Eigen::VectorXd mu_b;        // length p, base-measure mean
  double phi = 1.0;

  int truncation() const { return static_cast<int>(beta_table.rows()); }
};

// pi from V by stick breaking; the last weight absorbs the remainder.
Eigen::VectorXd stick_weights(const Eigen::VectorXd& v);

double loglik(const ChainState& state, const Dataset& data);

// Per-observation log N(y_i; x_i' beta_{z_i} + w_i, 1/tau_y).
Eigen::VectorXd loglik_terms(const ChainState& state, const Dataset& data);

void update_z(ChainState& state, const Dataset& data, RngStream& rng);

// Returns the number of sticks clamped away from 1 (a mixing warning).
int update_sticks_and_alpha(ChainState& state, RngStream& rng);
void update_beta_table(ChainState& state, const Dataset& data, RngStream& rng);
void update_base_measure(ChainState& state, RngStream& rng);
void update_spatial(ChainState& state, const Dataset& data,
                    const SpatialKernel& kernel, RngStream& rng);
void update_tau_y(ChainState& state, const Dataset& data, RngStream& rng);

struct PhiStepResult {
  bool proposed = false;
  bool accepted = false;
};

// One reflected random-walk Metropolis step on phi; refreshes the kernel
// cache on acceptance.  No-op under the unity scheme.
PhiStepResult update_phi(ChainState& state, SpatialKernel& kernel,
                         double bandwidth_max, double proposal_scale,
                         RngStream& rng);

}  // namespace spclust
