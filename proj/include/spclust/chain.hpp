#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "spclust/data.hpp"
#include "spclust/model.hpp"

namespace spclust {

struct Draw {
  Eigen::VectorXi z;
  Eigen::MatrixXd beta_table;
  Eigen::VectorXd w;
  Eigen::VectorXd mu_b;
  double alpha;
  double tau_y;
  double tau_w;
  double tau_b;
  double phi;
};

struct PosteriorDraws {
  std::vector<Draw> draws;
  Eigen::MatrixXd loglik;  // stored_draws x n, per-observation log-likelihood
  ModelConfig config;
  int phi_proposals = 0;
  int phi_accepts = 0;
  int stick_clamps = 0;
  double last_stick_mass = 0.0;  // mean posterior mass of the last stick
  double elapsed_seconds = 0.0;  // metadata only, excluded from snapshot body

  int size() const { return static_cast<int>(draws.size()); }
};

ChainState init_state(const ModelConfig& config, const Dataset& data,
                      RngStream& rng);

// Full Gibbs/Metropolis sweep loop.  Records every thin-th state, drops the
// first burn_in recorded states, and keeps the per-observation log-likelihood
// of every stored state.  phi proposal adaptation happens only during the
// burn-in portion.
PosteriorDraws run_chain(const ModelConfig& config, const Dataset& data,
                         RngStream& rng);

// JSON snapshot: {"header": {...}, "body": {...}}.  The body is a pure
// function of (seed, config, data); the header additionally carries wall
// clock and format metadata.
void save_snapshot(const PosteriorDraws& draws, const std::string& path);
PosteriorDraws load_snapshot(const std::string& path);

// The serialized body bytes alone, for reproducibility checks.
std::string snapshot_body_bytes(const PosteriorDraws& draws);

}  // namespace spclust
