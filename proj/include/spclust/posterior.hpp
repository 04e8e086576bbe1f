#pragma once

#include <Eigen/Dense>
#include <vector>

#include "spclust/chain.hpp"

namespace spclust {

struct DahlResult {
  Eigen::MatrixXd b_bar;   // n x n pairwise co-clustering probabilities
  int selected = 0;        // index of the least-squares draw (0-based)
  Eigen::VectorXi z_star;  // final labels, 0..k-1, numbered by decreasing size
  int k = 0;

  std::vector<std::vector<Eigen::Index>> members() const;
};

Eigen::MatrixXd membership_matrix(const Eigen::VectorXi& z);

DahlResult dahl_select(const PosteriorDraws& draws);

enum class SummaryMode {
  // Per cluster, pool every member location's per-draw coefficient vector
  // beta_t(z_t(i)); sidesteps label switching.
  Pooled,
  // Report only the selected draw's beta rows (degenerate intervals).
  SelectedDraw,
};

struct ClusterSummary {
  std::vector<int> sizes;  // length k, sum to n
  Eigen::MatrixXd mean;    // k x p
  Eigen::MatrixXd hpd_lo;  // k x p
  Eigen::MatrixXd hpd_hi;  // k x p
};

ClusterSummary summarize_clusters(const PosteriorDraws& draws,
                                  const DahlResult& dahl,
                                  SummaryMode mode = SummaryMode::Pooled,
                                  double level = 0.95);

// Per-location posterior of beta(s_i) = beta_t(z_t(i)): mean and HPD bounds,
// each n x p.  This is what the replicate study scores against the truth.
struct LocationSummary {
  Eigen::MatrixXd mean;
  Eigen::MatrixXd hpd_lo;
  Eigen::MatrixXd hpd_hi;
};

LocationSummary per_location_summary(const PosteriorDraws& draws,
                                     double level = 0.95);

}  // namespace spclust
