#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "spclust/assess.hpp"
#include "spclust/data.hpp"
#include "spclust/model.hpp"

namespace spclust {

enum class Scenario { Null, RandomClusters, RegionalClusters };

Scenario scenario_from_string(const std::string& s);
std::string scenario_to_string(Scenario s);

struct ScenarioSpec {
  Scenario scenario = Scenario::Null;
  int setting = 1;  // 1..3, selects the true beta vectors
  Coordinates coords;  // defaults to the bundled 159-centroid set
  int replicates = 10;
  std::uint64_t seed = 1;
  double phi_true = 4.0;    // exponential GP bandwidth on cap-10 distances
  double gp_sd = 1.0;       // 0 switches the spatial effect off (debug)
  double noise_sd = 1.0;    // 0 switches the nugget off (debug)
  double distance_cap = 10.0;
};

// 159 synthetic centroids spanning Georgia's bounding box; same values as
// data/georgia_centroids.csv.
Coordinates bundled_centroids();

// The true coefficient vectors: one vector for the null scenario, three for
// the clustered scenarios (per setting 1..3); p = 6 throughout.
Eigen::VectorXd null_beta(int setting);
Eigen::MatrixXd clustered_betas(int setting);  // 3 x 6

struct GeneratedData {
  Dataset data;
  Eigen::MatrixXd true_beta;  // n x p, per location
  Eigen::VectorXi true_z;     // length n, 0-based
};

GeneratedData generate_dataset(const ScenarioSpec& spec, RngStream& rng);

// Deterministic regional partition: three latitude bands with sizes as equal
// as possible.
Eigen::VectorXi regional_partition(const Coordinates& coords);

// Random-clusters sizes; (51, 49, 59) when n = 159.
std::vector<int> random_cluster_sizes(Eigen::Index n);

struct StudyResult {
  ReplicateMetrics metrics;
  std::vector<double> rand_indices;  // per successful replicate
  int failed = 0;
  double elapsed_seconds = 0.0;
};

// Runs R generate->fit->score replicates on split RNG streams (in parallel)
// and merges them by replicate index.  Fails if more than 10% of the
// replicates abort.
StudyResult run_replicate_study(const ScenarioSpec& spec,
                                const ModelConfig& fit_config,
                                int n_threads = 0);

}  // namespace spclust
