#include "spclust/simgen.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <numeric>
#include <thread>

#include "spclust/chain.hpp"
#include "spclust/errors.hpp"
#include "spclust/posterior.hpp"

namespace spclust {

Scenario scenario_from_string(const std::string& s) {
  if (s == "null") return Scenario::Null;
  if (s == "random-clusters") return Scenario::RandomClusters;
  if (s == "regional-clusters") return Scenario::RegionalClusters;
  throw InvalidInput("unknown scenario '" + s + "'");
}

std::string scenario_to_string(Scenario s) {
  switch (s) {
    case Scenario::Null: return "null";
    case Scenario::RandomClusters: return "random-clusters";
    case Scenario::RegionalClusters: return "regional-clusters";
  }
  throw InvalidInput("bad scenario enum");
}

Coordinates bundled_centroids() {
  static const double pts[159][2] = {
#include "centroids.inc"
  };
  Coordinates c;
  c.lon.resize(159);
  c.lat.resize(159);
  for (int i = 0; i < 159; ++i) {
    c.lon(i) = pts[i][0];
    c.lat(i) = pts[i][1];
  }
  return c;
}

Eigen::VectorXd null_beta(int setting) {
  Eigen::VectorXd b(6);
  switch (setting) {
    case 1: b << 1, 0, 1, 0, 0.5, 2; break;
    case 2: b << 2, 0, 1, 0, 4, 2; break;
    case 3: b << 9, 0, -4, 0, 2, 5; break;
    default: throw InvalidInput("setting must be 1, 2, or 3");
  }
  return b;
}

Eigen::MatrixXd clustered_betas(int setting) {
  Eigen::MatrixXd b(3, 6);
  switch (setting) {
    case 1:
      b << 1, 0, 1, 0, 0.5, 2,
           1, 0.7, 0.3, 2, 0, 3,
           2, 1, 0.8, 1, 0, 1;
      break;
    case 2:
      b << 2, 0, 1, 0, 4, 2,
           1, 0, 3, 2, 0, 3,
           4, 1, 0, 3, 0, 1;
      break;
    case 3:
      b << 9, 0, -4, 0, 2, 5,
           1, 7, 3, 6, 0, -1,
           2, 0, 6, 1, 7, 0;
      break;
    default: throw InvalidInput("setting must be 1, 2, or 3");
  }
  return b;
}

std::vector<int> random_cluster_sizes(Eigen::Index n) {
  // Proportions from the 159-county layout: 51, 49, 59.
  int s1 = static_cast<int>(std::lround(51.0 * n / 159.0));
  int s2 = static_cast<int>(std::lround(49.0 * n / 159.0));
  int s3 = static_cast<int>(n) - s1 - s2;
  if (s1 < 1 || s2 < 1 || s3 < 1) {
    throw InvalidInput("too few locations for three clusters");
  }
  return {s1, s2, s3};
}

Eigen::VectorXi regional_partition(const Coordinates& coords) {
  const Eigen::Index n = coords.size();
  std::vector<Eigen::Index> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    return coords.lat(a) < coords.lat(b);
  });
  Eigen::VectorXi z(n);
  for (Eigen::Index r = 0; r < n; ++r) {
    z(order[r]) = static_cast<int>(r * 3 / n);
  }
  return z;
}

GeneratedData generate_dataset(const ScenarioSpec& spec, RngStream& rng) {
  if (spec.setting < 1 || spec.setting > 3) {
    throw InvalidInput("setting must be 1, 2, or 3");
  }
  Coordinates coords = spec.coords.size() ? spec.coords : bundled_centroids();
  const Eigen::Index n = coords.size();
  const Eigen::Index p = 6;

  GeneratedData g;
  g.true_z.resize(n);
  g.true_beta.resize(n, p);
  if (spec.scenario == Scenario::Null) {
    Eigen::VectorXd b = null_beta(spec.setting);
    g.true_z.setZero();
    g.true_beta = b.transpose().replicate(n, 1);
  } else {
    Eigen::MatrixXd bs = clustered_betas(spec.setting);
    if (spec.scenario == Scenario::RandomClusters) {
      std::vector<int> sizes = random_cluster_sizes(n);
      std::vector<int> labels;
      for (int c = 0; c < 3; ++c) labels.insert(labels.end(), sizes[c], c);
      // seeded Fisher-Yates permutation
      for (Eigen::Index i = n - 1; i > 0; --i) {
        Eigen::Index j = static_cast<Eigen::Index>(rng.uniform() * (i + 1));
        std::swap(labels[i], labels[j]);
      }
      for (Eigen::Index i = 0; i < n; ++i) g.true_z(i) = labels[i];
    } else {
      g.true_z = regional_partition(coords);
    }
    for (Eigen::Index i = 0; i < n; ++i) {
      g.true_beta.row(i) = bs.row(g.true_z(i));
    }
  }

  Eigen::MatrixXd x(n, p);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < p; ++j) x(i, j) = rng.normal();
  }

  Eigen::VectorXd w = Eigen::VectorXd::Zero(n);
  if (spec.gp_sd > 0.0) {
    Eigen::MatrixXd dist = build_distance_matrix(coords, spec.distance_cap);
    CholeskyFactor cf =
        cholesky((-dist.array() / spec.phi_true).exp().matrix());
    Eigen::VectorXd zvec(n);
    for (Eigen::Index i = 0; i < n; ++i) zvec(i) = rng.normal();
    w = spec.gp_sd * (cf.lower * zvec);
  }

  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    double eps = spec.noise_sd > 0.0 ? rng.normal(0.0, spec.noise_sd) : 0.0;
    y(i) = x.row(i).dot(g.true_beta.row(i)) + w(i) + eps;
  }

  g.data.y = std::move(y);
  g.data.x = std::move(x);
  g.data.coords = std::move(coords);
  g.data.validate();
  return g;
}

StudyResult run_replicate_study(const ScenarioSpec& spec,
                                const ModelConfig& fit_config, int n_threads) {
  if (spec.replicates < 2) {
    throw InsufficientData("replicate study needs R >= 2");
  }
  const auto t0 = std::chrono::steady_clock::now();
  const int r = spec.replicates;

  struct RepResult {
    bool ok = false;
    Eigen::MatrixXd est, lo, hi;
    double ri = 0.0;
    std::string error;
  };
  std::vector<RepResult> results(r);
  RngStream master(spec.seed);

  auto worker = [&](int rep) {
    RngStream rng = master.split(rep);
    try {
      GeneratedData g = generate_dataset(spec, rng);
      PosteriorDraws draws = run_chain(fit_config, g.data, rng);
      DahlResult dahl = dahl_select(draws);
      LocationSummary loc = per_location_summary(draws);
      results[rep].est = std::move(loc.mean);
      results[rep].lo = std::move(loc.hpd_lo);
      results[rep].hi = std::move(loc.hpd_hi);
      results[rep].ri = rand_index(dahl.z_star, g.true_z);
      results[rep].ok = true;
    } catch (const Error& e) {
      results[rep].error = e.what();
    }
  };

  if (n_threads <= 0) {
    n_threads = std::max(1u, std::thread::hardware_concurrency());
  }
  n_threads = std::min(n_threads, r);
  std::vector<std::thread> pool;
  std::atomic<int> next{0};
  for (int t = 0; t < n_threads; ++t) {
    pool.emplace_back([&] {
      for (int rep = next.fetch_add(1); rep < r; rep = next.fetch_add(1)) {
        worker(rep);
      }
    });
  }
  for (auto& th : pool) th.join();

  // Truth is the same across replicates (fixed coordinates, fixed betas for
  // null/regional; random-clusters redraws labels per replicate, so score
  // each replicate against its own truth via the per-replicate RI above and
  // use the per-location truth of a reference generation for coefficients.
  StudyResult out;
  std::vector<Eigen::MatrixXd> est, lo, hi;
  std::vector<Eigen::MatrixXd> truths;
  for (int rep = 0; rep < r; ++rep) {
    if (!results[rep].ok) {
      ++out.failed;
      continue;
    }
    RngStream rng = master.split(rep);
    GeneratedData g = generate_dataset(spec, rng);  // replay the truth
    truths.push_back(std::move(g.true_beta));
    est.push_back(std::move(results[rep].est));
    lo.push_back(std::move(results[rep].lo));
    hi.push_back(std::move(results[rep].hi));
    out.rand_indices.push_back(results[rep].ri);
  }
  if (out.failed * 10 > r) {
    std::string first;
    for (const auto& res : results) {
      if (!res.ok) { first = res.error; break; }
    }
    throw NumericalDegeneracy("more than 10% of replicates failed; first: " +
                              first);
  }
  if (est.size() < 2) {
    throw InsufficientData("fewer than 2 successful replicates");
  }

  // Eqs with per-replicate truth: fold the (possibly replicate-specific)
  // truth into deviations before averaging.
  const Eigen::Index n = truths[0].rows();
  const Eigen::Index p = truths[0].cols();
  const std::size_t rr = est.size();
  ReplicateMetrics m;
  m.beta_bar = Eigen::MatrixXd::Zero(n, p);
  for (const auto& e : est) m.beta_bar += e;
  m.beta_bar /= static_cast<double>(rr);
  m.mab = Eigen::VectorXd::Zero(p);
  m.msd = Eigen::VectorXd::Zero(p);
  m.mmse = Eigen::VectorXd::Zero(p);
  m.mcr = Eigen::VectorXd::Zero(p);
  for (Eigen::Index j = 0; j < p; ++j) {
    for (Eigen::Index l = 0; l < n; ++l) {
      double ab = 0.0, sq = 0.0, sd_ss = 0.0, cov = 0.0;
      for (std::size_t k = 0; k < rr; ++k) {
        double e = est[k](l, j);
        double tr = truths[k](l, j);
        ab += std::abs(e - tr);
        sq += (e - tr) * (e - tr);
        sd_ss += (e - m.beta_bar(l, j)) * (e - m.beta_bar(l, j));
        if (tr >= lo[k](l, j) && tr <= hi[k](l, j)) cov += 1.0;
      }
      m.mab(j) += ab / rr;
      m.mmse(j) += sq / rr;
      m.msd(j) += std::sqrt(sd_ss / (rr - 1));
      m.mcr(j) += cov / rr;
    }
    m.mab(j) /= n;
    m.mmse(j) /= n;
    m.msd(j) /= n;
    m.mcr(j) /= n;
  }
  m.mean_ri = std::accumulate(out.rand_indices.begin(), out.rand_indices.end(),
                              0.0) /
              out.rand_indices.size();
  out.metrics = std::move(m);
  out.elapsed_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  return out;
}

}  // namespace spclust
