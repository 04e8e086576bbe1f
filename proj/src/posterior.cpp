#include "spclust/posterior.hpp"

#include <algorithm>
#include <numeric>

#include "spclust/errors.hpp"
#include "spclust/linalg.hpp"

namespace spclust {

std::vector<std::vector<Eigen::Index>> DahlResult::members() const {
  std::vector<std::vector<Eigen::Index>> out(k);
  for (Eigen::Index i = 0; i < z_star.size(); ++i) {
    out[z_star(i)].push_back(i);
  }
  return out;
}

Eigen::MatrixXd membership_matrix(const Eigen::VectorXi& z) {
  const Eigen::Index n = z.size();
  Eigen::MatrixXd b(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      b(i, j) = z(i) == z(j) ? 1.0 : 0.0;
    }
  }
  return b;
}

DahlResult dahl_select(const PosteriorDraws& draws) {
  const int t = draws.size();
  if (t < 1) throw InvalidInput("dahl_select: no draws");
  const Eigen::Index n = draws.draws[0].z.size();

  Eigen::MatrixXd b_bar = Eigen::MatrixXd::Zero(n, n);
  for (const Draw& d : draws.draws) b_bar += membership_matrix(d.z);
  b_bar /= static_cast<double>(t);

  int best = 0;
  double best_dist = std::numeric_limits<double>::infinity();
  for (int c = 0; c < t; ++c) {
    double dist = (membership_matrix(draws.draws[c].z) - b_bar).squaredNorm();
    if (dist < best_dist) {  // strict: earliest draw wins ties
      best_dist = dist;
      best = c;
    }
  }

  // Relabel the selected draw's partition to 0..k-1 by decreasing size.
  const Eigen::VectorXi& zc = draws.draws[best].z;
  std::vector<std::pair<int, int>> size_by_label;  // (count, label)
  {
    std::vector<int> count;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (zc(i) >= static_cast<int>(count.size())) count.resize(zc(i) + 1, 0);
      count[zc(i)]++;
    }
    for (int lab = 0; lab < static_cast<int>(count.size()); ++lab) {
      if (count[lab] > 0) size_by_label.emplace_back(count[lab], lab);
    }
  }
  std::stable_sort(size_by_label.begin(), size_by_label.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  std::vector<int> relabel(
      size_by_label.empty() ? 0 : size_by_label.back().second + 1, -1);
  int next = 0;
  for (const auto& [cnt, lab] : size_by_label) {
    if (lab >= static_cast<int>(relabel.size())) relabel.resize(lab + 1, -1);
    relabel[lab] = next++;
  }

  DahlResult res;
  res.b_bar = std::move(b_bar);
  res.selected = best;
  res.k = next;
  res.z_star.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) res.z_star(i) = relabel[zc(i)];
  return res;
}

ClusterSummary summarize_clusters(const PosteriorDraws& draws,
                                  const DahlResult& dahl, SummaryMode mode,
                                  double level) {
  const Eigen::Index p = draws.draws[0].beta_table.cols();
  auto members = dahl.members();

  ClusterSummary s;
  s.sizes.resize(dahl.k);
  s.mean.resize(dahl.k, p);
  s.hpd_lo.resize(dahl.k, p);
  s.hpd_hi.resize(dahl.k, p);

  const Eigen::VectorXi& z_sel = draws.draws[dahl.selected].z;
  for (int c = 0; c < dahl.k; ++c) {
    s.sizes[c] = static_cast<int>(members[c].size());
    if (members[c].empty()) {
      throw InsufficientData("cluster " + std::to_string(c + 1) +
                             " has no members");
    }
    for (Eigen::Index j = 0; j < p; ++j) {
      std::vector<double> pooled;
      if (mode == SummaryMode::SelectedDraw) {
        double v =
            draws.draws[dahl.selected].beta_table(z_sel(members[c][0]), j);
        s.mean(c, j) = v;
        s.hpd_lo(c, j) = v;
        s.hpd_hi(c, j) = v;
        continue;
      }
      pooled.reserve(members[c].size() * draws.draws.size());
      for (const Draw& d : draws.draws) {
        for (Eigen::Index i : members[c]) {
          pooled.push_back(d.beta_table(d.z(i), j));
        }
      }
      if (pooled.empty()) {
        throw InsufficientData("cluster " + std::to_string(c + 1) +
                               " pooled no draws");
      }
      s.mean(c, j) =
          std::accumulate(pooled.begin(), pooled.end(), 0.0) / pooled.size();
      auto [lo, hi] = hpd_interval(std::move(pooled), level);
      s.hpd_lo(c, j) = lo;
      s.hpd_hi(c, j) = hi;
    }
  }
  return s;
}

LocationSummary per_location_summary(const PosteriorDraws& draws,
                                     double level) {
  const int t = draws.size();
  if (t < 1) throw InvalidInput("per_location_summary: no draws");
  const Eigen::Index n = draws.draws[0].z.size();
  const Eigen::Index p = draws.draws[0].beta_table.cols();

  LocationSummary s;
  s.mean.resize(n, p);
  s.hpd_lo.resize(n, p);
  s.hpd_hi.resize(n, p);
  std::vector<double> series(t);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < p; ++j) {
      for (int c = 0; c < t; ++c) {
        const Draw& d = draws.draws[c];
        series[c] = d.beta_table(d.z(i), j);
      }
      s.mean(i, j) =
          std::accumulate(series.begin(), series.end(), 0.0) / t;
      auto [lo, hi] = hpd_interval(series, level);
      s.hpd_lo(i, j) = lo;
      s.hpd_hi(i, j) = hi;
    }
  }
  return s;
}

}  // namespace spclust
