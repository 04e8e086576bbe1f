#include "spclust/assess.hpp"

#include <cmath>

#include "spclust/errors.hpp"

namespace spclust {

std::pair<Eigen::VectorXd, double> compute_cpo_lpml(
    const Eigen::MatrixXd& loglik) {
  const Eigen::Index t = loglik.rows();
  const Eigen::Index n = loglik.cols();
  if (t < 2) throw InvalidInput("compute_cpo_lpml: need at least 2 draws");
  if (!loglik.allFinite()) {
    throw InvalidInput("compute_cpo_lpml: non-finite log-likelihood terms");
  }
  Eigen::VectorXd cpo(n);
  double lpml = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    // log mean_t exp(-l_ti), via log-sum-exp
    double m = (-loglik.col(i)).maxCoeff();
    double s = 0.0;
    for (Eigen::Index k = 0; k < t; ++k) {
      s += std::exp(-loglik(k, i) - m);
    }
    double log_inv_cpo = m + std::log(s / static_cast<double>(t));
    cpo(i) = std::exp(-log_inv_cpo);
    lpml -= log_inv_cpo;
  }
  return {cpo, lpml};
}

double lpml_jackknife_se(const Eigen::MatrixXd& loglik) {
  const Eigen::Index t = loglik.rows();
  const Eigen::Index n = loglik.cols();
  if (t < 3) throw InvalidInput("lpml_jackknife_se: need at least 3 draws");
  Eigen::VectorXd m(n), total(n);
  Eigen::MatrixXd e(t, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    m(i) = (-loglik.col(i)).maxCoeff();
    double s = 0.0;
    for (Eigen::Index k = 0; k < t; ++k) {
      e(k, i) = std::exp(-loglik(k, i) - m(i));
      s += e(k, i);
    }
    total(i) = s;
  }
  Eigen::VectorXd lpml_loo(t);
  for (Eigen::Index k = 0; k < t; ++k) {
    double v = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      double rest = std::max(total(i) - e(k, i), 1e-300);
      v -= m(i) + std::log(rest / static_cast<double>(t - 1));
    }
    lpml_loo(k) = v;
  }
  double mean = lpml_loo.mean();
  double ss = (lpml_loo.array() - mean).square().sum();
  return std::sqrt(ss * static_cast<double>(t - 1) / static_cast<double>(t));
}

PdResult compute_pd(const PosteriorDraws& draws, const Dataset& data,
                    const DahlResult& dahl) {
  const int t = draws.size();
  if (t < 1) throw InvalidInput("compute_pd: no draws");
  const Eigen::Index n = data.n();
  const Eigen::Index p = data.p();

  double d_bar = 0.0;
  for (int k = 0; k < t; ++k) d_bar += -2.0 * draws.loglik.row(k).sum();
  d_bar /= t;

  // theta-bar: per-cluster mean coefficients under the Dahl partition,
  // posterior mean W and tau_y.
  auto members = dahl.members();
  Eigen::MatrixXd beta_mean = Eigen::MatrixXd::Zero(dahl.k, p);
  for (int c = 0; c < dahl.k; ++c) {
    double count = 0.0;
    for (const Draw& d : draws.draws) {
      for (Eigen::Index i : members[c]) {
        beta_mean.row(c) += d.beta_table.row(d.z(i));
        count += 1.0;
      }
    }
    beta_mean.row(c) /= count;
  }
  Eigen::VectorXd w_mean = Eigen::VectorXd::Zero(n);
  double tau_y_mean = 0.0;
  for (const Draw& d : draws.draws) {
    w_mean += d.w;
    tau_y_mean += d.tau_y;
  }
  w_mean /= t;
  tau_y_mean /= t;

  ChainState theta_bar;
  theta_bar.z = dahl.z_star;
  theta_bar.beta_table = beta_mean;
  theta_bar.w = w_mean;
  theta_bar.tau_y = tau_y_mean;
  double d_at_mean = -2.0 * loglik(theta_bar, data);

  return {d_bar - d_at_mean, d_bar, d_at_mean};
}

AssessmentReport assess(const PosteriorDraws& draws, const Dataset& data,
                        const DahlResult& dahl) {
  AssessmentReport r;
  auto [cpo, lpml] = compute_cpo_lpml(draws.loglik);
  r.cpo = std::move(cpo);
  r.lpml = lpml;
  r.lpml_jackknife_se = lpml_jackknife_se(draws.loglik);
  PdResult pd = compute_pd(draws, data, dahl);
  r.p_d = pd.p_d;
  r.d_bar = pd.d_bar;
  r.d_at_mean = pd.d_at_mean;
  return r;
}

double rand_index(const Eigen::VectorXi& z1, const Eigen::VectorXi& z2) {
  const Eigen::Index n = z1.size();
  if (z2.size() != n) throw InvalidInput("rand_index: length mismatch");
  if (n < 2) throw InvalidInput("rand_index: need at least 2 items");
  long long agree = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      bool same1 = z1(i) == z1(j);
      bool same2 = z2(i) == z2(j);
      if (same1 == same2) ++agree;
    }
  }
  long long pairs = static_cast<long long>(n) * (n - 1) / 2;
  return static_cast<double>(agree) / static_cast<double>(pairs);
}

ReplicateMetrics replicate_metrics(
    const std::vector<Eigen::MatrixXd>& estimates,
    const Eigen::MatrixXd& truth,
    const std::vector<Eigen::MatrixXd>& hpd_lo,
    const std::vector<Eigen::MatrixXd>& hpd_hi,
    const std::vector<double>& rand_indices, bool literal_mcr) {
  const std::size_t r = estimates.size();
  if (r < 2) throw InsufficientData("replicate_metrics: MSD needs R >= 2");
  if (hpd_lo.size() != r || hpd_hi.size() != r) {
    throw InvalidInput("replicate_metrics: HPD count mismatch");
  }
  const Eigen::Index n = truth.rows();
  const Eigen::Index p = truth.cols();
  for (const auto& e : estimates) {
    if (e.rows() != n || e.cols() != p) {
      throw InvalidInput("replicate_metrics: estimate shape mismatch");
    }
  }

  ReplicateMetrics m;
  m.beta_bar = Eigen::MatrixXd::Zero(n, p);
  for (const auto& e : estimates) m.beta_bar += e;
  m.beta_bar /= static_cast<double>(r);

  m.mab = Eigen::VectorXd::Zero(p);
  m.msd = Eigen::VectorXd::Zero(p);
  m.mmse = Eigen::VectorXd::Zero(p);
  m.mcr = Eigen::VectorXd::Zero(p);
  for (Eigen::Index j = 0; j < p; ++j) {
    for (Eigen::Index l = 0; l < n; ++l) {
      double ab = 0.0, sq = 0.0, sd_ss = 0.0, cov = 0.0;
      for (std::size_t k = 0; k < r; ++k) {
        double est = estimates[k](l, j);
        ab += std::abs(est - truth(l, j));
        sq += (est - truth(l, j)) * (est - truth(l, j));
        sd_ss += (est - m.beta_bar(l, j)) * (est - m.beta_bar(l, j));
        double target = literal_mcr ? est : truth(l, j);
        if (target >= hpd_lo[k](l, j) && target <= hpd_hi[k](l, j)) cov += 1.0;
      }
      m.mab(j) += ab / r;
      m.mmse(j) += sq / r;
      m.msd(j) += std::sqrt(sd_ss / (r - 1));
      m.mcr(j) += cov / r;
    }
    m.mab(j) /= n;
    m.mmse(j) /= n;
    m.msd(j) /= n;
    m.mcr(j) /= n;
  }

  if (!rand_indices.empty()) {
    double s = 0.0;
    for (double v : rand_indices) s += v;
    m.mean_ri = s / rand_indices.size();
  }
  return m;
}

}  // namespace spclust
