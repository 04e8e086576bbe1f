#include "spclust/baseline.hpp"

#include <cmath>
#include <numbers>

#include "spclust/assess.hpp"
#include "spclust/errors.hpp"
#include "spclust/linalg.hpp"

namespace spclust {

BaselineResult fit_baseline(const ModelConfig& config, const Dataset& data,
                            RngStream& rng) {
  data.validate();
  config.validate(data.n());
  const Eigen::Index n = data.n();
  const Eigen::Index p = data.p();

  Eigen::VectorXd beta = Eigen::VectorXd::Zero(p);
  double tau_y = 1.0;
  double tau_b = 1.0;

  const Eigen::MatrixXd xtx = data.x.transpose() * data.x;
  const Eigen::VectorXd xty = data.x.transpose() * data.y;

  const int total_recorded = config.n_iter / config.thin;
  const int stored = total_recorded - config.burn_in;
  BaselineResult out;
  out.beta_draws.resize(stored, p);
  out.tau_y_draws.resize(stored);
  out.loglik.resize(stored, n);

  int recorded = 0;
  for (int sweep = 1; sweep <= config.n_iter; ++sweep) {
    Eigen::MatrixXd prec = tau_y * xtx;
    prec.diagonal().array() += tau_b;
    CholeskyFactor cf = cholesky(prec);
    Eigen::VectorXd mean =
        cf.lower.triangularView<Eigen::Lower>().solve(tau_y * xty);
    mean = cf.lower.transpose().triangularView<Eigen::Upper>().solve(mean);
    beta = mvn_sample_precision(rng, mean, cf);

    double ss = (data.y - data.x * beta).squaredNorm();
    tau_y = rng.gamma(1.0 + 0.5 * n, 1.0 + 0.5 * ss);
    tau_b = rng.gamma(1.0 + 0.5 * p, 1.0 + 0.5 * beta.squaredNorm());

    if (sweep % config.thin == 0) {
      ++recorded;
      if (recorded > config.burn_in) {
        int t = recorded - config.burn_in - 1;
        out.beta_draws.row(t) = beta.transpose();
        out.tau_y_draws(t) = tau_y;
        const double half_log =
            0.5 * (std::log(tau_y) - std::log(2.0 * std::numbers::pi));
        for (Eigen::Index i = 0; i < n; ++i) {
          double r = data.y(i) - data.x.row(i).dot(beta);
          out.loglik(t, i) = half_log - 0.5 * tau_y * r * r;
        }
      }
    }
  }

  auto [cpo, lpml] = compute_cpo_lpml(out.loglik);
  out.cpo = std::move(cpo);
  out.lpml = lpml;

  out.d_bar = 0.0;
  for (int t = 0; t < stored; ++t) out.d_bar += -2.0 * out.loglik.row(t).sum();
  out.d_bar /= stored;

  out.beta_mean = out.beta_draws.colwise().mean();
  double tau_y_mean = out.tau_y_draws.mean();
  double ll = 0.0;
  const double half_log =
      0.5 * (std::log(tau_y_mean) - std::log(2.0 * std::numbers::pi));
  for (Eigen::Index i = 0; i < n; ++i) {
    double r = data.y(i) - data.x.row(i).dot(out.beta_mean);
    ll += half_log - 0.5 * tau_y_mean * r * r;
  }
  out.d_at_mean = -2.0 * ll;
  out.p_d = out.d_bar - out.d_at_mean;
  return out;
}

}  // namespace spclust
