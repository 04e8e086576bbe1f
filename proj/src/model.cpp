#include "spclust/model.hpp"

#include <cmath>
#include <numbers>
#include <vector>

#include "spclust/errors.hpp"

namespace spclust {

Scheme scheme_from_string(const std::string& s) {
  if (s == "unity") return Scheme::Unity;
  if (s == "exponential") return Scheme::Exponential;
  if (s == "gaussian") return Scheme::Gaussian;
  throw InvalidInput("unknown weighting scheme '" + s + "'");
}

std::string scheme_to_string(Scheme s) {
  switch (s) {
    case Scheme::Unity: return "unity";
    case Scheme::Exponential: return "exponential";
    case Scheme::Gaussian: return "gaussian";
  }
  throw InvalidInput("bad scheme enum");
}

void ModelConfig::validate(Eigen::Index n) const {
  if (truncation < 2) throw InvalidInput("truncation must be >= 2");
  if (!(bandwidth_max > 0.0)) throw InvalidInput("bandwidth_max must be > 0");
  if (!(distance_cap > 0.0)) throw InvalidInput("distance_cap must be > 0");
  if (thin < 1 || n_iter < 1) throw InvalidInput("n_iter and thin must be >= 1");
  if (burn_in < 0) throw InvalidInput("burn_in must be >= 0");
  if (n_iter <= thin * burn_in) {
    throw InvalidInput("n_iter must exceed thin * burn_in");
  }
  if (n < 1) throw InvalidInput("empty dataset");
}

SpatialKernel::SpatialKernel(Eigen::MatrixXd dist, Scheme scheme, double phi)
    : dist_(std::move(dist)), scheme_(scheme), phi_(phi) {
  if (dist_.rows() != dist_.cols()) {
    throw InvalidInput("distance matrix must be square");
  }
  set_phi(phi);
}

Eigen::MatrixXd SpatialKernel::kernel_matrix(double phi) const {
  const Eigen::Index n = dist_.rows();
  if (scheme_ == Scheme::Unity) return Eigen::MatrixXd::Identity(n, n);
  if (!(phi > 0.0)) throw InvalidInput("phi must be positive");
  if (scheme_ == Scheme::Exponential) {
    return (-dist_.array() / phi).exp().matrix();
  }
  return (-(dist_.array() / phi).square()).exp().matrix();
}

void SpatialKernel::set_phi(double phi) {
  const Eigen::Index n = dist_.rows();
  if (scheme_ == Scheme::Unity) {
    phi_ = phi;
    chol_.lower = Eigen::MatrixXd::Identity(n, n);
    chol_.log_det = 0.0;
    h_inv_ = Eigen::MatrixXd::Identity(n, n);
    return;
  }
  CholeskyFactor c = cholesky(kernel_matrix(phi));
  Eigen::MatrixXd linv = c.lower.triangularView<Eigen::Lower>().solve(
      Eigen::MatrixXd::Identity(n, n));
  phi_ = phi;
  h_inv_ = linv.transpose() * linv;
  chol_ = std::move(c);
}

Eigen::VectorXd stick_weights(const Eigen::VectorXd& v) {
  const Eigen::Index m = v.size() + 1;
  Eigen::VectorXd pi(m);
  double remaining = 1.0;
  for (Eigen::Index c = 0; c < m - 1; ++c) {
    pi(c) = v(c) * remaining;
    remaining *= 1.0 - v(c);
  }
  pi(m - 1) = remaining;
  return pi;
}

Eigen::VectorXd loglik_terms(const ChainState& state, const Dataset& data) {
  const Eigen::Index n = data.n();
  Eigen::VectorXd out(n);
  const double half_log = 0.5 * (std::log(state.tau_y) -
                                 std::log(2.0 * std::numbers::pi));
  for (Eigen::Index i = 0; i < n; ++i) {
    double r = data.y(i) - data.x.row(i).dot(state.beta_table.row(state.z(i))) -
               state.w(i);
    out(i) = half_log - 0.5 * state.tau_y * r * r;
  }
  return out;
}

double loglik(const ChainState& state, const Dataset& data) {
  return loglik_terms(state, data).sum();
}

void update_z(ChainState& state, const Dataset& data, RngStream& rng) {
  const Eigen::Index n = data.n();
  const int m = state.truncation();
  Eigen::VectorXd log_pi(m);
  for (int c = 0; c < m; ++c) {
    log_pi(c) = state.pi(c) > 0.0 ? std::log(state.pi(c))
                                  : -std::numeric_limits<double>::infinity();
  }
  // x_i' beta_c for all i, c at once
  Eigen::MatrixXd fitted = data.x * state.beta_table.transpose();  // n x M
  std::vector<double> w(m);
  for (Eigen::Index i = 0; i < n; ++i) {
    double best = -std::numeric_limits<double>::infinity();
    Eigen::VectorXd lw(m);
    for (int c = 0; c < m; ++c) {
      double r = data.y(i) - fitted(i, c) - state.w(i);
      lw(c) = log_pi(c) - 0.5 * state.tau_y * r * r;
      best = std::max(best, lw(c));
    }
    if (!std::isfinite(best)) {
      throw NumericalDegeneracy("update_z: all cluster weights vanished");
    }
    for (int c = 0; c < m; ++c) w[c] = std::exp(lw(c) - best);
    state.z(i) = rng.categorical(w);
  }
}

int update_sticks_and_alpha(ChainState& state, RngStream& rng) {
  const int m = state.truncation();
  int clamped = 0;
  Eigen::VectorXi counts = Eigen::VectorXi::Zero(m);
  for (Eigen::Index i = 0; i < state.z.size(); ++i) counts(state.z(i))++;

  // tail(c) = number of observations in clusters after c
  Eigen::VectorXd tail(m);
  double acc = 0.0;
  for (int c = m - 1; c >= 0; --c) {
    tail(c) = acc;
    acc += counts(c);
  }

  double sum_log1mv = 0.0;
  for (int c = 0; c < m - 1; ++c) {
    double v = rng.beta(1.0 + counts(c), state.alpha + tail(c));
    if (v > 1.0 - 1e-12) {
      v = 1.0 - 1e-12;
      ++clamped;
    }
    state.v(c) = v;
    sum_log1mv += std::log1p(-v);
  }
  state.pi = stick_weights(state.v);
  state.alpha = rng.gamma(1.0 + (m - 1), 1.0 - sum_log1mv);
  return clamped;
}

void update_beta_table(ChainState& state, const Dataset& data, RngStream& rng) {
  const int m = state.truncation();
  const Eigen::Index p = data.p();
  std::vector<std::vector<Eigen::Index>> members(m);
  for (Eigen::Index i = 0; i < data.n(); ++i) {
    members[state.z(i)].push_back(i);
  }
  const double prior_sd = 1.0 / std::sqrt(state.tau_b);
  for (int c = 0; c < m; ++c) {
    if (members[c].empty()) {
      for (Eigen::Index j = 0; j < p; ++j) {
        state.beta_table(c, j) = rng.normal(state.mu_b(j), prior_sd);
      }
      continue;
    }
    const Eigen::Index nc = static_cast<Eigen::Index>(members[c].size());
    Eigen::MatrixXd xc(nc, p);
    Eigen::VectorXd rc(nc);
    for (Eigen::Index k = 0; k < nc; ++k) {
      Eigen::Index i = members[c][k];
      xc.row(k) = data.x.row(i);
      rc(k) = data.y(i) - state.w(i);
    }
    Eigen::MatrixXd prec =
        state.tau_b * Eigen::MatrixXd::Identity(p, p) +
        state.tau_y * (xc.transpose() * xc);
    CholeskyFactor cf = cholesky(prec);
    Eigen::VectorXd rhs =
        state.tau_b * state.mu_b + state.tau_y * (xc.transpose() * rc);
    Eigen::VectorXd mean = cf.lower.triangularView<Eigen::Lower>().solve(rhs);
    mean = cf.lower.transpose().triangularView<Eigen::Upper>().solve(mean);
    state.beta_table.row(c) = mvn_sample_precision(rng, mean, cf).transpose();
  }
}

void update_base_measure(ChainState& state, RngStream& rng) {
  const int m = state.truncation();
  const Eigen::Index p = state.mu_b.size();
  const double denom = 1.0 + m * state.tau_b;
  const double sd = 1.0 / std::sqrt(denom);
  for (Eigen::Index j = 0; j < p; ++j) {
    double mean = state.tau_b * state.beta_table.col(j).sum() / denom;
    state.mu_b(j) = rng.normal(mean, sd);
  }
  double ss = (state.beta_table.rowwise() - state.mu_b.transpose())
                  .squaredNorm();
  state.tau_b = rng.gamma(1.0 + 0.5 * m * p, 1.0 + 0.5 * ss);
}

void update_spatial(ChainState& state, const Dataset& data,
                    const SpatialKernel& kernel, RngStream& rng) {
  const Eigen::Index n = data.n();
  Eigen::VectorXd resid(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    resid(i) = data.y(i) - data.x.row(i).dot(state.beta_table.row(state.z(i)));
  }
  Eigen::MatrixXd q = state.tau_w * kernel.h_inverse();
  q.diagonal().array() += state.tau_y;
  CholeskyFactor cf;
  try {
    cf = cholesky(q);
  } catch (const NotPositiveDefinite& e) {
    throw NumericalDegeneracy(std::string("spatial precision not PD: ") +
                              e.what());
  }
  Eigen::VectorXd mean =
      cf.lower.triangularView<Eigen::Lower>().solve(state.tau_y * resid);
  mean = cf.lower.transpose().triangularView<Eigen::Upper>().solve(mean);
  state.w = mvn_sample_precision(rng, mean, cf);

  double quad = state.w.dot(kernel.h_inverse() * state.w);
  state.tau_w = rng.gamma(1.0 + 0.5 * n, 1.0 + 0.5 * quad);
}

void update_tau_y(ChainState& state, const Dataset& data, RngStream& rng) {
  const Eigen::Index n = data.n();
  double ss = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    double r = data.y(i) - data.x.row(i).dot(state.beta_table.row(state.z(i))) -
               state.w(i);
    ss += r * r;
  }
  state.tau_y = rng.gamma(1.0 + 0.5 * n, 1.0 + 0.5 * ss);
}

PhiStepResult update_phi(ChainState& state, SpatialKernel& kernel,
                         double bandwidth_max, double proposal_scale,
                         RngStream& rng) {
  PhiStepResult res;
  if (kernel.scheme() == Scheme::Unity) return res;
  res.proposed = true;

  double prop = state.phi + rng.normal(0.0, proposal_scale);
  // reflect into (0, D)
  for (int guard = 0; guard < 64; ++guard) {
    if (prop < 0.0) prop = -prop;
    else if (prop > bandwidth_max) prop = 2.0 * bandwidth_max - prop;
    else break;
  }
  if (!(prop > 0.0 && prop < bandwidth_max)) return res;

  // log target in phi: -1/2 logdet H - tau_w/2 * W' H^{-1} W
  auto log_target = [&](const CholeskyFactor& cf) {
    Eigen::VectorXd u =
        cf.lower.triangularView<Eigen::Lower>().solve(state.w);
    return -0.5 * cf.log_det - 0.5 * state.tau_w * u.squaredNorm();
  };

  double cur = log_target(kernel.chol_h());
  CholeskyFactor prop_chol;
  try {
    prop_chol = cholesky(kernel.kernel_matrix(prop));
  } catch (const NotPositiveDefinite&) {
    return res;  // non-PD proposal: reject
  }
  double nxt = log_target(prop_chol);
  if (std::log(rng.uniform()) < nxt - cur) {
    kernel.set_phi(prop);
    state.phi = prop;
    res.accepted = true;
  }
  return res;
}

}  // namespace spclust
