// Distributional checks of every Gibbs full conditional against a numeric
// oracle built directly from prior x likelihood, normalized on a grid.
// Scalar blocks use a probability-integral-transform KS test; vector blocks
// compare empirical moments to grid-integrated moments.
#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "doctest.h"
#include "spclust/model.hpp"

using namespace spclust;

namespace {

// 1% KS critical value for uniformity, n >= ~50.
double ks_critical(std::size_t n) {
  return 1.628 / std::sqrt(static_cast<double>(n));
}

struct GridCdf {
  std::vector<double> x, cdf;

  GridCdf(const std::function<double(double)>& logf, double lo, double hi,
          int n = 4001) {
    x.resize(n);
    std::vector<double> f(n);
    double mx = -1e300;
    for (int i = 0; i < n; ++i) {
      x[i] = lo + (hi - lo) * i / (n - 1);
      f[i] = logf(x[i]);
      mx = std::max(mx, f[i]);
    }
    cdf.resize(n);
    cdf[0] = 0.0;
    for (int i = 1; i < n; ++i) {
      cdf[i] = cdf[i - 1] + 0.5 * (std::exp(f[i] - mx) + std::exp(f[i - 1] - mx));
    }
    for (double& c : cdf) c /= cdf.back();
  }

  double operator()(double v) const {
    if (v <= x.front()) return 0.0;
    if (v >= x.back()) return 1.0;
    auto it = std::upper_bound(x.begin(), x.end(), v);
    std::size_t i = static_cast<std::size_t>(it - x.begin());
    double t = (v - x[i - 1]) / (x[i] - x[i - 1]);
    return cdf[i - 1] + t * (cdf[i] - cdf[i - 1]);
  }
};

double ks_uniform(std::vector<double> pit) {
  std::sort(pit.begin(), pit.end());
  const std::size_t n = pit.size();
  double d = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double lo = static_cast<double>(i) / n, hi = static_cast<double>(i + 1) / n;
    d = std::max(d, std::max(pit[i] - lo, hi - pit[i]));
  }
  return d;
}

Dataset fixed_dataset(Eigen::Index n, Eigen::Index p, RngStream& rng) {
  Dataset d;
  d.y.resize(n);
  d.x.resize(n, p);
  d.coords.lon.resize(n);
  d.coords.lat.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    d.y(i) = rng.normal();
    for (Eigen::Index j = 0; j < p; ++j) d.x(i, j) = rng.normal();
    d.coords.lon(i) = static_cast<double>(i);
    d.coords.lat(i) = 0.0;
  }
  return d;
}

}  // namespace

TEST_CASE("stick fraction conditional: PIT of V_1 is uniform") {
  RngStream rng(101);
  Dataset d = fixed_dataset(6, 1, rng);
  ChainState base;
  base.z.resize(6);
  base.z << 0, 0, 0, 1, 1, 2;
  base.beta_table = Eigen::MatrixXd::Zero(3, 1);
  base.v = Eigen::VectorXd::Constant(2, 0.5);
  base.pi = stick_weights(base.v);
  base.mu_b = Eigen::VectorXd::Zero(1);
  base.w = Eigen::VectorXd::Zero(6);
  base.alpha = 1.7;

  // V_1 | z, alpha proportional to prior Beta(1, alpha) x v^{n_1}(1-v)^{n_{>1}}
  const double n1 = 3, tail1 = 3, alpha = 1.7;
  GridCdf oracle(
      [&](double v) {
        return n1 * std::log(v) + (tail1 + alpha - 1.0) * std::log1p(-v);
      },
      1e-9, 1.0 - 1e-9);

  const int reps = 2000;
  std::vector<double> pit(reps);
  for (int t = 0; t < reps; ++t) {
    ChainState c = base;
    update_sticks_and_alpha(c, rng);
    pit[t] = oracle(c.v(0));
  }
  CHECK(ks_uniform(pit) < ks_critical(reps));
}

TEST_CASE("alpha conditional: per-draw PIT against the Gamma kernel") {
  RngStream rng(102);
  ChainState base;
  base.z.resize(6);
  base.z << 0, 0, 0, 1, 1, 2;
  base.beta_table = Eigen::MatrixXd::Zero(3, 1);
  base.v = Eigen::VectorXd::Constant(2, 0.5);
  base.pi = stick_weights(base.v);
  base.mu_b = Eigen::VectorXd::Zero(1);
  base.w = Eigen::VectorXd::Zero(6);

  // alpha | V proportional to alpha^{M-1} exp(-alpha (1 - sum log(1-V_c)))
  const int reps = 2000;
  std::vector<double> pit(reps);
  for (int t = 0; t < reps; ++t) {
    ChainState c = base;
    update_sticks_and_alpha(c, rng);
    double rate = 1.0 - std::log1p(-c.v(0)) - std::log1p(-c.v(1));
    double hi = (3.0 + 12.0 * std::sqrt(3.0)) / rate;  // mean + 12 sd
    GridCdf oracle(
        [&](double a) { return 2.0 * std::log(a) - a * rate; }, 1e-9, hi,
        2001);
    pit[t] = oracle(c.alpha);
  }
  CHECK(ks_uniform(pit) < ks_critical(reps));
}

TEST_CASE("tau_y conditional: PIT against prior x likelihood on a grid") {
  RngStream rng(103);
  Dataset d = fixed_dataset(5, 2, rng);
  ChainState base;
  base.z.resize(5);
  base.z << 0, 1, 0, 1, 0;
  base.beta_table = Eigen::MatrixXd::Zero(2, 2);
  base.beta_table << 0.4, -0.3, 1.1, 0.2;
  base.v = Eigen::VectorXd::Constant(1, 0.5);
  base.pi = stick_weights(base.v);
  base.mu_b = Eigen::VectorXd::Zero(2);
  base.w.resize(5);
  base.w << 0.1, -0.2, 0.05, 0.3, -0.1;

  double ss = 0.0;
  for (int i = 0; i < 5; ++i) {
    double r = d.y(i) - d.x.row(i).dot(base.beta_table.row(base.z(i))) -
               base.w(i);
    ss += r * r;
  }
  double rate = 1.0 + 0.5 * ss;
  // Gamma(1 + n/2, rate) has mean 3.5/rate; grid out to mean + 12 sd.
  double hi = (3.5 + 12.0 * std::sqrt(3.5)) / rate;
  GridCdf oracle([&](double t) { return 2.5 * std::log(t) - t * rate; }, 1e-9,
                 hi);

  const int reps = 2000;
  std::vector<double> pit(reps);
  for (int t = 0; t < reps; ++t) {
    ChainState c = base;
    update_tau_y(c, d, rng);
    pit[t] = oracle(c.tau_y);
  }
  CHECK(ks_uniform(pit) < ks_critical(reps));
}

TEST_CASE("tau_b conditional: per-draw PIT with the freshly drawn mu") {
  RngStream rng(104);
  ChainState base;
  base.beta_table.resize(3, 2);
  base.beta_table << 0.5, -1.0, 1.5, 0.3, -0.7, 2.0;
  base.mu_b = Eigen::VectorXd::Zero(2);
  base.tau_b = 1.0;

  // mu is redrawn first inside update_base_measure, so condition on the new
  // value: tau_b | beta, mu proportional to tau^{Mp/2} exp(-tau (1 + ss/2)).
  const int reps = 2000;
  std::vector<double> pit(reps);
  for (int t = 0; t < reps; ++t) {
    ChainState c = base;
    update_base_measure(c, rng);
    double ss =
        (c.beta_table.rowwise() - c.mu_b.transpose()).squaredNorm();
    double rate = 1.0 + 0.5 * ss;
    double shape = 1.0 + 0.5 * 3 * 2;
    double hi = (shape + 12.0 * std::sqrt(shape)) / rate;
    GridCdf oracle(
        [&](double x) { return (shape - 1.0) * std::log(x) - x * rate; },
        1e-9, hi, 2001);
    pit[t] = oracle(c.tau_b);
  }
  CHECK(ks_uniform(pit) < ks_critical(reps));
}

TEST_CASE("tau_w conditional: per-draw PIT with the freshly drawn W") {
  RngStream rng(105);
  Dataset d = fixed_dataset(3, 1, rng);
  Eigen::MatrixXd dist(3, 3);
  dist << 0, 1, 2, 1, 0, 1, 2, 1, 0;
  SpatialKernel kernel(dist, Scheme::Exponential, 1.5);
  Eigen::MatrixXd h_inv = kernel.kernel_matrix(1.5).inverse();

  ChainState base;
  base.z = Eigen::VectorXi::Zero(3);
  base.beta_table = Eigen::MatrixXd::Constant(2, 1, 0.3);
  base.v = Eigen::VectorXd::Constant(1, 0.5);
  base.pi = stick_weights(base.v);
  base.mu_b = Eigen::VectorXd::Zero(1);
  base.w = Eigen::VectorXd::Zero(3);
  base.tau_w = 1.2;

  const int reps = 2000;
  std::vector<double> pit(reps);
  for (int t = 0; t < reps; ++t) {
    ChainState c = base;
    update_spatial(c, d, kernel, rng);
    double quad = c.w.dot(h_inv * c.w);
    double rate = 1.0 + 0.5 * quad;
    double shape = 1.0 + 1.5;
    double hi = (shape + 12.0 * std::sqrt(shape)) / rate;
    GridCdf oracle(
        [&](double x) { return (shape - 1.0) * std::log(x) - x * rate; },
        1e-9, hi, 2001);
    pit[t] = oracle(c.tau_w);
  }
  CHECK(ks_uniform(pit) < ks_critical(reps));
}

TEST_CASE("beta conditional: empirical moments match 2-D grid integration") {
  RngStream rng(106);
  Dataset d = fixed_dataset(3, 2, rng);
  ChainState base;
  base.z = Eigen::VectorXi::Zero(3);
  base.beta_table = Eigen::MatrixXd::Zero(2, 2);
  base.v = Eigen::VectorXd::Constant(1, 0.5);
  base.pi = stick_weights(base.v);
  base.mu_b.resize(2);
  base.mu_b << 0.5, -0.5;
  base.w.resize(3);
  base.w << 0.2, -0.1, 0.0;
  base.tau_b = 0.8;
  base.tau_y = 1.4;

  auto logf = [&](double b1, double b2) {
    double lp = -0.5 * base.tau_b *
                ((b1 - 0.5) * (b1 - 0.5) + (b2 + 0.5) * (b2 + 0.5));
    for (int i = 0; i < 3; ++i) {
      double r = d.y(i) - base.w(i) - d.x(i, 0) * b1 - d.x(i, 1) * b2;
      lp -= 0.5 * base.tau_y * r * r;
    }
    return lp;
  };

  // grid moments
  const int g = 401;
  const double lo = -6.0, hi = 6.0, step = (hi - lo) / (g - 1);
  double norm = 0, m1 = 0, m2 = 0, s11 = 0, s22 = 0, s12 = 0;
  for (int i = 0; i < g; ++i) {
    double b1 = lo + i * step;
    for (int j = 0; j < g; ++j) {
      double b2 = lo + j * step;
      double w = std::exp(logf(b1, b2));
      norm += w;
      m1 += w * b1;
      m2 += w * b2;
      s11 += w * b1 * b1;
      s22 += w * b2 * b2;
      s12 += w * b1 * b2;
    }
  }
  m1 /= norm;
  m2 /= norm;
  double v11 = s11 / norm - m1 * m1;
  double v22 = s22 / norm - m2 * m2;
  double c12 = s12 / norm - m1 * m2;

  const int reps = 60000;
  double e1 = 0, e2 = 0, q11 = 0, q22 = 0, q12 = 0;
  for (int t = 0; t < reps; ++t) {
    ChainState c = base;
    update_beta_table(c, d, rng);
    double b1 = c.beta_table(0, 0), b2 = c.beta_table(0, 1);
    e1 += b1;
    e2 += b2;
    q11 += b1 * b1;
    q22 += b2 * b2;
    q12 += b1 * b2;
  }
  e1 /= reps;
  e2 /= reps;
  CHECK(std::abs(e1 - m1) < 5.0 * std::sqrt(v11 / reps));
  CHECK(std::abs(e2 - m2) < 5.0 * std::sqrt(v22 / reps));
  CHECK(q11 / reps - e1 * e1 == doctest::Approx(v11).epsilon(0.05));
  CHECK(q22 / reps - e2 * e2 == doctest::Approx(v22).epsilon(0.05));
  CHECK(q12 / reps - e1 * e2 == doctest::Approx(c12).epsilon(0.10));
}

TEST_CASE("spatial effect conditional: moments match 2-D grid integration") {
  RngStream rng(107);
  Dataset d = fixed_dataset(2, 1, rng);
  Eigen::MatrixXd dist(2, 2);
  dist << 0, 1.5, 1.5, 0;
  SpatialKernel kernel(dist, Scheme::Exponential, 2.0);
  Eigen::MatrixXd h_inv = kernel.kernel_matrix(2.0).inverse();

  ChainState base;
  base.z = Eigen::VectorXi::Zero(2);
  base.beta_table = Eigen::MatrixXd::Constant(2, 1, 0.6);
  base.v = Eigen::VectorXd::Constant(1, 0.5);
  base.pi = stick_weights(base.v);
  base.mu_b = Eigen::VectorXd::Zero(1);
  base.w = Eigen::VectorXd::Zero(2);
  base.tau_w = 1.1;
  base.tau_y = 0.9;

  Eigen::VectorXd resid(2);
  for (int i = 0; i < 2; ++i) {
    resid(i) = d.y(i) - d.x(i, 0) * 0.6;
  }
  auto logf = [&](double w1, double w2) {
    Eigen::Vector2d w(w1, w2);
    double lp = -0.5 * base.tau_w * w.dot(h_inv * w);
    lp -= 0.5 * base.tau_y * ((resid(0) - w1) * (resid(0) - w1) +
                              (resid(1) - w2) * (resid(1) - w2));
    return lp;
  };

  const int g = 401;
  const double lo = -6.0, hi = 6.0, step = (hi - lo) / (g - 1);
  double norm = 0, m1 = 0, m2 = 0, s11 = 0, s22 = 0, s12 = 0;
  for (int i = 0; i < g; ++i) {
    double w1 = lo + i * step;
    for (int j = 0; j < g; ++j) {
      double w2 = lo + j * step;
      double w = std::exp(logf(w1, w2));
      norm += w;
      m1 += w * w1;
      m2 += w * w2;
      s11 += w * w1 * w1;
      s22 += w * w2 * w2;
      s12 += w * w1 * w2;
    }
  }
  m1 /= norm;
  m2 /= norm;
  double v11 = s11 / norm - m1 * m1;
  double v22 = s22 / norm - m2 * m2;
  double c12 = s12 / norm - m1 * m2;

  const int reps = 60000;
  double e1 = 0, e2 = 0, q11 = 0, q22 = 0, q12 = 0;
  for (int t = 0; t < reps; ++t) {
    ChainState c = base;
    update_spatial(c, d, kernel, rng);
    e1 += c.w(0);
    e2 += c.w(1);
    q11 += c.w(0) * c.w(0);
    q22 += c.w(1) * c.w(1);
    q12 += c.w(0) * c.w(1);
  }
  e1 /= reps;
  e2 /= reps;
  CHECK(std::abs(e1 - m1) < 5.0 * std::sqrt(v11 / reps));
  CHECK(std::abs(e2 - m2) < 5.0 * std::sqrt(v22 / reps));
  CHECK(q11 / reps - e1 * e1 == doctest::Approx(v11).epsilon(0.05));
  CHECK(q22 / reps - e2 * e2 == doctest::Approx(v22).epsilon(0.05));
  CHECK(q12 / reps - e1 * e2 == doctest::Approx(c12).epsilon(0.10));
}

TEST_CASE("label conditional: joint cell frequencies match enumeration") {
  RngStream rng(108);
  Dataset d = fixed_dataset(2, 1, rng);
  ChainState base;
  base.z = Eigen::VectorXi::Zero(2);
  base.beta_table.resize(2, 1);
  base.beta_table << -0.5, 1.2;
  base.v = Eigen::VectorXd::Constant(1, 0.4);
  base.pi = stick_weights(base.v);
  base.mu_b = Eigen::VectorXd::Zero(1);
  base.w.resize(2);
  base.w << 0.1, -0.3;
  base.tau_y = 1.6;

  // Given everything else, labels are independent across observations.
  auto probs = [&](int i) {
    Eigen::Vector2d p;
    for (int c = 0; c < 2; ++c) {
      double r = d.y(i) - d.x(i, 0) * base.beta_table(c, 0) - base.w(i);
      p(c) = base.pi(c) * std::exp(-0.5 * base.tau_y * r * r);
    }
    return (p / p.sum()).eval();
  };
  Eigen::Vector2d p0 = probs(0), p1 = probs(1);

  const int reps = 80000;
  Eigen::Matrix2d counts = Eigen::Matrix2d::Zero();
  for (int t = 0; t < reps; ++t) {
    ChainState c = base;
    update_z(c, d, rng);
    counts(c.z(0), c.z(1)) += 1.0;
  }
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      double expect = p0(a) * p1(b);
      double se = std::sqrt(expect * (1.0 - expect) / reps);
      CHECK(std::abs(counts(a, b) / reps - expect) < 4.0 * se);
    }
  }
}
