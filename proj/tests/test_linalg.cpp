#include <cmath>
#include <numbers>

#include "doctest.h"
#include "spclust/errors.hpp"
#include "spclust/linalg.hpp"

using namespace spclust;

namespace {

// Independent exhaustive-window HPD oracle.
std::pair<double, double> hpd_oracle(std::vector<double> xs, double level) {
  std::sort(xs.begin(), xs.end());
  std::size_t m = xs.size();
  std::size_t w = static_cast<std::size_t>(std::ceil(level * m));
  double best_width = std::numeric_limits<double>::infinity();
  std::pair<double, double> best;
  for (std::size_t i = 0; i + w <= m; ++i) {
    double width = xs[i + w - 1] - xs[i];
    if (width < best_width) {
      best_width = width;
      best = {xs[i], xs[i + w - 1]};
    }
  }
  return best;
}

Eigen::MatrixXd random_spd(RngStream& rng, int d) {
  Eigen::MatrixXd b(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) b(i, j) = rng.normal();
  return b.transpose() * b + Eigen::MatrixXd::Identity(d, d);
}

}  // namespace

TEST_CASE("cholesky of identity") {
  CholeskyFactor f = cholesky(Eigen::MatrixXd::Identity(3, 3));
  CHECK((f.lower - Eigen::MatrixXd::Identity(3, 3)).norm() == 0.0);
  CHECK(f.log_det == 0.0);
}

TEST_CASE("cholesky hand factorization of [[4,2],[2,3]]") {
  Eigen::MatrixXd a(2, 2);
  a << 4, 2, 2, 3;
  CholeskyFactor f = cholesky(a);
  CHECK(f.lower(0, 0) == doctest::Approx(2.0));
  CHECK(f.lower(1, 0) == doctest::Approx(1.0));
  CHECK(f.lower(0, 1) == 0.0);
  CHECK(f.lower(1, 1) == doctest::Approx(std::sqrt(2.0)));
  CHECK(f.log_det == doctest::Approx(std::log(8.0)));
}

TEST_CASE("cholesky round trip over seeded SPD matrices, dims 1-50") {
  RngStream rng(123);
  for (int d = 1; d <= 50; d += (d < 10 ? 1 : 7)) {
    Eigen::MatrixXd a = random_spd(rng, d);
    CholeskyFactor f = cholesky(a);
    double err = (f.lower * f.lower.transpose() - a).cwiseAbs().maxCoeff();
    CHECK(err <= 1e-8 * a.cwiseAbs().maxCoeff());
  }
}

TEST_CASE("cholesky rejects non-PD with the failing pivot") {
  Eigen::MatrixXd a(2, 2);
  a << 1, 2, 2, 1;  // indefinite
  try {
    cholesky(a);
    FAIL("expected NotPositiveDefinite");
  } catch (const NotPositiveDefinite& e) {
    CHECK(e.pivot == 1);
  }
}

TEST_CASE("mvn_sample with identity factor is mean plus draws") {
  CholeskyFactor id = cholesky(Eigen::MatrixXd::Identity(2, 2));
  Eigen::VectorXd mean(2);
  mean << 3.0, -1.0;
  RngStream rng(4), rng2(4);
  Eigen::VectorXd x = mvn_sample(rng, mean, id);
  Eigen::VectorXd z(2);
  z << rng2.normal(), rng2.normal();
  CHECK(x(0) == mean(0) + z(0));
  CHECK(x(1) == mean(1) + z(1));
}

TEST_CASE("mvn_sample is byte-identical across runs with one seed") {
  CholeskyFactor cf = cholesky([] {
    Eigen::MatrixXd c(2, 2);
    c << 2, 1, 1, 2;
    return c;
  }());
  RngStream a(99), b(99);
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(2);
  Eigen::VectorXd xa = mvn_sample(a, mean, cf);
  Eigen::VectorXd xb = mvn_sample(b, mean, cf);
  CHECK(xa(0) == xb(0));
  CHECK(xa(1) == xb(1));
}

TEST_CASE("mvn_sample covariance Monte Carlo check") {
  Eigen::MatrixXd cov(2, 2);
  cov << 2, 1, 1, 2;
  CholeskyFactor cf = cholesky(cov);
  RngStream rng(17);
  const int n = 100000;
  Eigen::Matrix2d acc = Eigen::Matrix2d::Zero();
  Eigen::Vector2d mean_acc = Eigen::Vector2d::Zero();
  for (int i = 0; i < n; ++i) {
    Eigen::VectorXd x = mvn_sample(rng, Eigen::VectorXd::Zero(2), cf);
    acc += x * x.transpose();
    mean_acc += x;
  }
  Eigen::Matrix2d emp = acc / n;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      CHECK(emp(i, j) == doctest::Approx(cov(i, j)).epsilon(0.05));
}

TEST_CASE("mvn_logpdf at the mean with identity covariance") {
  for (int d : {1, 3, 7}) {
    CholeskyFactor id = cholesky(Eigen::MatrixXd::Identity(d, d));
    Eigen::VectorXd m = Eigen::VectorXd::Zero(d);
    CHECK(mvn_logpdf(m, m, id) ==
          doctest::Approx(-0.5 * d * std::log(2.0 * std::numbers::pi)));
  }
}

TEST_CASE("mvn_logpdf reduces to the scalar normal in 1-D") {
  double s2 = 2.7;
  CholeskyFactor cf = cholesky(Eigen::MatrixXd::Constant(1, 1, s2));
  Eigen::VectorXd x(1), m(1);
  x << 1.3;
  m << 0.4;
  double expect = -0.5 * std::log(2.0 * std::numbers::pi * s2) -
                  0.5 * (1.3 - 0.4) * (1.3 - 0.4) / s2;
  CHECK(mvn_logpdf(x, m, cf) == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("mvn_logpdf matches an explicit-inverse quadratic form in 3-D") {
  RngStream rng(31);
  Eigen::MatrixXd cov = [&] {
    Eigen::MatrixXd b(3, 3);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) b(i, j) = rng.normal();
    return (b.transpose() * b + Eigen::MatrixXd::Identity(3, 3)).eval();
  }();
  Eigen::VectorXd x(3), m(3);
  x << 0.5, -1.0, 2.0;
  m << 0.1, 0.0, -0.3;
  CholeskyFactor cf = cholesky(cov);
  Eigen::MatrixXd inv = cov.inverse();
  double quad = (x - m).dot(inv * (x - m));
  double expect = -0.5 * (3 * std::log(2.0 * std::numbers::pi) +
                          std::log(cov.determinant()) + quad);
  CHECK(mvn_logpdf(x, m, cf) == doctest::Approx(expect).epsilon(1e-8));
}

TEST_CASE("1-D mvn_logpdf integrates to 1 on a trapezoid grid") {
  double s2 = 1.7;
  CholeskyFactor cf = cholesky(Eigen::MatrixXd::Constant(1, 1, s2));
  Eigen::VectorXd m(1);
  m << 0.3;
  double sd = std::sqrt(s2);
  const int steps = 4000;
  double lo = m(0) - 8 * sd, hi = m(0) + 8 * sd;
  double h = (hi - lo) / steps;
  double total = 0.0;
  for (int i = 0; i <= steps; ++i) {
    Eigen::VectorXd x(1);
    x << lo + i * h;
    double f = std::exp(mvn_logpdf(x, m, cf));
    total += (i == 0 || i == steps) ? 0.5 * f : f;
  }
  total *= h;
  CHECK(total == doctest::Approx(1.0).epsilon(1e-4));
}

TEST_CASE("hpd_interval on 1..100 at level 0.95") {
  std::vector<double> xs(100);
  for (int i = 0; i < 100; ++i) xs[i] = i + 1;
  auto [lo, hi] = hpd_interval(xs, 0.95);
  auto [olo, ohi] = hpd_oracle(xs, 0.95);
  CHECK(lo == olo);
  CHECK(hi == ohi);
  CHECK(lo == 1.0);  // leftmost window on ties
  CHECK(hi == 95.0);
}

TEST_CASE("hpd_interval trivials and errors") {
  std::vector<double> constant(25, 3.14);
  auto [lo, hi] = hpd_interval(constant, 0.95);
  CHECK(lo == 3.14);
  CHECK(hi == 3.14);

  CHECK_THROWS_AS(hpd_interval(std::vector<double>(5, 1.0), 0.95),
                  InsufficientData);
  CHECK_THROWS_AS(hpd_interval(constant, 1.5), InvalidInput);
}

TEST_CASE("hpd_interval matches the oracle on random samples") {
  RngStream rng(77);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> xs(200);
    for (auto& x : xs) x = rng.gamma(2.0, 1.0);
    auto got = hpd_interval(xs, 0.9);
    auto want = hpd_oracle(xs, 0.9);
    CHECK(got.first == want.first);
    CHECK(got.second == want.second);
  }
}
