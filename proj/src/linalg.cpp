#include "spclust/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "spclust/errors.hpp"

namespace spclust {

CholeskyFactor cholesky(const Eigen::MatrixXd& a) {
  const Eigen::Index n = a.rows();
  if (a.cols() != n) throw InvalidInput("cholesky: matrix must be square");
  CholeskyFactor f;
  f.lower = Eigen::MatrixXd::Zero(n, n);
  double logdet = 0.0;
  for (Eigen::Index j = 0; j < n; ++j) {
    double d = a(j, j) - f.lower.row(j).head(j).squaredNorm();
    if (!(d > 0.0) || !std::isfinite(d)) {
      throw NotPositiveDefinite(static_cast<int>(j));
    }
    double ljj = std::sqrt(d);
    f.lower(j, j) = ljj;
    logdet += std::log(ljj);
    for (Eigen::Index i = j + 1; i < n; ++i) {
      f.lower(i, j) =
          (a(i, j) - f.lower.row(i).head(j).dot(f.lower.row(j).head(j))) / ljj;
    }
  }
  f.log_det = 2.0 * logdet;
  return f;
}

Eigen::VectorXd mvn_sample(RngStream& rng, const Eigen::VectorXd& mean,
                           const CholeskyFactor& chol_cov) {
  const Eigen::Index d = chol_cov.dim();
  if (mean.size() != d) throw InvalidInput("mvn_sample: dimension mismatch");
  Eigen::VectorXd z(d);
  for (Eigen::Index i = 0; i < d; ++i) z(i) = rng.normal();
  return mean + chol_cov.lower * z;
}

double mvn_logpdf(const Eigen::VectorXd& x, const Eigen::VectorXd& mean,
                  const CholeskyFactor& chol_cov) {
  const Eigen::Index d = chol_cov.dim();
  if (x.size() != d || mean.size() != d) {
    throw InvalidInput("mvn_logpdf: dimension mismatch");
  }
  Eigen::VectorXd u = chol_cov.lower.triangularView<Eigen::Lower>().solve(
      (x - mean).eval());
  return -0.5 * (static_cast<double>(d) * std::log(2.0 * std::numbers::pi) +
                 chol_cov.log_det + u.squaredNorm());
}

Eigen::VectorXd mvn_sample_precision(RngStream& rng,
                                     const Eigen::VectorXd& mean,
                                     const CholeskyFactor& chol_prec) {
  const Eigen::Index d = chol_prec.dim();
  if (mean.size() != d) {
    throw InvalidInput("mvn_sample_precision: dimension mismatch");
  }
  Eigen::VectorXd z(d);
  for (Eigen::Index i = 0; i < d; ++i) z(i) = rng.normal();
  Eigen::VectorXd x =
      chol_prec.lower.transpose().triangularView<Eigen::Upper>().solve(z);
  return mean + x;
}

std::pair<double, double> hpd_interval(std::vector<double> samples,
                                       double level) {
  if (!(level > 0.0 && level < 1.0)) {
    throw InvalidInput("hpd_interval: level must be in (0,1)");
  }
  const std::size_t m = samples.size();
  if (m < 20) throw InsufficientData("hpd_interval: need at least 20 samples");
  for (double s : samples) {
    if (!std::isfinite(s)) throw InvalidInput("hpd_interval: non-finite sample");
  }
  std::sort(samples.begin(), samples.end());
  std::size_t w = static_cast<std::size_t>(
      std::ceil(level * static_cast<double>(m)));
  w = std::min(std::max<std::size_t>(w, 1), m);
  std::size_t best = 0;
  double best_width = samples[w - 1] - samples[0];
  for (std::size_t i = 1; i + w <= m; ++i) {
    double width = samples[i + w - 1] - samples[i];
    if (width < best_width) {
      best_width = width;
      best = i;
    }
  }
  return {samples[best], samples[best + w - 1]};
}

}  // namespace spclust
