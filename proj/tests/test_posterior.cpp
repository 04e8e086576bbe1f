#include <cmath>

#include "doctest.h"
#include "spclust/errors.hpp"
#include "spclust/posterior.hpp"

using namespace spclust;

namespace {

Draw make_draw(std::initializer_list<int> labels,
               const Eigen::MatrixXd& beta) {
  Draw d;
  d.z.resize(static_cast<Eigen::Index>(labels.size()));
  Eigen::Index i = 0;
  for (int l : labels) d.z(i++) = l;
  d.beta_table = beta;
  d.w = Eigen::VectorXd::Zero(d.z.size());
  d.mu_b = Eigen::VectorXd::Zero(beta.cols());
  d.alpha = 1.0;
  d.tau_y = 1.0;
  d.tau_w = 1.0;
  d.tau_b = 1.0;
  d.phi = 1.0;
  return d;
}

}  // namespace

TEST_CASE("membership_matrix hand example") {
  Eigen::VectorXi z(3);
  z << 0, 0, 1;
  Eigen::MatrixXd b = membership_matrix(z);
  Eigen::MatrixXd expect(3, 3);
  expect << 1, 1, 0, 1, 1, 0, 0, 0, 1;
  CHECK((b - expect).norm() == 0.0);
}

TEST_CASE("dahl_select picks the modal partition, earliest on ties") {
  Eigen::MatrixXd beta = Eigen::MatrixXd::Zero(3, 1);
  PosteriorDraws d;
  d.draws.push_back(make_draw({0, 0, 1}, beta));
  d.draws.push_back(make_draw({0, 1, 1}, beta));
  d.draws.push_back(make_draw({0, 0, 1}, beta));

  DahlResult r = dahl_select(d);
  // B_bar: diag 1, b01 = 2/3, b12 = 1/3, b02 = 0.  Draws 0 and 2 are the
  // same partition and closest; the earliest (index 0) must win.
  CHECK(r.b_bar(0, 1) == doctest::Approx(2.0 / 3.0));
  CHECK(r.b_bar(1, 2) == doctest::Approx(1.0 / 3.0));
  CHECK(r.b_bar(0, 2) == doctest::Approx(0.0));
  CHECK(r.selected == 0);
  CHECK(r.k == 2);
  // sizes 2 and 1: the pair keeps label 0
  CHECK(r.z_star(0) == 0);
  CHECK(r.z_star(1) == 0);
  CHECK(r.z_star(2) == 1);
}

TEST_CASE("final labels are renumbered by decreasing cluster size") {
  Eigen::MatrixXd beta = Eigen::MatrixXd::Zero(5, 1);
  PosteriorDraws d;
  d.draws.push_back(make_draw({4, 4, 4, 0, 2}, beta));

  DahlResult r = dahl_select(d);
  CHECK(r.k == 3);
  CHECK(r.z_star(0) == 0);
  CHECK(r.z_star(1) == 0);
  CHECK(r.z_star(2) == 0);
  // ties between the singletons break by original label order (stable)
  CHECK(r.z_star(3) == 1);
  CHECK(r.z_star(4) == 2);

  auto mem = r.members();
  CHECK(mem.size() == 3);
  CHECK(mem[0].size() == 3);
  CHECK(mem[1].size() == 1);
  CHECK(mem[1][0] == 3);
  CHECK(mem[2][0] == 4);
}

TEST_CASE("dahl_select requires at least one draw") {
  PosteriorDraws d;
  CHECK_THROWS_AS(dahl_select(d), InvalidInput);
}

TEST_CASE("summarize_clusters pooled mode") {
  // 30 draws; cluster labels fixed; beta rows drift linearly so the pooled
  // mean is an exact average we can compute by hand.
  PosteriorDraws d;
  const int t = 30;
  for (int c = 0; c < t; ++c) {
    Eigen::MatrixXd beta(2, 2);
    double delta = 0.01 * c;
    beta << 1.0 + delta, 2.0, 3.0, 4.0 - delta;
    d.draws.push_back(make_draw({0, 0, 1}, beta));
  }
  DahlResult r = dahl_select(d);
  CHECK(r.k == 2);
  ClusterSummary s = summarize_clusters(d, r, SummaryMode::Pooled, 0.95);
  CHECK(s.sizes[0] == 2);
  CHECK(s.sizes[1] == 1);
  double mean_delta = 0.01 * (t - 1) / 2.0;
  CHECK(s.mean(0, 0) == doctest::Approx(1.0 + mean_delta).epsilon(1e-12));
  CHECK(s.mean(0, 1) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(s.mean(1, 0) == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(s.mean(1, 1) == doctest::Approx(4.0 - mean_delta).epsilon(1e-12));
  // constant coordinate: degenerate interval
  CHECK(s.hpd_lo(0, 1) == 2.0);
  CHECK(s.hpd_hi(0, 1) == 2.0);
  // drifting coordinate: interval inside the seen range
  CHECK(s.hpd_lo(0, 0) >= 1.0);
  CHECK(s.hpd_hi(0, 0) <= 1.0 + 0.01 * (t - 1));
  CHECK(s.hpd_hi(0, 0) > s.hpd_lo(0, 0));
}

TEST_CASE("summarize_clusters selected-draw mode is degenerate") {
  PosteriorDraws d;
  for (int c = 0; c < 25; ++c) {
    Eigen::MatrixXd beta(2, 1);
    beta << 1.0 + 0.1 * c, 5.0;
    d.draws.push_back(make_draw({0, 1}, beta));
  }
  DahlResult r = dahl_select(d);
  ClusterSummary s = summarize_clusters(d, r, SummaryMode::SelectedDraw, 0.95);
  double v = d.draws[r.selected].beta_table(d.draws[r.selected].z(0), 0);
  // both labels are singletons so relabeled cluster 0 holds location 0
  CHECK(s.mean(0, 0) == v);
  CHECK(s.hpd_lo(0, 0) == v);
  CHECK(s.hpd_hi(0, 0) == v);
}

TEST_CASE("per_location_summary tracks beta through the labels") {
  PosteriorDraws d;
  const int t = 40;
  for (int c = 0; c < t; ++c) {
    Eigen::MatrixXd beta(2, 1);
    beta << 1.0, -1.0;
    // location 1 flips cluster halfway through
    d.draws.push_back(make_draw({0, c < t / 2 ? 0 : 1}, beta));
  }
  LocationSummary s = per_location_summary(d, 0.95);
  CHECK(s.mean.rows() == 2);
  CHECK(s.mean(0, 0) == doctest::Approx(1.0));
  CHECK(s.mean(1, 0) == doctest::Approx(0.0));  // half at 1, half at -1
  CHECK(s.hpd_lo(1, 0) == -1.0);
  CHECK(s.hpd_hi(1, 0) == 1.0);
  CHECK(s.hpd_lo(0, 0) == 1.0);
  CHECK(s.hpd_hi(0, 0) == 1.0);
}
