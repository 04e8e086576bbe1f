#include "spclust/geo.hpp"

#include <cmath>
#include <numbers>

#include "spclust/errors.hpp"

namespace spclust {

namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;

void check_coord(double lon, double lat) {
  if (!std::isfinite(lon) || !std::isfinite(lat) || lon < -180.0 ||
      lon > 180.0 || lat < -90.0 || lat > 90.0) {
    throw InvalidInput("coordinates out of range or non-finite");
  }
}

double central_angle(double lon_a, double lat_a, double lon_b, double lat_b) {
  const double la = lat_a * kDegToRad;
  const double lb = lat_b * kDegToRad;
  const double dlon = (lon_b - lon_a) * kDegToRad;
  double c = std::sin(la) * std::sin(lb) + std::cos(la) * std::cos(lb) *
                                               std::cos(dlon);
  // The cosine formula is ill-conditioned when c is near +-1; use haversine
  // there.
  if (std::abs(c) < 0.999999) {
    return std::acos(c);
  }
  const double dlat = lb - la;
  double h = std::sin(dlat / 2.0) * std::sin(dlat / 2.0) +
             std::cos(la) * std::cos(lb) * std::sin(dlon / 2.0) *
                 std::sin(dlon / 2.0);
  h = std::min(1.0, std::max(0.0, h));
  return 2.0 * std::asin(std::sqrt(h));
}

}  // namespace

double great_circle_distance(double lon_a, double lat_a, double lon_b,
                             double lat_b, double radius) {
  check_coord(lon_a, lat_a);
  check_coord(lon_b, lat_b);
  if (!(radius > 0.0)) throw InvalidInput("radius must be positive");
  return radius * central_angle(lon_a, lat_a, lon_b, lat_b);
}

Eigen::MatrixXd build_distance_matrix(const Coordinates& coords, double cap) {
  const Eigen::Index n = coords.size();
  if (coords.lat.size() != n) {
    throw InvalidInput("coordinate vectors have mismatched lengths");
  }
  if (n < 2) throw InvalidInput("need at least two locations");
  if (!(cap > 0.0)) throw InvalidInput("cap must be positive");

  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
  double max_d = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      double v = great_circle_distance(coords.lon(i), coords.lat(i),
                                       coords.lon(j), coords.lat(j), 1.0);
      d(i, j) = v;
      d(j, i) = v;
      max_d = std::max(max_d, v);
    }
  }
  if (!(max_d > 0.0)) {
    throw DegenerateGeometry(
        "all locations coincide; normalization undefined");
  }
  d *= cap / max_d;
  return d;
}

}  // namespace spclust
