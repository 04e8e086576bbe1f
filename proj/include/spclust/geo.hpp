#pragma once

#include <Eigen/Dense>

namespace spclust {

// Mean equatorial radius used by the common geosphere routines, in meters.
// Irrelevant once the matrix is normalized, but kept for raw output.
inline constexpr double kEarthRadius = 6378137.0;

struct Coordinates {
  Eigen::VectorXd lon;  // degrees, [-180, 180]
  Eigen::VectorXd lat;  // degrees, [-90, 90]

  Eigen::Index size() const { return lon.size(); }
};

// Great-circle distance via the spherical law of cosines, switching to the
// haversine form near the degenerate ends where the cosine formula loses
// precision.  Result is in units of radius.
double great_circle_distance(double lon_a, double lat_a, double lon_b,
                             double lat_b, double radius = kEarthRadius);

// Pairwise great-circle distances rescaled so the maximum entry equals cap.
Eigen::MatrixXd build_distance_matrix(const Coordinates& coords,
                                      double cap = 10.0);

}  // namespace spclust
