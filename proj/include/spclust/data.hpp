#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "spclust/geo.hpp"

namespace spclust {

struct Dataset {
  Eigen::VectorXd y;   // length n
  Eigen::MatrixXd x;   // n x p
  Coordinates coords;  // length n
  std::vector<std::string> names;  // optional, empty or length n

  Eigen::Index n() const { return y.size(); }
  Eigen::Index p() const { return x.cols(); }

  void validate() const;
};

// Column statistics used to move coefficients between the standardized and
// raw scales; stored with every fit's outputs.
struct Standardization {
  double y_mean = 0.0;
  double y_sd = 1.0;
  Eigen::VectorXd x_mean;
  Eigen::VectorXd x_sd;
};

// Centers and scales y and each column of X to mean 0, unit SD (in place).
Standardization standardize(Dataset& data);

// CSV with header columns y, x1..xp, lon, lat and an optional name column.
Dataset load_csv(const std::string& path);

void write_matrix_csv(const std::string& path, const Eigen::MatrixXd& m);

}  // namespace spclust
