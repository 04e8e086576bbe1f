#pragma once

#include <Eigen/Dense>

#include "json.hpp"
#include "spclust/model.hpp"

namespace spclust {

nlohmann::json to_json(const ModelConfig& c);
ModelConfig config_from_json(const nlohmann::json& j);

nlohmann::json vec_to_json(const Eigen::VectorXd& v);
nlohmann::json vec_to_json(const Eigen::VectorXi& v);
nlohmann::json mat_to_json(const Eigen::MatrixXd& m);
Eigen::VectorXd vec_from_json(const nlohmann::json& j);
Eigen::VectorXi ivec_from_json(const nlohmann::json& j);
Eigen::MatrixXd mat_from_json(const nlohmann::json& j);

}  // namespace spclust
