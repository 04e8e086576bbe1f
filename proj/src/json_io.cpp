#include "spclust/json_io.hpp"

#include "spclust/errors.hpp"

namespace spclust {

using nlohmann::json;

json to_json(const ModelConfig& c) {
  return json{{"truncation", c.truncation},
              {"bandwidth_max", c.bandwidth_max},
              {"scheme", scheme_to_string(c.scheme)},
              {"distance_cap", c.distance_cap},
              {"n_iter", c.n_iter},
              {"thin", c.thin},
              {"burn_in", c.burn_in},
              {"seed", c.seed},
              {"phi_proposal_scale", c.phi_proposal_scale}};
}

ModelConfig config_from_json(const json& j) {
  ModelConfig c;
  static const char* known[] = {"truncation", "bandwidth_max", "scheme",
                                "distance_cap", "n_iter", "thin", "burn_in",
                                "seed", "phi_proposal_scale"};
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (const char* k : known) ok = ok || it.key() == k;
    if (!ok) throw InvalidInput("unknown config key '" + it.key() + "'");
  }
  if (j.contains("truncation")) c.truncation = j["truncation"].get<int>();
  if (j.contains("bandwidth_max")) c.bandwidth_max = j["bandwidth_max"].get<double>();
  if (j.contains("scheme")) c.scheme = scheme_from_string(j["scheme"].get<std::string>());
  if (j.contains("distance_cap")) c.distance_cap = j["distance_cap"].get<double>();
  if (j.contains("n_iter")) c.n_iter = j["n_iter"].get<int>();
  if (j.contains("thin")) c.thin = j["thin"].get<int>();
  if (j.contains("burn_in")) c.burn_in = j["burn_in"].get<int>();
  if (j.contains("seed")) c.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("phi_proposal_scale")) c.phi_proposal_scale = j["phi_proposal_scale"].get<double>();
  return c;
}

json vec_to_json(const Eigen::VectorXd& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

json vec_to_json(const Eigen::VectorXi& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

json mat_to_json(const Eigen::MatrixXd& m) {
  json a = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    a.push_back(std::move(row));
  }
  return a;
}

Eigen::VectorXd vec_from_json(const json& j) {
  Eigen::VectorXd v(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) v(i) = j[i].get<double>();
  return v;
}

Eigen::VectorXi ivec_from_json(const json& j) {
  Eigen::VectorXi v(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) v(i) = j[i].get<int>();
  return v;
}

Eigen::MatrixXd mat_from_json(const json& j) {
  if (j.empty()) return Eigen::MatrixXd();
  Eigen::MatrixXd m(j.size(), j[0].size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (j[i].size() != static_cast<std::size_t>(m.cols())) {
      throw FormatError("ragged matrix in JSON");
    }
    for (std::size_t k = 0; k < j[i].size(); ++k) m(i, k) = j[i][k].get<double>();
  }
  return m;
}

}  // namespace spclust
