#include "spclust/chain.hpp"

#include <chrono>
#include <fstream>

#include "spclust/errors.hpp"
#include "spclust/json_io.hpp"

namespace spclust {

ChainState init_state(const ModelConfig& config, const Dataset& data,
                      RngStream& rng) {
  config.validate(data.n());
  const Eigen::Index n = data.n();
  const Eigen::Index p = data.p();
  const int m = config.truncation;

  ChainState s;
  s.z = Eigen::VectorXi::Zero(n);  // everyone starts in cluster 1
  s.alpha = 2.0;
  s.tau_y = 1.0;
  s.tau_w = 1.0;
  s.tau_b = 1.0;
  s.phi = 1.0;
  s.w = Eigen::VectorXd::Zero(n);
  s.mu_b.resize(p);
  for (Eigen::Index j = 0; j < p; ++j) s.mu_b(j) = rng.normal();
  s.v.resize(m - 1);
  for (int c = 0; c < m - 1; ++c) s.v(c) = rng.beta(1.0, 1.0);
  s.pi = stick_weights(s.v);
  s.beta_table.resize(m, p);
  for (int c = 0; c < m; ++c) {
    for (Eigen::Index j = 0; j < p; ++j) {
      s.beta_table(c, j) = rng.normal(s.mu_b(j), 1.0);
    }
  }
  return s;
}

PosteriorDraws run_chain(const ModelConfig& config, const Dataset& data,
                         RngStream& rng) {
  data.validate();
  config.validate(data.n());
  const auto t0 = std::chrono::steady_clock::now();

  Eigen::MatrixXd dist =
      build_distance_matrix(data.coords, config.distance_cap);
  SpatialKernel kernel(std::move(dist), config.scheme, 1.0);
  ChainState state = init_state(config, data, rng);

  PosteriorDraws out;
  out.config = config;
  const int total_recorded = config.n_iter / config.thin;
  const int stored = total_recorded - config.burn_in;
  out.draws.reserve(stored);
  out.loglik.resize(stored, data.n());

  double prop_scale = config.phi_proposal_scale;
  int window_prop = 0, window_acc = 0;
  int recorded = 0;
  double last_stick_sum = 0.0;
  const int burn_sweeps = config.burn_in * config.thin;

  for (int sweep = 1; sweep <= config.n_iter; ++sweep) {
    const char* block = "z";
    try {
      update_z(state, data, rng);
      block = "sticks/alpha";
      out.stick_clamps += update_sticks_and_alpha(state, rng);
      block = "beta-table";
      update_beta_table(state, data, rng);
      block = "base-measure";
      update_base_measure(state, rng);
      block = "spatial";
      update_spatial(state, data, kernel, rng);
      block = "phi";
      PhiStepResult phi_res =
          update_phi(state, kernel, config.bandwidth_max, prop_scale, rng);
      if (phi_res.proposed) {
        ++out.phi_proposals;
        ++window_prop;
        if (phi_res.accepted) {
          ++out.phi_accepts;
          ++window_acc;
        }
        // Adapt the proposal scale toward 30-45% acceptance, burn-in only.
        if (sweep <= burn_sweeps && window_prop == 50) {
          double rate = static_cast<double>(window_acc) / window_prop;
          if (rate > 0.45) prop_scale *= 1.25;
          else if (rate < 0.30) prop_scale /= 1.25;
          window_prop = window_acc = 0;
        }
      }
      block = "tau_y";
      update_tau_y(state, data, rng);
    } catch (const Error& e) {
      throw NumericalDegeneracy("chain aborted at sweep " +
                                std::to_string(sweep) + ", block " + block +
                                ": " + e.what());
    }

    if (sweep % config.thin == 0) {
      ++recorded;
      if (recorded > config.burn_in) {
        Draw d{state.z, state.beta_table, state.w, state.mu_b, state.alpha,
               state.tau_y, state.tau_w, state.tau_b, state.phi};
        out.loglik.row(out.draws.size()) = loglik_terms(state, data);
        out.draws.push_back(std::move(d));
        last_stick_sum += state.pi(config.truncation - 1);
      }
    }
  }

  out.last_stick_mass = last_stick_sum / stored;
  out.elapsed_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  if (!out.loglik.allFinite()) {
    throw NumericalDegeneracy("non-finite log-likelihood terms recorded");
  }
  return out;
}

namespace {

using nlohmann::json;

json body_json(const PosteriorDraws& d) {
  json draws = json::array();
  for (const Draw& dr : d.draws) {
    draws.push_back(json{{"z", vec_to_json(dr.z)},
                         {"beta_table", mat_to_json(dr.beta_table)},
                         {"w", vec_to_json(dr.w)},
                         {"mu_b", vec_to_json(dr.mu_b)},
                         {"alpha", dr.alpha},
                         {"tau_y", dr.tau_y},
                         {"tau_w", dr.tau_w},
                         {"tau_b", dr.tau_b},
                         {"phi", dr.phi}});
  }
  return json{{"config", to_json(d.config)},
              {"draws", std::move(draws)},
              {"loglik", mat_to_json(d.loglik)},
              {"phi_proposals", d.phi_proposals},
              {"phi_accepts", d.phi_accepts},
              {"stick_clamps", d.stick_clamps},
              {"last_stick_mass", d.last_stick_mass}};
}

}  // namespace

std::string snapshot_body_bytes(const PosteriorDraws& draws) {
  return body_json(draws).dump();
}

void save_snapshot(const PosteriorDraws& draws, const std::string& path) {
  if (draws.draws.empty()) throw InvalidInput("no draws to serialize");
  json doc{{"header",
            {{"magic", "spclust-snapshot"},
             {"format_version", 1},
             {"rng", RngStream::kAlgorithm},
             {"seed", draws.config.seed},
             {"scheme", scheme_to_string(draws.config.scheme)},
             {"elapsed_seconds", draws.elapsed_seconds}}},
           {"body", body_json(draws)}};
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  out << doc.dump();
  if (!out) throw IoError("write failed: " + path);
}

PosteriorDraws load_snapshot(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw FormatError("corrupt snapshot " + path + ": " + e.what());
  }
  if (!doc.contains("header") ||
      doc["header"].value("magic", "") != "spclust-snapshot") {
    throw FormatError("not a snapshot file: " + path);
  }
  if (doc["header"].value("format_version", -1) != 1) {
    throw FormatError("unsupported snapshot version in " + path);
  }
  const json& b = doc["body"];
  PosteriorDraws d;
  d.config = config_from_json(b["config"]);
  d.loglik = mat_from_json(b["loglik"]);
  d.phi_proposals = b["phi_proposals"].get<int>();
  d.phi_accepts = b["phi_accepts"].get<int>();
  d.stick_clamps = b["stick_clamps"].get<int>();
  d.last_stick_mass = b["last_stick_mass"].get<double>();
  d.elapsed_seconds = doc["header"].value("elapsed_seconds", 0.0);
  for (const json& jd : b["draws"]) {
    Draw dr;
    dr.z = ivec_from_json(jd["z"]);
    dr.beta_table = mat_from_json(jd["beta_table"]);
    dr.w = vec_from_json(jd["w"]);
    dr.mu_b = vec_from_json(jd["mu_b"]);
    dr.alpha = jd["alpha"].get<double>();
    dr.tau_y = jd["tau_y"].get<double>();
    dr.tau_w = jd["tau_w"].get<double>();
    dr.tau_b = jd["tau_b"].get<double>();
    dr.phi = jd["phi"].get<double>();
    d.draws.push_back(std::move(dr));
  }
  return d;
}

}  // namespace spclust
