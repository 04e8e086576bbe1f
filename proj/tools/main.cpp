#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "spclust/assess.hpp"
#include "spclust/baseline.hpp"
#include "spclust/chain.hpp"
#include "spclust/errors.hpp"
#include "spclust/json_io.hpp"
#include "spclust/posterior.hpp"
#include "spclust/simgen.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace spclust;

namespace {

// Exit codes: 2 ingestion/config, 3 numerical, 4 I/O or format, 1 other.
constexpr int kExitIngestion = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitIo = 4;

struct CommonOpts {
  std::string config_path;
  std::string out_dir = ".";
  std::optional<std::uint64_t> seed;
  std::optional<std::string> scheme;
  std::optional<int> iters, thin, burnin, truncation;
  std::optional<double> bandwidth_max, distance_cap;

  void attach(CLI::App* cmd) {
    cmd->add_option("--config", config_path, "JSON config file");
    cmd->add_option("--out", out_dir, "output directory");
    cmd->add_option("--seed", seed, "RNG seed");
    cmd->add_option("--scheme", scheme, "unity|exponential|gaussian");
    cmd->add_option("--iters", iters, "MCMC sweeps");
    cmd->add_option("--thin", thin, "thinning interval");
    cmd->add_option("--burnin", burnin, "burn-in, in thinned draws");
    cmd->add_option("--truncation", truncation, "stick-breaking truncation M");
    cmd->add_option("--bandwidth-max", bandwidth_max,
                    "upper bound D of the uniform phi prior");
    cmd->add_option("--distance-cap", distance_cap,
                    "normalized distance maximum");
  }

  ModelConfig resolve() const {
    ModelConfig c;
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) throw IoError("cannot open config " + config_path);
      json j;
      try {
        in >> j;
      } catch (const json::exception& e) {
        throw FormatError("bad config JSON: " + std::string(e.what()));
      }
      c = config_from_json(j);
    }
    if (seed) c.seed = *seed;
    if (scheme) c.scheme = scheme_from_string(*scheme);
    if (iters) c.n_iter = *iters;
    if (thin) c.thin = *thin;
    if (burnin) c.burn_in = *burnin;
    if (truncation) c.truncation = *truncation;
    if (bandwidth_max) c.bandwidth_max = *bandwidth_max;
    if (distance_cap) c.distance_cap = *distance_cap;
    return c;
  }
};

void write_json(const fs::path& path, const json& j, int indent = 2) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << j.dump(indent) << '\n';
  if (!out) throw IoError("write failed: " + path.string());
}

json standardization_json(const Standardization& s) {
  return json{{"y_mean", s.y_mean},
              {"y_sd", s.y_sd},
              {"x_mean", vec_to_json(s.x_mean)},
              {"x_sd", vec_to_json(s.x_sd)}};
}

json cluster_summary_json(const ClusterSummary& cs) {
  json clusters = json::array();
  for (std::size_t c = 0; c < cs.sizes.size(); ++c) {
    json coeffs = json::array();
    for (Eigen::Index j = 0; j < cs.mean.cols(); ++j) {
      coeffs.push_back(json{{"mean", cs.mean(c, j)},
                            {"hpd_lo", cs.hpd_lo(c, j)},
                            {"hpd_hi", cs.hpd_hi(c, j)}});
    }
    clusters.push_back(json{{"size", cs.sizes[c]}, {"coefficients", coeffs}});
  }
  return clusters;
}

void write_labels_csv(const fs::path& path, const DahlResult& dahl,
                      const std::vector<std::string>& names) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << "location,cluster\n";
  for (Eigen::Index i = 0; i < dahl.z_star.size(); ++i) {
    if (!names.empty()) out << names[i];
    else out << (i + 1);
    out << ',' << (dahl.z_star(i) + 1) << '\n';
  }
}

void write_cluster_table(std::ostream& out, const ClusterSummary& cs) {
  out << std::fixed << std::setprecision(3);
  out << "cluster   size";
  for (Eigen::Index j = 0; j < cs.mean.cols(); ++j) {
    out << "  beta" << (j + 1) << " (95% HPD)       ";
  }
  out << '\n';
  for (std::size_t c = 0; c < cs.sizes.size(); ++c) {
    out << std::setw(7) << (c + 1) << std::setw(7) << cs.sizes[c];
    for (Eigen::Index j = 0; j < cs.mean.cols(); ++j) {
      std::ostringstream cell;
      cell << std::fixed << std::setprecision(3) << cs.mean(c, j) << " ("
           << cs.hpd_lo(c, j) << ", " << cs.hpd_hi(c, j) << ")";
      out << "  " << std::setw(24) << std::left << cell.str() << std::right;
    }
    out << '\n';
  }
}

int cmd_fit(const CommonOpts& opts, const std::string& data_path,
            bool raw_scale, bool compare_schemes,
            const std::string& summary_mode, bool export_distances) {
  ModelConfig config = opts.resolve();
  Dataset data = load_csv(data_path);
  fs::create_directories(opts.out_dir);

  std::optional<Standardization> std_stats;
  if (!raw_scale) std_stats = standardize(data);

  write_json(fs::path(opts.out_dir) / "resolved_config.json", to_json(config));

  if (export_distances) {
    write_matrix_csv(
        (fs::path(opts.out_dir) / "distance_matrix.csv").string(),
        build_distance_matrix(data.coords, config.distance_cap));
  }

  auto run_one = [&](Scheme s) {
    ModelConfig c = config;
    c.scheme = s;
    RngStream rng(c.seed);
    return run_chain(c, data, rng);
  };

  if (compare_schemes) {
    json table = json::object();
    std::ostringstream txt;
    txt << "scheme        LPML\n";
    for (Scheme s :
         {Scheme::Unity, Scheme::Exponential, Scheme::Gaussian}) {
      PosteriorDraws d = run_one(s);
      auto [cpo, lpml] = compute_cpo_lpml(d.loglik);
      table[scheme_to_string(s)] = lpml;
      txt << std::left << std::setw(12) << scheme_to_string(s) << "  "
          << std::fixed << std::setprecision(3) << lpml << '\n';
    }
    write_json(fs::path(opts.out_dir) / "lpml_comparison.json", table);
    std::ofstream(fs::path(opts.out_dir) / "lpml_comparison.txt") << txt.str();
    std::cout << txt.str();
    return 0;
  }

  PosteriorDraws draws = run_one(config.scheme);
  save_snapshot(draws, (fs::path(opts.out_dir) / "snapshot.json").string());

  DahlResult dahl = dahl_select(draws);
  SummaryMode mode = summary_mode == "selected" ? SummaryMode::SelectedDraw
                                                : SummaryMode::Pooled;
  ClusterSummary cs = summarize_clusters(draws, dahl, mode);
  AssessmentReport report = assess(draws, data, dahl);

  json summary{
      {"k", dahl.k},
      {"selected_draw", dahl.selected},
      {"clusters", cluster_summary_json(cs)},
      {"lpml", report.lpml},
      {"lpml_jackknife_se", report.lpml_jackknife_se},
      {"p_d", report.p_d},
      {"d_bar", report.d_bar},
      {"d_at_mean", report.d_at_mean},
      {"cpo", vec_to_json(report.cpo)},
      {"phi_acceptance",
       draws.phi_proposals
           ? static_cast<double>(draws.phi_accepts) / draws.phi_proposals
           : 0.0},
      {"last_stick_mass", draws.last_stick_mass},
      {"elapsed_seconds", draws.elapsed_seconds}};
  if (std_stats) summary["standardization"] = standardization_json(*std_stats);
  write_json(fs::path(opts.out_dir) / "summary.json", summary);
  write_labels_csv(fs::path(opts.out_dir) / "labels.csv", dahl, data.names);

  std::cout << "k = " << dahl.k << ", LPML = " << report.lpml
            << ", p_D = " << report.p_d << '\n';
  write_cluster_table(std::cout, cs);
  return 0;
}

int cmd_fit_baseline(const CommonOpts& opts, const std::string& data_path,
                     bool raw_scale) {
  ModelConfig config = opts.resolve();
  Dataset data = load_csv(data_path);
  fs::create_directories(opts.out_dir);
  std::optional<Standardization> std_stats;
  if (!raw_scale) std_stats = standardize(data);

  write_json(fs::path(opts.out_dir) / "resolved_config.json", to_json(config));
  RngStream rng(config.seed);
  BaselineResult res = fit_baseline(config, data, rng);

  json out{{"lpml", res.lpml},
           {"p_d", res.p_d},
           {"d_bar", res.d_bar},
           {"d_at_mean", res.d_at_mean},
           {"beta_mean", vec_to_json(res.beta_mean)},
           {"cpo", vec_to_json(res.cpo)}};
  if (std_stats) out["standardization"] = standardization_json(*std_stats);
  write_json(fs::path(opts.out_dir) / "baseline.json", out);
  std::cout << "baseline LPML = " << res.lpml << ", p_D = " << res.p_d << '\n';
  return 0;
}

int cmd_replicate_study(const CommonOpts& opts,
                        const std::string& scenario_path, int threads) {
  std::ifstream in(scenario_path);
  if (!in) throw IoError("cannot open " + scenario_path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw FormatError("bad scenario JSON: " + std::string(e.what()));
  }

  ScenarioSpec spec;
  if (j.contains("scenario"))
    spec.scenario = scenario_from_string(j["scenario"].get<std::string>());
  if (j.contains("setting")) spec.setting = j["setting"].get<int>();
  if (j.contains("replicates")) spec.replicates = j["replicates"].get<int>();
  if (j.contains("seed")) spec.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("phi_true")) spec.phi_true = j["phi_true"].get<double>();
  if (j.contains("gp_sd")) spec.gp_sd = j["gp_sd"].get<double>();
  if (j.contains("noise_sd")) spec.noise_sd = j["noise_sd"].get<double>();
  if (j.contains("coords_csv")) {
    Dataset tmp;  // reuse the coordinate columns of a CSV with lon, lat
    std::ifstream cin(j["coords_csv"].get<std::string>());
    if (!cin) throw IoError("cannot open coords_csv");
    std::string line;
    std::getline(cin, line);
    std::vector<double> lons, lats;
    while (std::getline(cin, line)) {
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      std::stringstream ss(line);
      std::string a, b;
      std::getline(ss, a, ',');
      std::getline(ss, b, ',');
      lons.push_back(std::stod(a));
      lats.push_back(std::stod(b));
    }
    spec.coords.lon =
        Eigen::Map<Eigen::VectorXd>(lons.data(), lons.size());
    spec.coords.lat =
        Eigen::Map<Eigen::VectorXd>(lats.data(), lats.size());
  }

  ModelConfig fit_config = opts.resolve();
  if (j.contains("fit")) {
    fit_config = config_from_json(j["fit"]);
  }

  fs::create_directories(opts.out_dir);
  write_json(fs::path(opts.out_dir) / "resolved_config.json",
             to_json(fit_config));

  StudyResult res = run_replicate_study(spec, fit_config, threads);
  const ReplicateMetrics& m = res.metrics;

  std::ostringstream txt;
  txt << "scenario=" << scenario_to_string(spec.scenario)
      << " setting=" << spec.setting << " R=" << spec.replicates << '\n';
  txt << std::fixed << std::setprecision(3);
  txt << "         MAB     MSD     MMSE    MCR     RI\n";
  for (Eigen::Index jx = 0; jx < m.mab.size(); ++jx) {
    txt << "beta" << (jx + 1) << "  " << std::setw(6) << m.mab(jx) << "  "
        << std::setw(6) << m.msd(jx) << "  " << std::setw(6) << m.mmse(jx)
        << "  " << std::setw(6) << m.mcr(jx) << "  ";
    if (jx == 0) txt << std::setw(6) << m.mean_ri;
    txt << '\n';
  }
  std::ofstream(fs::path(opts.out_dir) / "study_report.txt") << txt.str();
  std::cout << txt.str();

  json out{{"scenario", scenario_to_string(spec.scenario)},
           {"setting", spec.setting},
           {"replicates", spec.replicates},
           {"failed", res.failed},
           {"mean_ri", m.mean_ri},
           {"rand_indices", res.rand_indices},
           {"mab", vec_to_json(m.mab)},
           {"msd", vec_to_json(m.msd)},
           {"mmse", vec_to_json(m.mmse)},
           {"mcr", vec_to_json(m.mcr)},
           {"elapsed_seconds", res.elapsed_seconds}};
  write_json(fs::path(opts.out_dir) / "study_report.json", out);
  return 0;
}

int cmd_summarize(const CommonOpts& opts, const std::string& snapshot_path,
                  const std::string& summary_mode) {
  PosteriorDraws draws = load_snapshot(snapshot_path);
  fs::create_directories(opts.out_dir);

  DahlResult dahl = dahl_select(draws);
  SummaryMode mode = summary_mode == "selected" ? SummaryMode::SelectedDraw
                                                : SummaryMode::Pooled;
  ClusterSummary cs = summarize_clusters(draws, dahl, mode);
  write_labels_csv(fs::path(opts.out_dir) / "labels.csv", dahl, {});

  // Per-draw scalar traces for external plotting.
  {
    std::ofstream out(fs::path(opts.out_dir) / "trace_stats.csv");
    if (!out) throw IoError("cannot write trace_stats.csv");
    out << "draw,alpha,tau_y,tau_w,tau_b,phi,k_occupied,loglik\n";
    out.precision(17);
    for (int t = 0; t < draws.size(); ++t) {
      const Draw& d = draws.draws[t];
      std::vector<bool> seen(d.beta_table.rows(), false);
      int k = 0;
      for (Eigen::Index i = 0; i < d.z.size(); ++i) {
        if (!seen[d.z(i)]) {
          seen[d.z(i)] = true;
          ++k;
        }
      }
      out << (t + 1) << ',' << d.alpha << ',' << d.tau_y << ',' << d.tau_w
          << ',' << d.tau_b << ',' << d.phi << ',' << k << ','
          << draws.loglik.row(t).sum() << '\n';
    }
  }

  std::ofstream table(fs::path(opts.out_dir) / "cluster_table.txt");
  write_cluster_table(table, cs);
  json out{{"k", dahl.k},
           {"selected_draw", dahl.selected},
           {"clusters", cluster_summary_json(cs)}};
  write_json(fs::path(opts.out_dir) / "cluster_summary.json", out);
  write_cluster_table(std::cout, cs);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bayesian clustered-coefficient spatial regression"};
  app.require_subcommand(1);

  CommonOpts fit_opts, base_opts, study_opts, summ_opts;
  std::string data_path, scenario_path, snapshot_path;
  bool raw_scale = false, base_raw_scale = false;
  bool compare_schemes = false, export_distances = false;
  std::string summary_mode = "pooled", summ_summary_mode = "pooled";
  int threads = 0;

  CLI::App* fit = app.add_subcommand("fit", "fit the clustered spatial model");
  fit->add_option("data", data_path, "input CSV (y, x1..xp, lon, lat)")
      ->required();
  fit_opts.attach(fit);
  fit->add_flag("--raw-scale", raw_scale, "skip standardization of y and X");
  fit->add_flag("--compare-schemes", compare_schemes,
                "fit all three weighting schemes and report LPML only");
  fit->add_flag("--export-distances", export_distances,
                "also write the normalized distance matrix");
  fit->add_option("--summary-mode", summary_mode, "pooled|selected");

  CLI::App* base =
      app.add_subcommand("fit-baseline", "fit the vanilla regression");
  base->add_option("data", data_path, "input CSV")->required();
  base_opts.attach(base);
  base->add_flag("--raw-scale", base_raw_scale, "skip standardization");

  CLI::App* study =
      app.add_subcommand("replicate-study", "run a simulation study");
  study->add_option("scenario", scenario_path, "scenario JSON spec")
      ->required();
  study_opts.attach(study);
  study->add_option("--threads", threads, "worker threads (0 = auto)");

  CLI::App* summ = app.add_subcommand("summarize", "summarize a snapshot");
  summ->add_option("snapshot", snapshot_path, "snapshot JSON file")
      ->required();
  summ_opts.attach(summ);
  summ->add_option("--summary-mode", summ_summary_mode, "pooled|selected");

  CLI11_PARSE(app, argc, argv);

  try {
    if (fit->parsed()) {
      return cmd_fit(fit_opts, data_path, raw_scale, compare_schemes,
                     summary_mode, export_distances);
    }
    if (base->parsed()) {
      return cmd_fit_baseline(base_opts, data_path, base_raw_scale);
    }
    if (study->parsed()) {
      return cmd_replicate_study(study_opts, scenario_path, threads);
    }
    if (summ->parsed()) {
      return cmd_summarize(summ_opts, snapshot_path, summ_summary_mode);
    }
  } catch (const IngestionError& e) {
    std::cerr << "ingestion error: " << e.what() << '\n';
    return kExitIngestion;
  } catch (const InvalidInput& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return kExitIngestion;
  } catch (const InsufficientData& e) {
    std::cerr << "insufficient data: " << e.what() << '\n';
    return kExitIngestion;
  } catch (const NumericalDegeneracy& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const NotPositiveDefinite& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const IoError& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return kExitIo;
  } catch (const FormatError& e) {
    std::cerr << "format error: " << e.what() << '\n';
    return kExitIo;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
