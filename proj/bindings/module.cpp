#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "spclust/assess.hpp"
#include "spclust/baseline.hpp"
#include "spclust/chain.hpp"
#include "spclust/errors.hpp"
#include "spclust/posterior.hpp"
#include "spclust/simgen.hpp"

namespace py = pybind11;
using namespace spclust;

namespace {

struct FitResult {
  int k = 0;
  int selected = 0;
  Eigen::VectorXi labels;       // 0-based final partition
  Eigen::MatrixXd b_bar;        // co-clustering probabilities
  std::vector<int> cluster_sizes;
  Eigen::MatrixXd cluster_mean, cluster_hpd_lo, cluster_hpd_hi;
  Eigen::MatrixXd location_mean, location_hpd_lo, location_hpd_hi;
  Eigen::VectorXd cpo;
  double lpml = 0.0;
  double lpml_jackknife_se = 0.0;
  double p_d = 0.0;
  double phi_acceptance = 0.0;
  int draws = 0;
  Eigen::VectorXd alpha_trace, tau_y_trace, phi_trace;
};

Dataset make_dataset(const Eigen::VectorXd& y, const Eigen::MatrixXd& x,
                     const Eigen::VectorXd& lon, const Eigen::VectorXd& lat) {
  Dataset d;
  d.y = y;
  d.x = x;
  d.coords.lon = lon;
  d.coords.lat = lat;
  d.validate();
  return d;
}

FitResult fit(const Dataset& data, const ModelConfig& config) {
  RngStream rng(config.seed);
  PosteriorDraws draws = run_chain(config, data, rng);
  DahlResult dahl = dahl_select(draws);
  ClusterSummary cs = summarize_clusters(draws, dahl);
  LocationSummary loc = per_location_summary(draws);
  AssessmentReport rep = assess(draws, data, dahl);

  FitResult r;
  r.k = dahl.k;
  r.selected = dahl.selected;
  r.labels = dahl.z_star;
  r.b_bar = dahl.b_bar;
  r.cluster_sizes = cs.sizes;
  r.cluster_mean = cs.mean;
  r.cluster_hpd_lo = cs.hpd_lo;
  r.cluster_hpd_hi = cs.hpd_hi;
  r.location_mean = loc.mean;
  r.location_hpd_lo = loc.hpd_lo;
  r.location_hpd_hi = loc.hpd_hi;
  r.cpo = rep.cpo;
  r.lpml = rep.lpml;
  r.lpml_jackknife_se = rep.lpml_jackknife_se;
  r.p_d = rep.p_d;
  r.phi_acceptance =
      draws.phi_proposals
          ? static_cast<double>(draws.phi_accepts) / draws.phi_proposals
          : 0.0;
  r.draws = draws.size();
  r.alpha_trace.resize(draws.size());
  r.tau_y_trace.resize(draws.size());
  r.phi_trace.resize(draws.size());
  for (int t = 0; t < draws.size(); ++t) {
    r.alpha_trace(t) = draws.draws[t].alpha;
    r.tau_y_trace(t) = draws.draws[t].tau_y;
    r.phi_trace(t) = draws.draws[t].phi;
  }
  return r;
}

py::dict baseline(const Dataset& data, const ModelConfig& config) {
  RngStream rng(config.seed);
  BaselineResult r = fit_baseline(config, data, rng);
  py::dict out;
  out["lpml"] = r.lpml;
  out["p_d"] = r.p_d;
  out["d_bar"] = r.d_bar;
  out["d_at_mean"] = r.d_at_mean;
  out["beta_mean"] = r.beta_mean;
  out["cpo"] = r.cpo;
  return out;
}

py::dict simulate(const std::string& scenario, int setting, std::uint64_t seed,
                  double phi_true, double gp_sd, double noise_sd) {
  ScenarioSpec spec;
  spec.scenario = scenario_from_string(scenario);
  spec.setting = setting;
  spec.phi_true = phi_true;
  spec.gp_sd = gp_sd;
  spec.noise_sd = noise_sd;
  RngStream rng(seed);
  GeneratedData g = generate_dataset(spec, rng);
  py::dict out;
  out["y"] = g.data.y;
  out["x"] = g.data.x;
  out["lon"] = g.data.coords.lon;
  out["lat"] = g.data.coords.lat;
  out["true_beta"] = g.true_beta;
  out["true_z"] = g.true_z;
  return out;
}

}  // namespace

PYBIND11_MODULE(_spclust, m) {
  m.doc() = "Bayesian clustered-coefficient spatial regression";

  py::register_exception<Error>(m, "SpclustError");

  py::class_<ModelConfig>(m, "ModelConfig")
      .def(py::init<>())
      .def_readwrite("truncation", &ModelConfig::truncation)
      .def_readwrite("bandwidth_max", &ModelConfig::bandwidth_max)
      .def_readwrite("distance_cap", &ModelConfig::distance_cap)
      .def_readwrite("n_iter", &ModelConfig::n_iter)
      .def_readwrite("thin", &ModelConfig::thin)
      .def_readwrite("burn_in", &ModelConfig::burn_in)
      .def_readwrite("seed", &ModelConfig::seed)
      .def_readwrite("phi_proposal_scale", &ModelConfig::phi_proposal_scale)
      .def_property(
          "scheme",
          [](const ModelConfig& c) { return scheme_to_string(c.scheme); },
          [](ModelConfig& c, const std::string& s) {
            c.scheme = scheme_from_string(s);
          })
      .def_property_readonly("stored_draws", &ModelConfig::stored_draws);

  py::class_<Dataset>(m, "Dataset")
      .def(py::init(&make_dataset), py::arg("y"), py::arg("x"), py::arg("lon"),
           py::arg("lat"))
      .def_property_readonly("n", &Dataset::n)
      .def_property_readonly("p", &Dataset::p)
      .def_readonly("y", &Dataset::y)
      .def_readonly("x", &Dataset::x)
      .def_property_readonly("lon",
                             [](const Dataset& d) { return d.coords.lon; })
      .def_property_readonly("lat",
                             [](const Dataset& d) { return d.coords.lat; });

  py::class_<FitResult>(m, "FitResult")
      .def_readonly("k", &FitResult::k)
      .def_readonly("selected", &FitResult::selected)
      .def_readonly("labels", &FitResult::labels)
      .def_readonly("b_bar", &FitResult::b_bar)
      .def_readonly("cluster_sizes", &FitResult::cluster_sizes)
      .def_readonly("cluster_mean", &FitResult::cluster_mean)
      .def_readonly("cluster_hpd_lo", &FitResult::cluster_hpd_lo)
      .def_readonly("cluster_hpd_hi", &FitResult::cluster_hpd_hi)
      .def_readonly("location_mean", &FitResult::location_mean)
      .def_readonly("location_hpd_lo", &FitResult::location_hpd_lo)
      .def_readonly("location_hpd_hi", &FitResult::location_hpd_hi)
      .def_readonly("cpo", &FitResult::cpo)
      .def_readonly("lpml", &FitResult::lpml)
      .def_readonly("lpml_jackknife_se", &FitResult::lpml_jackknife_se)
      .def_readonly("p_d", &FitResult::p_d)
      .def_readonly("phi_acceptance", &FitResult::phi_acceptance)
      .def_readonly("draws", &FitResult::draws)
      .def_readonly("alpha_trace", &FitResult::alpha_trace)
      .def_readonly("tau_y_trace", &FitResult::tau_y_trace)
      .def_readonly("phi_trace", &FitResult::phi_trace);

  m.def("load_csv", &load_csv, py::arg("path"));
  m.def("standardize",
        [](Dataset& d) {
          Standardization s = standardize(d);
          py::dict out;
          out["y_mean"] = s.y_mean;
          out["y_sd"] = s.y_sd;
          out["x_mean"] = s.x_mean;
          out["x_sd"] = s.x_sd;
          return out;
        },
        py::arg("dataset"));
  m.def("fit", &fit, py::arg("dataset"), py::arg("config"),
        py::call_guard<py::gil_scoped_release>());
  m.def("fit_baseline", &baseline, py::arg("dataset"), py::arg("config"));
  m.def("simulate", &simulate, py::arg("scenario"), py::arg("setting") = 1,
        py::arg("seed") = 1, py::arg("phi_true") = 4.0, py::arg("gp_sd") = 1.0,
        py::arg("noise_sd") = 1.0);
  m.def("rand_index", &rand_index, py::arg("z1"), py::arg("z2"));
  m.def("great_circle_distance", &great_circle_distance, py::arg("lon1"),
        py::arg("lat1"), py::arg("lon2"), py::arg("lat2"),
        py::arg("radius") = kEarthRadius);
  m.def("build_distance_matrix",
        [](const Eigen::VectorXd& lon, const Eigen::VectorXd& lat,
           double cap) {
          Coordinates c;
          c.lon = lon;
          c.lat = lat;
          return build_distance_matrix(c, cap);
        },
        py::arg("lon"), py::arg("lat"), py::arg("cap") = 10.0);
}
