// Python bindings: topologies, sampling, solve, EVSS, SAA and simulations.
// Demand matrices cross the boundary as {(s, d): count} dicts.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cmath>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "srwa/benders.hpp"
#include "srwa/error.hpp"
#include "srwa/saa.hpp"
#include "srwa/sim.hpp"
#include "srwa/stats.hpp"
#include "srwa/topology.hpp"
#include "srwa/traffic.hpp"

namespace py = pybind11;
using namespace srwa;

namespace {

using PyDemand = std::map<std::pair<int, int>, int>;
using TopologyPtr = std::shared_ptr<Topology>;

DemandMatrix to_demand(const PyDemand& d) {
  DemandMatrix m;
  for (const auto& [pair, count] : d) m.set(pair.first, pair.second, count);
  return m;
}

PyDemand from_demand(const DemandMatrix& m) { return PyDemand(m.counts().begin(), m.counts().end()); }

TrafficParams traffic_of(double lambda_r, double mean_holding) {
  TrafficParams t = TrafficParams::from_mean_holding(lambda_r, mean_holding);
  t.validate();
  return t;
}

FormulationSpec make_spec(const TopologyPtr& topo, const std::string& problem, const std::string& relaxation,
                          const PyDemand& demand, const PyDemand& current, const std::vector<PyDemand>& scenarios) {
  FormulationSpec spec{problem_from_string(problem), relaxation_from_string(relaxation), NetworkState(topo),
                       to_demand(demand), to_demand(current), {}};
  for (const auto& s : scenarios) spec.scenarios.scenarios.push_back(to_demand(s));
  return spec;
}

BendersConfig benders_of(const std::string& method) {
  BendersConfig b;
  b.method = method_from_string(method);
  return b;
}

SolverConfig solver_of(double time_limit_s) {
  SolverConfig s;
  s.time_limit_seconds = time_limit_s;
  s.validate();
  return s;
}

py::dict lightpath_dict(const Lightpath& lp) {
  py::dict d;
  d["source"] = lp.source;
  d["destination"] = lp.destination;
  d["wavelength"] = lp.wavelength;
  d["arcs"] = lp.path;
  return d;
}

py::dict solve_py(const TopologyPtr& topo, const std::string& problem, const PyDemand& demand,
                  const PyDemand& current, const std::vector<PyDemand>& scenarios, const std::string& relaxation,
                  const std::string& method, double time_limit_s) {
  const FormulationSpec spec = make_spec(topo, problem, relaxation, demand, current, scenarios);
  SolveResult r;
  {
    py::gil_scoped_release release;
    r = solve(spec, benders_of(method), solver_of(time_limit_s));
  }
  py::list provisioning;
  for (const auto& lp : r.first_stage) provisioning.append(lightpath_dict(lp));
  py::dict out;
  out["status"] = to_string(r.status);
  out["objective"] = r.objective;
  out["bound"] = r.bound;
  out["gap_pct"] = std::isfinite(r.gap) ? 100.0 * r.gap : -1.0;
  out["first_stage_value"] = r.first_stage_value;
  out["eta"] = r.eta;
  out["n_x_cuts"] = r.n_x_cuts;
  out["n_beta_cuts"] = r.n_beta_cuts;
  out["nodes"] = r.nodes;
  out["time_s"] = r.seconds;
  out["provisioning"] = provisioning;
  return out;
}

py::dict evss_py(const TopologyPtr& topo, const std::string& problem, const PyDemand& demand,
                 const PyDemand& current, const std::vector<PyDemand>& scenarios, const std::string& method) {
  const FormulationSpec spec = make_spec(topo, problem, "IP-LP", demand, current, scenarios);
  EvssReport r;
  {
    py::gil_scoped_release release;
    r = evss(spec, benders_of(method));
  }
  py::dict out;
  out["evss"] = r.evss;
  out["sigma_det"] = r.sigma_det;
  out["stochastic_objective"] = r.stochastic_objective;
  out["deterministic_mean"] = r.deterministic_mean;
  out["deterministic_values"] = r.deterministic_values;
  return out;
}

py::dict saa_py(const TopologyPtr& topo, const PyDemand& demand, double lambda_r, double mean_holding, int level,
                int repetitions, int eval_size, std::uint64_t seed, double confidence, bool exact_recourse) {
  const FormulationSpec spec = make_spec(topo, "SmaxRWA", exact_recourse ? "IP-IP" : "IP-LP", demand, {}, {});
  SaaConfig cfg;
  cfg.level = level;
  cfg.repetitions = repetitions;
  cfg.eval_size = eval_size;
  cfg.seed = seed;
  cfg.confidence = confidence;
  cfg.exact_recourse = exact_recourse;
  SaaReport r;
  {
    py::gil_scoped_release release;
    r = saa_analysis(spec, traffic_of(lambda_r, mean_holding), cfg);
  }
  py::dict out;
  out["level"] = r.level;
  out["repetitions"] = r.repetitions;
  out["ub_mean"] = r.ub_mean;
  out["ub_width"] = r.ub_width;
  out["lb_mean"] = r.lb_mean;
  out["lb_width"] = r.lb_width;
  out["gap_pct"] = r.gap_pct;
  out["ub_values"] = r.ub_values;
  out["lb_values"] = r.lb_values;
  out["timed_out"] = r.timed_out;
  return out;
}

std::vector<SimTrace> simulate_py(const TopologyPtr& topo, const std::string& policy, int horizon, int repetitions,
                                  double lambda_r, double mean_holding, int scenario_count, int initial_requests,
                                  std::uint64_t seed, int threads) {
  SimConfig cfg;
  cfg.policy = policy_from_string(policy);
  cfg.horizon = horizon;
  cfg.repetitions = repetitions;
  cfg.traffic = traffic_of(lambda_r, mean_holding);
  cfg.scenario_count = scenario_count;
  cfg.initial_requests = initial_requests;
  cfg.seed = seed;
  cfg.threads = threads;
  py::gil_scoped_release release;
  return run_simulation(topo, cfg);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Stochastic routing and wavelength assignment";
  m.attr("__version__") = SRWA_VERSION;

  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<ConflictError>(m, "ConflictError", PyExc_ValueError);
  py::register_exception<ModelError>(m, "ModelError", PyExc_ValueError);
  py::register_exception<SolverError>(m, "SolverError", PyExc_RuntimeError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

  py::class_<Topology, std::shared_ptr<Topology>>(m, "Topology")
      .def(py::init<int, const std::vector<std::pair<NodeId, NodeId>>&, int, std::string>(), py::arg("num_nodes"),
           py::arg("fibers"), py::arg("wavelengths") = 1, py::arg("name") = "")
      .def_static(
          "from_file",
          [](const std::string& path, int wavelengths) {
            return std::make_shared<Topology>(load_topology_file(path, wavelengths));
          },
          py::arg("path"), py::arg("wavelengths") = 1)
      .def_property_readonly("name", &Topology::name)
      .def_property_readonly("num_nodes", &Topology::num_nodes)
      .def_property_readonly("num_arcs", &Topology::num_arcs)
      .def_property_readonly("num_fibers", [](const Topology& t) { return t.fibers().size(); })
      .def_property_readonly("num_wavelengths", &Topology::num_wavelengths)
      .def_property_readonly("fibers", &Topology::fibers)
      .def("arc", [](const Topology& t, ArcId a) { return std::make_pair(t.arc(a).tail, t.arc(a).head); })
      .def("__repr__", [](const Topology& t) {
        return "<Topology " + t.name() + " nodes=" + std::to_string(t.num_nodes()) +
               " arcs=" + std::to_string(t.num_arcs()) + " wavelengths=" + std::to_string(t.num_wavelengths()) + ">";
      });

  m.def(
      "sample_scenarios",
      [](const TopologyPtr& topo, double lambda_r, double mean_holding, int count, std::uint64_t seed) {
        std::vector<PyDemand> out;
        for (const auto& s : sample_scenarios(traffic_of(lambda_r, mean_holding), *topo, count, seed).scenarios)
          out.push_back(from_demand(s));
        return out;
      },
      py::arg("topology"), py::arg("lambda_r"), py::arg("mean_holding"), py::arg("count"), py::arg("seed"),
      "Scenario demand matrices, reproducible from the seed.");

  m.def("solve", &solve_py, py::arg("topology"), py::arg("problem"), py::arg("demand") = PyDemand{},
        py::arg("current") = PyDemand{}, py::arg("scenarios") = std::vector<PyDemand>{},
        py::arg("relaxation") = "IP-LP", py::arg("method") = "BENDERS_xbeta", py::arg("time_limit_s") = 600.0,
        "Solve maxRWA, minRWA, SmaxRWA or SmaxLR on an empty network.");

  m.def("evss", &evss_py, py::arg("topology"), py::arg("problem"), py::arg("demand") = PyDemand{},
        py::arg("current") = PyDemand{}, py::arg("scenarios") = std::vector<PyDemand>{},
        py::arg("method") = "BENDERS_xbeta", "Expected value of the stochastic solution.");

  m.def("saa", &saa_py, py::arg("topology"), py::arg("demand"), py::arg("lambda_r"), py::arg("mean_holding"),
        py::arg("level"), py::arg("repetitions") = 10, py::arg("eval_size") = 1000, py::arg("seed") = 1,
        py::arg("confidence") = 0.95, py::arg("exact_recourse") = false, "SAA bounds for SmaxRWA at one sample size.");

  py::class_<StageRecord>(m, "StageRecord")
      .def_readonly("stage", &StageRecord::stage)
      .def_readonly("arrivals", &StageRecord::arrivals)
      .def_readonly("granted", &StageRecord::granted)
      .def_readonly("blocked", &StageRecord::blocked)
      .def_readonly("cumulative_arrivals", &StageRecord::cumulative_arrivals)
      .def_readonly("cumulative_granted", &StageRecord::cumulative_granted)
      .def_readonly("gos", &StageRecord::gos)
      .def_readonly("spectrum_usage", &StageRecord::spectrum_usage)
      .def_readonly("active_connections", &StageRecord::active_connections)
      .def_readonly("spectrum_before_defrag", &StageRecord::spectrum_before_defrag)
      .def_readonly("spectrum_after_defrag", &StageRecord::spectrum_after_defrag)
      .def_readonly("fallback", &StageRecord::fallback);

  py::class_<SimTrace>(m, "SimTrace")
      .def_property_readonly("policy", [](const SimTrace& t) { return to_string(t.policy); })
      .def_readonly("seed", &SimTrace::seed)
      .def_readonly("repetition", &SimTrace::repetition)
      .def_readonly("stages", &SimTrace::stages)
      .def_readonly("fallbacks", &SimTrace::fallbacks);

  m.def("simulate", &simulate_py, py::arg("topology"), py::arg("policy"), py::arg("horizon") = 52,
        py::arg("repetitions") = 50, py::arg("lambda_r") = 3.0, py::arg("mean_holding") = 13.0,
        py::arg("scenario_count") = 10, py::arg("initial_requests") = 0, py::arg("seed") = 1, py::arg("threads") = 1,
        "Rolling-horizon provisioning (maxRWA, SmaxRWA) or defrag (minRWA_defrag, SmaxLR_defrag) runs.");

  m.def(
      "compare",
      [](const std::vector<SimTrace>& a, const std::vector<SimTrace>& b) {
        py::list out;
        for (const CompareRow& r : compare(a, b)) {
          py::dict d;
          d["stage"] = r.stage;
          d["rel_granted_pct"] = r.rel_granted_pct;
          d["rel_granted_std"] = r.rel_granted_std;
          d["rel_gos_pct"] = r.rel_gos_pct;
          d["rel_gos_std"] = r.rel_gos_std;
          d["rel_spectrum_pct"] = r.rel_spectrum_pct;
          d["rel_spectrum_std"] = r.rel_spectrum_std;
          out.append(d);
        }
        return out;
      },
      py::arg("a"), py::arg("b"), "Per-stage relative difference of A over B, in percent.");

  m.def("sign_test_p", &sign_test_p, py::arg("wins"), py::arg("losses"),
        "One-sided sign-test p-value for at least `wins` successes.");
}
