// Command-line driver: solve, simulate, saa, evss, validate-topology.
// Exit codes: 0 success, 2 a solve stopped at the time limit, 1 error.

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "srwa/config.hpp"
#include "srwa/error.hpp"
#include "srwa/saa.hpp"
#include "srwa/sim.hpp"
#include "srwa/stats.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace srwa;

namespace {

constexpr int kOk = 0;
constexpr int kError = 1;
constexpr int kTimeLimit = 2;

struct Common {
  std::string config_path;
  std::vector<std::string> overrides;
  int threads = 0;
  bool force = false;
  std::string output;
};

struct Run {
  ExperimentConfig config;
  std::shared_ptr<const Topology> topology;
  fs::path out;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("config", c.config_path, "JSON experiment config")->required();
  cmd->add_option("--set", c.overrides, "override a config key, e.g. --set solver.time_limit_s=60");
  cmd->add_option("--threads", c.threads, "worker threads (1: serial reference run)")->check(CLI::PositiveNumber);
  cmd->add_option("-o,--output", c.output, "output directory (overrides output_dir)");
  cmd->add_flag("--force", c.force, "write into a nonempty output directory");
}

Run prepare(const Common& c) {
  std::vector<std::string> overrides = c.overrides;
  if (c.threads > 0) overrides.push_back("threads=" + std::to_string(c.threads));
  if (!c.output.empty()) overrides.push_back("output_dir=\"" + c.output + "\"");
  Run run{load_config(c.config_path, overrides), nullptr, {}};
  const fs::path config_dir = fs::absolute(c.config_path).parent_path();
  std::string file = run.config.topology.file;
  if (!fs::path(file).is_absolute() && fs::exists(config_dir / file)) file = (config_dir / file).string();
  run.config.topology.file = resolve_data_path(file, SRWA_DATA_DIR_DEFAULT);
  run.topology = std::make_shared<const Topology>(
      load_topology_file(run.config.topology.file, run.config.topology.wavelengths));

  run.out = run.config.output_dir;
  if (fs::exists(run.out) && !fs::is_empty(run.out) && !c.force) {
    throw ConfigError("output directory '" + run.out.string() + "' is not empty (use --force)");
  }
  fs::create_directories(run.out);
  std::ofstream(run.out / "resolved_config.json") << run.config.to_json().dump(2) << '\n';
  std::ofstream(run.out / "VERSION") << "srwa " << SRWA_VERSION << '\n';
  return run;
}

FormulationSpec base_spec(const Run& run) {
  const auto& p = run.config.problem;
  return FormulationSpec{p.type, p.relaxation, NetworkState(run.topology), p.demand, p.current, {}};
}

ScenarioSample problem_scenarios(const Run& run) {
  const auto& p = run.config.problem;
  if (!p.scenario_file.empty()) {
    std::ifstream in(p.scenario_file);
    if (!in) throw ConfigError("cannot open scenario file '" + p.scenario_file + "'");
    return scenario_sample_from_json(json::parse(in));
  }
  return sample_scenarios(run.config.traffic, *run.topology, std::max(1, p.scenario_count),
                          derive_seed(run.config.seed, {stream_label("solve")}));
}

json lightpath_json(const Topology& t, const Lightpath& lp) {
  json nodes = json::array({lp.source});
  for (ArcId a : lp.path) nodes.push_back(t.arc(a).head);
  return {{"source", lp.source}, {"destination", lp.destination}, {"wavelength", lp.wavelength},
          {"arcs", lp.path}, {"nodes", nodes}};
}

int cmd_solve(const Common& c) {
  const Run run = prepare(c);
  FormulationSpec spec = base_spec(run);
  const bool stochastic = spec.problem == Problem::kSmaxRwa || spec.problem == Problem::kSmaxLr;
  if (stochastic && run.config.problem.scenario_count > 0) spec.scenarios = problem_scenarios(run);
  std::ofstream(run.out / "scenarios.json") << to_json(spec.scenarios).dump() << '\n';

  const SolveResult r = solve(spec, run.config.benders, run.config.solver);
  json provisioning = json::array();
  for (const auto& lp : r.first_stage) provisioning.push_back(lightpath_json(*run.topology, lp));
  json out = {{"status", to_string(r.status)},
              {"objective", r.objective},
              {"bound", r.bound},
              {"first_stage_value", r.first_stage_value},
              {"eta", r.eta},
              {"nodes", r.nodes},
              {"stats", r.stats()},
              {"provisioning", provisioning}};
  std::ofstream(run.out / "result.json") << out.dump(2) << '\n';
  std::cout << "status " << to_string(r.status) << "  objective " << r.objective << "  time " << r.seconds
            << " s  x-cuts " << r.n_x_cuts << "  beta-cuts " << r.n_beta_cuts << '\n';
  if (r.status == MipStatus::kOptimal) return kOk;
  if (r.status == MipStatus::kTimeLimit) return kTimeLimit;
  return kError;
}

int cmd_simulate(const Common& c) {
  const Run run = prepare(c);
  std::vector<std::vector<SimTrace>> all;
  json summary = json::object();
  for (Policy p : run.config.simulation.policies) {
    all.push_back(run_simulation(run.topology, run.config.sim_config(p)));
    std::ofstream csv(run.out / ("traces_" + to_string(p) + ".csv"));
    write_trace_csv(csv, all.back());
    int fallbacks = 0;
    double granted = 0.0;
    for (const auto& t : all.back()) {
      fallbacks += t.fallbacks;
      granted += t.stages.back().cumulative_granted;
    }
    summary[to_string(p)] = {{"fallbacks", fallbacks}, {"mean_cumulative_granted", granted / all.back().size()}};
    std::cout << to_string(p) << ": mean cumulative granted " << granted / all.back().size() << ", fallbacks "
              << fallbacks << '\n';
  }
  if (all.size() == 2) {
    std::ofstream csv(run.out / "compare.csv");
    write_compare_csv(csv, compare(all[0], all[1]));
    int wins = 0, losses = 0;
    for (std::size_t r = 0; r < all[0].size(); ++r) {
      const int a = all[0][r].stages.back().cumulative_granted;
      const int b = all[1][r].stages.back().cumulative_granted;
      wins += a > b;
      losses += a < b;
    }
    summary["sign_test"] = {{"a", to_string(run.config.simulation.policies[0])},
                            {"b", to_string(run.config.simulation.policies[1])},
                            {"wins", wins},
                            {"losses", losses},
                            {"p_a_grants_more", sign_test_p(wins, losses)}};
  }
  summary["seed"] = run.config.seed;
  std::ofstream(run.out / "summary.json") << summary.dump(2) << '\n';
  return kOk;
}

int cmd_saa(const Common& c) {
  const Run run = prepare(c);
  const FormulationSpec spec = base_spec(run);
  std::vector<SaaReport> reports;
  bool timed_out = false;
  for (int level : run.config.saa.levels) {
    reports.push_back(saa_analysis(spec, run.config.traffic, run.config.saa_config(level), run.config.benders,
                                   run.config.solver));
    const SaaReport& r = reports.back();
    timed_out = timed_out || !r.timed_out.empty();
    std::cout << "level " << level << "  UB " << r.ub_mean << " +- " << r.ub_width << "  LB " << r.lb_mean
              << " +- " << r.lb_width << "  gap " << r.gap_pct << " %\n";
  }
  std::ofstream csv(run.out / "saa.csv");
  write_saa_csv(csv, reports);
  return timed_out ? kTimeLimit : kOk;
}

int cmd_evss(const Common& c) {
  const Run run = prepare(c);
  const auto& cfg = run.config;
  FormulationSpec spec = base_spec(run);
  spec.scenarios = sample_scenarios(cfg.traffic, *run.topology, cfg.evss.scenario_count,
                                    derive_seed(cfg.seed, {stream_label("evss")}));
  std::vector<std::pair<std::string, EvssReport>> rows;
  if (cfg.evss.initial_requests.empty()) {
    rows.emplace_back("base", evss(spec, cfg.benders, cfg.solver, reference_backend(), cfg.threads));
  } else {
    if (!spec.rerouting()) throw ConfigError("evss.initial_requests applies to minRWA/SmaxLR problems");
    for (std::size_t i = 0; i < cfg.evss.initial_requests.size(); ++i) {
      const int n = cfg.evss.initial_requests[i];
      const NetworkState initial = random_initial_state(run.topology, cfg.traffic, n, cfg.seed, static_cast<int>(i));
      spec.current_demand = DemandMatrix{};
      for (const auto& conn : initial.connections()) {
        spec.current_demand.add(conn.lightpath.source, conn.lightpath.destination);
      }
      rows.emplace_back("initial=" + std::to_string(n),
                        evss(spec, cfg.benders, cfg.solver, reference_backend(), cfg.threads));
    }
  }
  for (const auto& [label, r] : rows) {
    std::cout << label << "  EVSS " << r.evss << "  sigma_det " << r.sigma_det << '\n';
  }
  std::ofstream csv(run.out / "evss.csv");
  write_evss_csv(csv, rows);
  return kOk;
}

int cmd_validate_topology(const std::string& file, int wavelengths) {
  const Topology t = load_topology_file(resolve_data_path(file, SRWA_DATA_DIR_DEFAULT), wavelengths);
  int min_deg = t.num_arcs(), max_deg = 0;
  for (NodeId v = 0; v < t.num_nodes(); ++v) {
    const int deg = static_cast<int>(t.delta_out(v).size());
    min_deg = std::min(min_deg, deg);
    max_deg = std::max(max_deg, deg);
  }
  // Reachability from node 0 over directed arcs (fibers are bidirectional).
  std::vector<char> seen(t.num_nodes(), 0);
  std::vector<NodeId> stack{0};
  seen[0] = 1;
  while (!stack.empty()) {
    const NodeId v = stack.back();
    stack.pop_back();
    for (ArcId a : t.delta_out(v)) {
      if (!seen[t.arc(a).head]) {
        seen[t.arc(a).head] = 1;
        stack.push_back(t.arc(a).head);
      }
    }
  }
  const bool connected = std::all_of(seen.begin(), seen.end(), [](char s) { return s != 0; });
  const json out = {{"nodes", t.num_nodes()},  {"fibers", t.fibers().size()}, {"arcs", t.num_arcs()},
                    {"min_degree", min_deg},   {"max_degree", max_deg},       {"connected", connected},
                    {"wavelengths", wavelengths}};
  std::cout << out.dump(2) << '\n';
  return connected ? kOk : kError;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stochastic routing and wavelength assignment"};
  app.set_version_flag("--version", std::string("srwa ") + SRWA_VERSION);
  app.require_subcommand(1);

  Common solve_opts, sim_opts, saa_opts, evss_opts;
  add_common(app.add_subcommand("solve", "solve one RWA or rerouting problem"), solve_opts);
  add_common(app.add_subcommand("simulate", "rolling-horizon simulation of one or two policies"), sim_opts);
  add_common(app.add_subcommand("saa", "SAA upper/lower bound analysis"), saa_opts);
  add_common(app.add_subcommand("evss", "expected value of the stochastic solution"), evss_opts);
  auto* validate = app.add_subcommand("validate-topology", "parse an edge list and report its shape");
  std::string topo_file;
  int wavelengths = 1;
  validate->add_option("file", topo_file, "edge-list file")->required();
  validate->add_option("--wavelengths", wavelengths, "wavelengths per fiber")->check(CLI::PositiveNumber);

  CLI11_PARSE(app, argc, argv);
  try {
    if (app.got_subcommand("solve")) return cmd_solve(solve_opts);
    if (app.got_subcommand("simulate")) return cmd_simulate(sim_opts);
    if (app.got_subcommand("saa")) return cmd_saa(saa_opts);
    if (app.got_subcommand("evss")) return cmd_evss(evss_opts);
    if (app.got_subcommand("validate-topology")) return cmd_validate_topology(topo_file, wavelengths);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kError;
  }
  return kError;
}
