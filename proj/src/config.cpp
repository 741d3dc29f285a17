#include "srwa/config.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>

#include "srwa/error.hpp"

namespace srwa {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

// Reads the members of one JSON object, then rejects whatever was not read.
class Section {
 public:
  Section(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError("'" + name() + "' must be an object");
  }

  template <class T>
  void get(const std::string& key, T& out) {
    seen_.insert(key);
    if (!j_.contains(key)) return;
    try {
      out = j_.at(key).get<T>();
    } catch (const json::exception&) {
      throw ConfigError("bad value for '" + qualified(key) + "'");
    }
  }

  template <class F>
  void get_with(const std::string& key, F&& parse) {
    seen_.insert(key);
    if (!j_.contains(key)) return;
    try {
      parse(j_.at(key));
    } catch (const json::exception&) {
      throw ConfigError("bad value for '" + qualified(key) + "'");
    } catch (const ParseError& e) {
      throw ConfigError("bad value for '" + qualified(key) + "': " + e.what());
    } catch (const ModelError& e) {
      throw ConfigError("bad value for '" + qualified(key) + "': " + e.what());
    }
  }

  bool has(const std::string& key) const { return j_.contains(key); }

  Section child(const std::string& key) {
    seen_.insert(key);
    static const json empty = json::object();
    return Section(j_.contains(key) ? j_.at(key) : empty, qualified(key));
  }

  void finish() const {
    for (const auto& [key, value] : j_.items()) {
      if (!seen_.count(key)) throw ConfigError("unknown key '" + qualified(key) + "'");
    }
  }

 private:
  std::string name() const { return path_.empty() ? "<root>" : path_; }
  std::string qualified(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

}  // namespace

ExperimentConfig ExperimentConfig::from_json(const json& j) {
  ExperimentConfig c;
  Section root(j, "");
  {
    Section s = root.child("topology");
    s.get("file", c.topology.file);
    s.get("wavelengths", c.topology.wavelengths);
    s.finish();
  }
  root.get("output_dir", c.output_dir);
  root.get("seed", c.seed);
  root.get("threads", c.threads);
  {
    Section s = root.child("problem");
    s.get_with("type", [&](const json& v) { c.problem.type = problem_from_string(v.get<std::string>()); });
    s.get_with("relaxation",
               [&](const json& v) { c.problem.relaxation = relaxation_from_string(v.get<std::string>()); });
    s.get_with("demand", [&](const json& v) { c.problem.demand = demand_from_json(v); });
    s.get_with("current", [&](const json& v) { c.problem.current = demand_from_json(v); });
    s.get("scenario_count", c.problem.scenario_count);
    s.get("scenario_file", c.problem.scenario_file);
    s.finish();
  }
  {
    Section s = root.child("traffic");
    s.get("lambda_r", c.traffic.lambda_r);
    if (s.has("mean_holding") && s.has("lambda_l")) {
      throw ConfigError("give either 'traffic.mean_holding' or 'traffic.lambda_l', not both");
    }
    s.get_with("mean_holding", [&](const json& v) { c.traffic.lambda_l = 1.0 / v.get<double>(); });
    s.get("lambda_l", c.traffic.lambda_l);
    s.finish();
  }
  {
    Section s = root.child("benders");
    s.get_with("method", [&](const json& v) { c.benders.method = method_from_string(v.get<std::string>()); });
    s.get("preprocess_lp_lp", c.benders.preprocess_lp_lp);
    s.get("separate_beta_at_fractional", c.benders.separate_beta_at_fractional);
    s.get("separate_x_cuts", c.benders.separate_x_cuts);
    s.get("tol_cut", c.benders.tol_cut);
    s.finish();
  }
  {
    Section s = root.child("solver");
    s.get("time_limit_s", c.solver.time_limit_seconds);
    s.get("tol_feas", c.solver.tol_feas);
    s.get("tol_int", c.solver.tol_int);
    s.get("tol_obj", c.solver.tol_obj);
    s.get("stall_threshold", c.solver.stall_threshold);
    s.get("max_iterations", c.solver.max_iterations);
    s.finish();
  }
  {
    Section s = root.child("simulation");
    s.get_with("policies", [&](const json& v) {
      c.simulation.policies.clear();
      for (const auto& p : v) c.simulation.policies.push_back(policy_from_string(p.get<std::string>()));
    });
    s.get("horizon", c.simulation.horizon);
    s.get("repetitions", c.simulation.repetitions);
    s.get("scenario_count", c.simulation.scenario_count);
    s.get("initial_requests", c.simulation.initial_requests);
    s.finish();
  }
  {
    Section s = root.child("saa");
    s.get("levels", c.saa.levels);
    s.get("repetitions", c.saa.repetitions);
    s.get("eval_size", c.saa.eval_size);
    s.get("confidence", c.saa.confidence);
    s.get("exact_recourse", c.saa.exact_recourse);
    s.finish();
  }
  {
    Section s = root.child("evss");
    s.get("scenario_count", c.evss.scenario_count);
    s.get("initial_requests", c.evss.initial_requests);
    s.finish();
  }
  root.finish();
  c.validate();
  return c;
}

json ExperimentConfig::to_json() const {
  json policies = json::array();
  for (Policy p : simulation.policies) policies.push_back(to_string(p));
  return {
      {"topology", {{"file", topology.file}, {"wavelengths", topology.wavelengths}}},
      {"output_dir", output_dir},
      {"seed", seed},
      {"threads", threads},
      {"problem",
       {{"type", to_string(problem.type)},
        {"relaxation", to_string(problem.relaxation)},
        {"demand", srwa::to_json(problem.demand)},
        {"current", srwa::to_json(problem.current)},
        {"scenario_count", problem.scenario_count},
        {"scenario_file", problem.scenario_file}}},
      {"traffic", {{"lambda_r", traffic.lambda_r}, {"lambda_l", traffic.lambda_l}}},
      {"benders",
       {{"method", to_string(benders.method)},
        {"preprocess_lp_lp", benders.preprocess_lp_lp},
        {"separate_beta_at_fractional", benders.separate_beta_at_fractional},
        {"separate_x_cuts", benders.separate_x_cuts},
        {"tol_cut", benders.tol_cut}}},
      {"solver",
       {{"time_limit_s", solver.time_limit_seconds},
        {"tol_feas", solver.tol_feas},
        {"tol_int", solver.tol_int},
        {"tol_obj", solver.tol_obj},
        {"stall_threshold", solver.stall_threshold},
        {"max_iterations", solver.max_iterations}}},
      {"simulation",
       {{"policies", policies},
        {"horizon", simulation.horizon},
        {"repetitions", simulation.repetitions},
        {"scenario_count", simulation.scenario_count},
        {"initial_requests", simulation.initial_requests}}},
      {"saa",
       {{"levels", saa.levels},
        {"repetitions", saa.repetitions},
        {"eval_size", saa.eval_size},
        {"confidence", saa.confidence},
        {"exact_recourse", saa.exact_recourse}}},
      {"evss", {{"scenario_count", evss.scenario_count}, {"initial_requests", evss.initial_requests}}},
  };
}

void ExperimentConfig::validate() const {
  if (topology.wavelengths < 1) throw ConfigError("topology.wavelengths must be at least 1");
  if (threads < 1) throw ConfigError("threads must be at least 1");
  if (problem.scenario_count < 0) throw ConfigError("problem.scenario_count must be nonnegative");
  if (simulation.policies.empty() || simulation.policies.size() > 2) {
    throw ConfigError("simulation.policies lists one or two policies");
  }
  if (simulation.policies.size() == 2 &&
      is_defrag(simulation.policies[0]) != is_defrag(simulation.policies[1])) {
    throw ConfigError("simulation.policies cannot mix provisioning and defrag policies");
  }
  for (int level : saa.levels) {
    if (level < 1) throw ConfigError("saa.levels must be positive");
  }
  if (evss.scenario_count < 2) throw ConfigError("evss.scenario_count must be at least 2");
  for (int r : evss.initial_requests) {
    if (r < 0) throw ConfigError("evss.initial_requests must be nonnegative");
  }
  traffic.validate();
  benders.validate();
  solver.validate();
  for (Policy p : simulation.policies) sim_config(p).validate();
  saa_config(saa.levels.empty() ? 1 : saa.levels.front()).validate();
}

SimConfig ExperimentConfig::sim_config(Policy policy) const {
  SimConfig s;
  s.policy = policy;
  s.horizon = simulation.horizon;
  s.repetitions = simulation.repetitions;
  s.traffic = traffic;
  s.scenario_count = simulation.scenario_count;
  s.initial_requests = simulation.initial_requests;
  s.seed = seed;
  s.relaxation = problem.relaxation == Relaxation::kLpLp ? Relaxation::kIpLp : problem.relaxation;
  s.benders = benders;
  s.solver = solver;
  s.threads = threads;
  return s;
}

SaaConfig ExperimentConfig::saa_config(int level) const {
  SaaConfig s;
  s.level = level;
  s.repetitions = saa.repetitions;
  s.eval_size = saa.eval_size;
  s.seed = seed;
  s.confidence = saa.confidence;
  s.exact_recourse = saa.exact_recourse;
  s.threads = threads;
  return s;
}

void apply_override(json& j, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) throw ConfigError("override '" + assignment + "' is not key=value");
  const std::string path = assignment.substr(0, eq);
  const std::string text = assignment.substr(eq + 1);
  json value = json::parse(text, nullptr, false);
  if (value.is_discarded()) value = text;
  json* node = &j;
  std::size_t start = 0;
  for (;;) {
    const auto dot = path.find('.', start);
    const std::string key = path.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
    if (key.empty()) throw ConfigError("override '" + assignment + "' has an empty key");
    if (!node->is_object()) throw ConfigError("override '" + path + "' descends into a non-object");
    if (dot == std::string::npos) {
      (*node)[key] = value;
      return;
    }
    node = &(*node)[key];
    if (node->is_null()) *node = json::object();
    start = dot + 1;
  }
}

ExperimentConfig load_config(const std::string& path, const std::vector<std::string>& overrides) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("config is not valid JSON: ") + e.what());
  }
  for (const auto& o : overrides) apply_override(j, o);
  return ExperimentConfig::from_json(j);
}

std::string resolve_data_path(const std::string& file, const std::string& fallback_dir) {
  if (file.empty()) throw ConfigError("topology.file is required");
  const fs::path p(file);
  if (p.is_absolute() || fs::exists(p)) return p.string();
  if (const char* env = std::getenv("SRWA_DATA_DIR"); env && *env) {
    const fs::path candidate = fs::path(env) / p;
    if (fs::exists(candidate)) return candidate.string();
  }
  const fs::path candidate = fs::path(fallback_dir) / p;
  if (fs::exists(candidate)) return candidate.string();
  throw ConfigError("topology file '" + file + "' not found");
}

}  // namespace srwa
