#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "srwa/benders.hpp"
#include "srwa/formulation.hpp"
#include "srwa/saa.hpp"
#include "srwa/sim.hpp"
#include "srwa/solver.hpp"
#include "srwa/traffic.hpp"

namespace srwa {

struct TopologySection {
  std::string file;  // resolved against the data directory when relative
  int wavelengths = 4;
};

struct ProblemSection {
  Problem type = Problem::kSmaxRwa;
  Relaxation relaxation = Relaxation::kIpLp;
  DemandMatrix demand;          // new requests (maxRWA, SmaxRWA)
  DemandMatrix current;         // connections to reroute (minRWA, SmaxLR)
  int scenario_count = 10;      // sampled from the traffic section
  std::string scenario_file;    // optional persisted sample, overrides sampling
};

struct SimulationSection {
  std::vector<Policy> policies{Policy::kMaxRwa, Policy::kSmaxRwa};
  int horizon = 52;
  int repetitions = 50;
  int scenario_count = 10;
  int initial_requests = 0;
};

struct SaaSection {
  std::vector<int> levels{5, 20, 50};
  int repetitions = 10;
  int eval_size = 1000;
  double confidence = 0.95;
  bool exact_recourse = false;
};

struct EvssSection {
  int scenario_count = 10;
  // SmaxLR: current connections drawn as a random provisioning of this many
  // requests, one EVSS row per entry. Empty: use problem.current/demand.
  std::vector<int> initial_requests;
};

struct ExperimentConfig {
  TopologySection topology;
  std::string output_dir = "out";
  std::uint64_t seed = 1;
  int threads = 1;
  ProblemSection problem;
  TrafficParams traffic{3.0, 1.0 / 13.0};
  BendersConfig benders;
  SolverConfig solver;
  SimulationSection simulation;
  SaaSection saa;
  EvssSection evss;

  // Rejects unknown keys and ill-typed values with ConfigError naming the key.
  static ExperimentConfig from_json(const nlohmann::json& j);
  // Every field, defaults included.
  nlohmann::json to_json() const;
  void validate() const;

  SimConfig sim_config(Policy policy) const;
  SaaConfig saa_config(int level) const;
};

// Sets a dotted key path ("solver.time_limit_s") to `value`, parsed as JSON
// when possible and kept as a string otherwise.
void apply_override(nlohmann::json& j, const std::string& assignment);

ExperimentConfig load_config(const std::string& path, const std::vector<std::string>& overrides = {});

// Absolute paths and existing relative paths are kept; otherwise the file is
// looked up in $SRWA_DATA_DIR, then in `fallback_dir`.
std::string resolve_data_path(const std::string& file, const std::string& fallback_dir);

}  // namespace srwa
