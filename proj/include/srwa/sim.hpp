#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "srwa/benders.hpp"
#include "srwa/formulation.hpp"
#include "srwa/solver.hpp"
#include "srwa/topology.hpp"
#include "srwa/traffic.hpp"

namespace srwa {

enum class Policy { kMaxRwa, kSmaxRwa, kMinRwaDefrag, kSmaxLrDefrag };
std::string to_string(Policy p);
Policy policy_from_string(const std::string& s);
bool is_defrag(Policy p);
bool is_stochastic(Policy p);

struct SimConfig {
  Policy policy = Policy::kMaxRwa;
  int horizon = 52;
  int repetitions = 50;
  TrafficParams traffic;
  int scenario_count = 10;    // stochastic policies
  int initial_requests = 0;   // defrag runs
  std::uint64_t seed = 1;
  // Relaxation of the stochastic policy models.
  Relaxation relaxation = Relaxation::kIpLp;
  BendersConfig benders;
  SolverConfig solver;
  int threads = 1;

  void validate() const;
};

struct StageRecord {
  int stage = 0;
  int arrivals = 0;
  int granted = 0;
  int blocked = 0;
  int cumulative_arrivals = 0;
  int cumulative_granted = 0;
  double gos = 1.0;  // cumulative granted / cumulative arrivals, 1 before any arrival
  int spectrum_usage = 0;  // after granting
  int active_connections = 0;
  // Defrag runs: occupied wavelinks before and after rerouting.
  int spectrum_before_defrag = 0;
  int spectrum_after_defrag = 0;
  bool fallback = false;  // the policy solve failed and a fallback was used
};

struct SimTrace {
  Policy policy = Policy::kMaxRwa;
  std::uint64_t seed = 0;
  int repetition = 0;
  std::vector<StageRecord> stages;
  int fallbacks = 0;
};

// Arrivals of one stage with the holding time of each request, listed per
// pair in the order of DemandMatrix::counts().
struct StageArrivals {
  DemandMatrix batch;
  std::vector<int> holding;
};

// Pre-generated traffic of one run; identical for every policy given (seed, repetition).
StageArrivals stage_arrivals(const Topology& topo, const TrafficParams& traffic, std::uint64_t seed, int repetition,
                             int stage);

// Random valid provisioning of `requests` connections on an empty network,
// with sampled holding times. Throws ConfigError when some request cannot be
// placed after bounded retries.
NetworkState random_initial_state(std::shared_ptr<const Topology> topo, const TrafficParams& traffic, int requests,
                                  std::uint64_t seed, int repetition);

// Provisioning experiment on an initially empty network: per stage,
// arrivals, grant by the policy, then drop connections expiring this stage.
SimTrace run_provisioning_once(std::shared_ptr<const Topology> topo, const SimConfig& config, int repetition);
std::vector<SimTrace> run_provisioning(std::shared_ptr<const Topology> topo, const SimConfig& config);

// Defragmentation experiment: per stage, reroute by the policy, drop
// expiring connections, then grant arrivals with deterministic maxRWA.
SimTrace run_defrag_once(std::shared_ptr<const Topology> topo, const SimConfig& config, int repetition);
std::vector<SimTrace> run_defrag(std::shared_ptr<const Topology> topo, const SimConfig& config);

// Dispatches on the policy.
std::vector<SimTrace> run_simulation(std::shared_ptr<const Topology> topo, const SimConfig& config);

// Relative difference of policy A over policy B per stage, averaged over
// repetitions. Positive: A grants more, has higher GoS, uses more spectrum.
struct CompareRow {
  int stage = 0;
  double rel_granted_pct = 0.0;
  double rel_granted_std = 0.0;
  double rel_gos_pct = 0.0;
  double rel_gos_std = 0.0;
  double rel_spectrum_pct = 0.0;
  double rel_spectrum_std = 0.0;
};

std::vector<CompareRow> compare(const std::vector<SimTrace>& a, const std::vector<SimTrace>& b);

void write_trace_csv(std::ostream& out, const std::vector<SimTrace>& traces);
void write_compare_csv(std::ostream& out, const std::vector<CompareRow>& rows);

}  // namespace srwa
