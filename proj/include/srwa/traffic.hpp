#pragma once

#include <cstdint>
#include <initializer_list>
#include <map>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "srwa/topology.hpp"

namespace srwa {

// Seed derivation through SplitMix64 so that every random stream in the
// library is a pure function of (base seed, stream labels).
std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> streams);
std::uint64_t stream_label(const std::string& name);

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed), engine_(splitmix64(seed)) {}
  std::mt19937_64& engine() { return engine_; }
  std::uint64_t seed() const { return seed_; }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

// lambda_r: Poisson mean of the per-stage batch size.
// lambda_l: rate of the exponential holding time (mean 1 / lambda_l stages).
struct TrafficParams {
  double lambda_r = 1.0;
  double lambda_l = 1.0;

  static TrafficParams from_mean_holding(double lambda_r, double mean_holding_stages) {
    return {lambda_r, 1.0 / mean_holding_stages};
  }
  void validate() const;
};

using NodePair = std::pair<NodeId, NodeId>;

// Requested-lightpath counts per ordered node pair. Zero entries are never
// stored, so the key set is the support of the matrix.
class DemandMatrix {
 public:
  DemandMatrix() = default;
  DemandMatrix(std::initializer_list<std::pair<const NodePair, int>> init);

  int at(NodeId s, NodeId d) const;
  void set(NodeId s, NodeId d, int count);
  void add(NodeId s, NodeId d, int count = 1);

  int total() const;
  bool empty() const { return counts_.empty(); }
  std::size_t num_pairs() const { return counts_.size(); }
  std::vector<NodePair> pairs() const;
  const std::map<NodePair, int>& counts() const { return counts_; }

  friend bool operator==(const DemandMatrix&, const DemandMatrix&) = default;

 private:
  std::map<NodePair, int> counts_;
};

struct ScenarioSample {
  std::uint64_t seed = 0;
  std::vector<DemandMatrix> scenarios;

  friend bool operator==(const ScenarioSample&, const ScenarioSample&) = default;
};

// Draws N ~ Poisson(lambda_r) requests, each on a uniformly random ordered
// pair s != d.
DemandMatrix sample_batch(const TrafficParams& params, const Topology& topo, Rng& rng);

// `count` i.i.d. batches from a generator seeded with `seed`.
ScenarioSample sample_scenarios(const TrafficParams& params, const Topology& topo, int count,
                                std::uint64_t seed);

// ceil(Exp(lambda_l)), at least one stage.
int sample_holding(const TrafficParams& params, Rng& rng);

// {"seed": <u64>, "scenarios": [{"s,d": count, ...}, ...]}
nlohmann::json to_json(const DemandMatrix& m);
DemandMatrix demand_from_json(const nlohmann::json& j);
nlohmann::json to_json(const ScenarioSample& s);
ScenarioSample scenario_sample_from_json(const nlohmann::json& j);

}  // namespace srwa
