#include "srwa/traffic.hpp"

#include <cmath>
#include <nlohmann/json.hpp>

#include "srwa/error.hpp"

namespace srwa {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> streams) {
  std::uint64_t h = splitmix64(base);
  for (std::uint64_t s : streams) h = splitmix64(h ^ splitmix64(s + 0x632be59bd9b4e019ULL));
  return h;
}

std::uint64_t stream_label(const std::string& name) {
  // FNV-1a
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : name) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

void TrafficParams::validate() const {
  if (!(lambda_r > 0) || !std::isfinite(lambda_r)) throw ConfigError("lambda_R must be positive");
  if (!(lambda_l > 0) || !std::isfinite(lambda_l)) throw ConfigError("lambda_L must be positive");
}

DemandMatrix::DemandMatrix(std::initializer_list<std::pair<const NodePair, int>> init) {
  for (const auto& [pair, count] : init) add(pair.first, pair.second, count);
}

int DemandMatrix::at(NodeId s, NodeId d) const {
  auto it = counts_.find({s, d});
  return it == counts_.end() ? 0 : it->second;
}

void DemandMatrix::set(NodeId s, NodeId d, int count) {
  if (count < 0) throw ModelError("negative demand");
  if (s == d) throw ModelError("demand on a pair with s == d");
  if (count == 0) {
    counts_.erase({s, d});
  } else {
    counts_[{s, d}] = count;
  }
}

void DemandMatrix::add(NodeId s, NodeId d, int count) { set(s, d, at(s, d) + count); }

int DemandMatrix::total() const {
  int t = 0;
  for (const auto& [_, c] : counts_) t += c;
  return t;
}

std::vector<NodePair> DemandMatrix::pairs() const {
  std::vector<NodePair> out;
  out.reserve(counts_.size());
  for (const auto& [p, _] : counts_) out.push_back(p);
  return out;
}

DemandMatrix sample_batch(const TrafficParams& params, const Topology& topo, Rng& rng) {
  params.validate();
  const int n = topo.num_nodes();
  if (n < 2) throw ModelError("traffic needs at least two nodes");
  std::poisson_distribution<int> batch(params.lambda_r);
  std::uniform_int_distribution<int> src(0, n - 1);
  std::uniform_int_distribution<int> dst(0, n - 2);
  DemandMatrix m;
  const int requests = batch(rng.engine());
  for (int k = 0; k < requests; ++k) {
    const int s = src(rng.engine());
    int d = dst(rng.engine());
    if (d >= s) ++d;
    m.add(s, d);
  }
  return m;
}

ScenarioSample sample_scenarios(const TrafficParams& params, const Topology& topo, int count,
                                std::uint64_t seed) {
  if (count < 1) throw ModelError("scenario count must be at least 1");
  ScenarioSample sample;
  sample.seed = seed;
  sample.scenarios.reserve(count);
  Rng rng(seed);
  for (int k = 0; k < count; ++k) sample.scenarios.push_back(sample_batch(params, topo, rng));
  return sample;
}

int sample_holding(const TrafficParams& params, Rng& rng) {
  params.validate();
  std::exponential_distribution<double> hold(params.lambda_l);
  const double h = std::ceil(hold(rng.engine()));
  return h < 1.0 ? 1 : static_cast<int>(h);
}

nlohmann::json to_json(const DemandMatrix& m) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [p, c] : m.counts()) {
    j[std::to_string(p.first) + "," + std::to_string(p.second)] = c;
  }
  return j;
}

DemandMatrix demand_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ParseError("demand matrix must be a JSON object");
  DemandMatrix m;
  for (const auto& [key, value] : j.items()) {
    auto comma = key.find(',');
    if (comma == std::string::npos) throw ParseError("bad pair key '" + key + "'");
    try {
      std::size_t used = 0;
      const int s = std::stoi(key.substr(0, comma), &used);
      if (used != comma) throw ParseError("bad pair key '" + key + "'");
      const std::string rest = key.substr(comma + 1);
      const int d = std::stoi(rest, &used);
      if (used != rest.size()) throw ParseError("bad pair key '" + key + "'");
      if (!value.is_number_integer() || value.get<int>() < 0) {
        throw ParseError("demand count for '" + key + "' must be a nonnegative integer");
      }
      m.add(s, d, value.get<int>());
    } catch (const std::invalid_argument&) {
      throw ParseError("bad pair key '" + key + "'");
    } catch (const ModelError& e) {
      throw ParseError(e.what());
    }
  }
  return m;
}

nlohmann::json to_json(const ScenarioSample& s) {
  nlohmann::json j;
  j["seed"] = s.seed;
  j["scenarios"] = nlohmann::json::array();
  for (const auto& m : s.scenarios) j["scenarios"].push_back(to_json(m));
  return j;
}

ScenarioSample scenario_sample_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("seed") || !j.contains("scenarios")) {
    throw ParseError("scenario sample needs 'seed' and 'scenarios'");
  }
  ScenarioSample s;
  s.seed = j.at("seed").get<std::uint64_t>();
  for (const auto& m : j.at("scenarios")) s.scenarios.push_back(demand_from_json(m));
  return s;
}

}  // namespace srwa
