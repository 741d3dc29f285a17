#include "srwa/sim.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <ostream>
#include <random>

#include "srwa/error.hpp"
#include "srwa/parallel.hpp"
#include "srwa/stats.hpp"

namespace srwa {

std::string to_string(Policy p) {
  switch (p) {
    case Policy::kMaxRwa: return "maxRWA";
    case Policy::kSmaxRwa: return "SmaxRWA";
    case Policy::kMinRwaDefrag: return "minRWA_defrag";
    case Policy::kSmaxLrDefrag: return "SmaxLR_defrag";
  }
  return "?";
}

Policy policy_from_string(const std::string& s) {
  for (Policy p : {Policy::kMaxRwa, Policy::kSmaxRwa, Policy::kMinRwaDefrag, Policy::kSmaxLrDefrag}) {
    if (to_string(p) == s) return p;
  }
  throw ConfigError("unknown policy '" + s + "'");
}

bool is_defrag(Policy p) { return p == Policy::kMinRwaDefrag || p == Policy::kSmaxLrDefrag; }
bool is_stochastic(Policy p) { return p == Policy::kSmaxRwa || p == Policy::kSmaxLrDefrag; }

void SimConfig::validate() const {
  if (horizon < 1) throw ConfigError("horizon must be at least 1");
  if (repetitions < 1) throw ConfigError("repetitions must be at least 1");
  if (is_stochastic(policy) && scenario_count < 1) throw ConfigError("stochastic policies need scenarios");
  if (initial_requests < 0) throw ConfigError("initial_requests must be nonnegative");
  if (relaxation == Relaxation::kLpLp) throw ConfigError("simulation needs an integral first stage");
  if (threads < 1) throw ConfigError("threads must be at least 1");
  traffic.validate();
  benders.validate();
  solver.validate();
}

StageArrivals stage_arrivals(const Topology& topo, const TrafficParams& traffic, std::uint64_t seed, int repetition,
                             int stage) {
  StageArrivals out;
  Rng arrivals(derive_seed(seed, {stream_label("arrivals"), std::uint64_t(repetition), std::uint64_t(stage)}));
  out.batch = sample_batch(traffic, topo, arrivals);
  Rng holding(derive_seed(seed, {stream_label("holding"), std::uint64_t(repetition), std::uint64_t(stage)}));
  for (int k = 0; k < out.batch.total(); ++k) out.holding.push_back(sample_holding(traffic, holding));
  return out;
}

namespace {

ScenarioSample stage_scenarios(const Topology& topo, const SimConfig& config, int repetition, int stage) {
  return sample_scenarios(config.traffic, topo, config.scenario_count,
                          derive_seed(config.seed, {stream_label("scenarios"), std::uint64_t(repetition),
                                                    std::uint64_t(stage)}));
}

// Granted lightpaths paired with the holding time of the matching request:
// the k-th lightpath of a pair takes the k-th holding time of that pair.
std::vector<Provision> to_provisions(const StageArrivals& arrivals, const std::vector<Lightpath>& paths, int stage) {
  std::map<NodePair, std::size_t> offset;
  std::size_t at = 0;
  for (const auto& [pair, count] : arrivals.batch.counts()) {
    offset[pair] = at;
    at += count;
  }
  std::map<NodePair, int> used;
  std::vector<Provision> out;
  for (const Lightpath& lp : paths) {
    const NodePair pair{lp.source, lp.destination};
    const int k = used[pair]++;
    if (k >= arrivals.batch.at(lp.source, lp.destination)) throw ModelError("more lightpaths than requests");
    out.push_back({lp, stage + arrivals.holding[offset.at(pair) + k]});
  }
  return out;
}

struct Grant {
  std::vector<Lightpath> paths;
  bool fallback = false;
};

Grant grant_deterministic(const NetworkState& state, const DemandMatrix& batch, const SolverConfig& solver) {
  FormulationSpec spec{Problem::kMaxRwa, Relaxation::kIpIp, state, batch, {}, {}};
  const SolveResult r = solve(spec, {Method::kExtensive}, solver);
  // A time-limited solve still grants its incumbent, if any.
  return {r.first_stage, r.status != MipStatus::kOptimal};
}

Grant grant_stochastic(const NetworkState& state, const DemandMatrix& batch, const SimConfig& config,
                       const ScenarioSample& scenarios) {
  FormulationSpec spec{Problem::kSmaxRwa, config.relaxation, state, batch, {}, scenarios};
  const SolveResult r = solve(spec, config.benders, config.solver);
  if (r.status == MipStatus::kOptimal) return {r.first_stage, false};
  Grant g = grant_deterministic(state, batch, config.solver);
  g.fallback = true;
  return g;
}

void finish_record(StageRecord& rec, const NetworkState& state, int& cum_arrivals, int& cum_granted) {
  rec.blocked = rec.arrivals - rec.granted;
  cum_arrivals += rec.arrivals;
  cum_granted += rec.granted;
  rec.cumulative_arrivals = cum_arrivals;
  rec.cumulative_granted = cum_granted;
  rec.gos = cum_arrivals == 0 ? 1.0 : static_cast<double>(cum_granted) / cum_arrivals;
  rec.spectrum_usage = state.spectrum_usage();
  rec.active_connections = static_cast<int>(state.connections().size());
}

// Simple path s->d on free wavelinks of `w`, exploring neighbors in random order.
std::vector<ArcId> random_free_path(const NetworkState& state, NodeId s, NodeId d, Wavelength w,
                                    std::mt19937_64& gen) {
  const Topology& t = state.topology();
  std::vector<char> seen(t.num_nodes(), 0);
  std::vector<ArcId> path;
  std::function<bool(NodeId)> dfs = [&](NodeId v) {
    if (v == d) return true;
    seen[v] = 1;
    std::vector<ArcId> out(t.delta_out(v).begin(), t.delta_out(v).end());
    std::shuffle(out.begin(), out.end(), gen);
    for (ArcId a : out) {
      const NodeId h = t.arc(a).head;
      if (seen[h] || !state.is_free(a, w)) continue;
      path.push_back(a);
      if (dfs(h)) return true;
      path.pop_back();
    }
    return false;
  };
  if (!dfs(s)) path.clear();
  return path;
}

}  // namespace

NetworkState random_initial_state(std::shared_ptr<const Topology> topo, const TrafficParams& traffic, int requests,
                                  std::uint64_t seed, int repetition) {
  constexpr int kAttempts = 200;
  Rng rng(derive_seed(seed, {stream_label("initial"), std::uint64_t(repetition)}));
  auto& gen = rng.engine();
  const int n = topo->num_nodes();
  const int W = topo->num_wavelengths();
  std::uniform_int_distribution<int> node(0, n - 1);
  NetworkState state(topo);
  for (int k = 0; k < requests; ++k) {
    bool placed = false;
    for (int attempt = 0; attempt < kAttempts && !placed; ++attempt) {
      const NodeId s = node(gen);
      NodeId d = node(gen);
      if (d == s) continue;
      std::vector<Wavelength> waves(W);
      for (int w = 0; w < W; ++w) waves[w] = w;
      std::shuffle(waves.begin(), waves.end(), gen);
      for (Wavelength w : waves) {
        std::vector<ArcId> path = random_free_path(state, s, d, w, gen);
        if (path.empty()) continue;
        const Provision p{{s, d, w, std::move(path)}, sample_holding(traffic, rng)};
        state = apply_provisioning(state, std::span<const Provision>(&p, 1));
        placed = true;
        break;
      }
    }
    if (!placed) {
      throw ConfigError("could not place initial connection " + std::to_string(k) + " after " +
                        std::to_string(kAttempts) + " attempts");
    }
  }
  return state;
}

SimTrace run_provisioning_once(std::shared_ptr<const Topology> topo, const SimConfig& config, int repetition) {
  if (is_defrag(config.policy)) throw ConfigError("provisioning runs take maxRWA or SmaxRWA");
  SimTrace trace{config.policy, config.seed, repetition, {}, 0};
  NetworkState state(topo);
  int cum_arrivals = 0, cum_granted = 0;
  for (int t = 1; t <= config.horizon; ++t) {
    const StageArrivals arrivals = stage_arrivals(*topo, config.traffic, config.seed, repetition, t);
    StageRecord rec;
    rec.stage = t;
    rec.arrivals = arrivals.batch.total();
    if (!arrivals.batch.empty()) {
      const Grant g = config.policy == Policy::kSmaxRwa
                          ? grant_stochastic(state, arrivals.batch, config,
                                             stage_scenarios(*topo, config, repetition, t))
                          : grant_deterministic(state, arrivals.batch, config.solver);
      const auto prov = to_provisions(arrivals, g.paths, t);
      state = apply_provisioning(state, prov);
      rec.granted = static_cast<int>(prov.size());
      rec.fallback = g.fallback;
    }
    finish_record(rec, state, cum_arrivals, cum_granted);
    trace.fallbacks += rec.fallback;
    trace.stages.push_back(rec);
    state = drop_expired(state, t);
  }
  return trace;
}

namespace {

// Reroutes every active connection onto the policy's target routing,
// keeping identifiers and expiry stages. Connections of one pair take the
// pair's target lightpaths in identifier order.
bool defragment(NetworkState& state, const SimConfig& config, int repetition, int stage) {
  if (state.connections().empty()) return false;
  DemandMatrix current;
  for (const auto& c : state.connections()) current.add(c.lightpath.source, c.lightpath.destination);
  FormulationSpec spec{config.policy == Policy::kSmaxLrDefrag ? Problem::kSmaxLr : Problem::kMinRwa,
                       config.relaxation, NetworkState(state.topology_ptr()), {}, current, {}};
  if (config.policy == Policy::kSmaxLrDefrag) {
    spec.scenarios = stage_scenarios(state.topology(), config, repetition, stage);
  }
  const SolveResult r = solve(spec, config.benders, config.solver);
  if (r.status != MipStatus::kOptimal) return true;
  std::map<NodePair, std::vector<Lightpath>> target;
  for (const Lightpath& lp : r.first_stage) target[{lp.source, lp.destination}].push_back(lp);
  std::vector<ActiveConnection> conns = state.connections();
  std::sort(conns.begin(), conns.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
  std::map<NodePair, std::size_t> used;
  for (auto& c : conns) {
    const NodePair pair{c.lightpath.source, c.lightpath.destination};
    auto& list = target[pair];
    const std::size_t k = used[pair]++;
    if (k >= list.size()) throw ModelError("rerouting lost a connection");
    c.lightpath = list[k];
  }
  state = replace_connections(state, std::move(conns));
  return false;
}

}  // namespace

SimTrace run_defrag_once(std::shared_ptr<const Topology> topo, const SimConfig& config, int repetition) {
  if (!is_defrag(config.policy)) throw ConfigError("defrag runs take minRWA_defrag or SmaxLR_defrag");
  SimTrace trace{config.policy, config.seed, repetition, {}, 0};
  NetworkState state = random_initial_state(topo, config.traffic, config.initial_requests, config.seed, repetition);
  int cum_arrivals = 0, cum_granted = 0;
  for (int t = 1; t <= config.horizon; ++t) {
    StageRecord rec;
    rec.stage = t;
    rec.spectrum_before_defrag = state.spectrum_usage();
    rec.fallback = defragment(state, config, repetition, t);
    rec.spectrum_after_defrag = state.spectrum_usage();
    state = drop_expired(state, t);
    const StageArrivals arrivals = stage_arrivals(*topo, config.traffic, config.seed, repetition, t);
    rec.arrivals = arrivals.batch.total();
    if (!arrivals.batch.empty()) {
      const Grant g = grant_deterministic(state, arrivals.batch, config.solver);
      const auto prov = to_provisions(arrivals, g.paths, t);
      state = apply_provisioning(state, prov);
      rec.granted = static_cast<int>(prov.size());
      rec.fallback = rec.fallback || g.fallback;
    }
    finish_record(rec, state, cum_arrivals, cum_granted);
    trace.fallbacks += rec.fallback;
    trace.stages.push_back(rec);
  }
  return trace;
}

namespace {

template <class Once>
std::vector<SimTrace> run_all(std::shared_ptr<const Topology> topo, const SimConfig& config, Once once) {
  config.validate();
  std::vector<SimTrace> out(config.repetitions);
  parallel_for(config.repetitions, config.threads, [&](int rep) { out[rep] = once(topo, config, rep); });
  return out;
}

}  // namespace

std::vector<SimTrace> run_provisioning(std::shared_ptr<const Topology> topo, const SimConfig& config) {
  return run_all(std::move(topo), config, run_provisioning_once);
}

std::vector<SimTrace> run_defrag(std::shared_ptr<const Topology> topo, const SimConfig& config) {
  return run_all(std::move(topo), config, run_defrag_once);
}

std::vector<SimTrace> run_simulation(std::shared_ptr<const Topology> topo, const SimConfig& config) {
  return is_defrag(config.policy) ? run_defrag(std::move(topo), config) : run_provisioning(std::move(topo), config);
}

std::vector<CompareRow> compare(const std::vector<SimTrace>& a, const std::vector<SimTrace>& b) {
  if (a.size() != b.size() || a.empty()) throw ConfigError("compare needs matched, nonempty trace sets");
  const std::size_t stages = a.front().stages.size();
  for (std::size_t r = 0; r < a.size(); ++r) {
    if (a[r].seed != b[r].seed || a[r].repetition != b[r].repetition) {
      throw ConfigError("compare needs traces with matching seeds");
    }
    if (a[r].stages.size() != stages || b[r].stages.size() != stages) {
      throw ConfigError("compare needs traces with matching stage counts");
    }
  }
  auto rel = [](double x, double y) { return (x - y) / (y > 0.0 ? y : 1.0) * 100.0; };
  std::vector<CompareRow> rows;
  for (std::size_t s = 0; s < stages; ++s) {
    std::vector<double> g, q, u;
    for (std::size_t r = 0; r < a.size(); ++r) {
      const StageRecord& x = a[r].stages[s];
      const StageRecord& y = b[r].stages[s];
      g.push_back(rel(x.cumulative_granted, y.cumulative_granted));
      q.push_back(rel(x.gos, y.gos));
      u.push_back(rel(x.spectrum_usage, y.spectrum_usage));
    }
    rows.push_back({a.front().stages[s].stage, mean(g), sample_std(g), mean(q), sample_std(q), mean(u),
                    sample_std(u)});
  }
  return rows;
}

void write_trace_csv(std::ostream& out, const std::vector<SimTrace>& traces) {
  out << "policy,seed,repetition,stage,arrivals,granted,blocked,cumulative_granted,gos,spectrum_usage,"
         "active_connections,spectrum_before_defrag,spectrum_after_defrag,fallback\n";
  for (const auto& t : traces) {
    for (const auto& s : t.stages) {
      out << to_string(t.policy) << ',' << t.seed << ',' << t.repetition << ',' << s.stage << ',' << s.arrivals
          << ',' << s.granted << ',' << s.blocked << ',' << s.cumulative_granted << ',' << s.gos << ','
          << s.spectrum_usage << ',' << s.active_connections << ',' << s.spectrum_before_defrag << ','
          << s.spectrum_after_defrag << ',' << (s.fallback ? 1 : 0) << '\n';
    }
  }
}

void write_compare_csv(std::ostream& out, const std::vector<CompareRow>& rows) {
  out << "stage,rel_granted_pct,rel_granted_std,rel_gos_pct,rel_gos_std,rel_spectrum_pct,rel_spectrum_std\n";
  for (const auto& r : rows) {
    out << r.stage << ',' << r.rel_granted_pct << ',' << r.rel_granted_std << ',' << r.rel_gos_pct << ','
        << r.rel_gos_std << ',' << r.rel_spectrum_pct << ',' << r.rel_spectrum_std << '\n';
  }
}

}  // namespace srwa
