#include "srwa/benders.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <nlohmann/json.hpp>

#include "srwa/error.hpp"

namespace srwa {

std::string to_string(Method m) {
  switch (m) {
    case Method::kExtensive: return "EXTENSIVE";
    case Method::kBendersX: return "BENDERS_x";
    case Method::kBendersXBeta: return "BENDERS_xbeta";
  }
  return "unknown";
}

Method method_from_string(const std::string& s) {
  for (Method m : {Method::kExtensive, Method::kBendersX, Method::kBendersXBeta}) {
    if (to_string(m) == s) return m;
  }
  throw ConfigError("unknown method '" + s + "'");
}

std::string to_string(CutFamily f) { return f == CutFamily::kX ? "x_cut" : "beta_cut"; }

BendersConfig BendersConfig::normalized() const {
  BendersConfig c = *this;
  if (c.method == Method::kBendersX) {
    c.preprocess_lp_lp = false;
    c.separate_beta_at_fractional = false;
  }
  return c;
}

void BendersConfig::validate() const {
  if (!(tol_cut > 0)) throw ConfigError("tol_cut must be positive");
}

double Cut::rhs(std::span<const double> point) const {
  double v = constant;
  for (const auto& [i, c] : coefficients) v += c * point[i];
  return v;
}

double Cut::rhs_at_load(const WavelinkLoad& load, int num_arcs) const {
  if (family == CutFamily::kX) return rhs(load);
  std::vector<double> per_arc(num_arcs, 0.0);
  for (std::size_t i = 0; i < load.size(); ++i) per_arc[i % num_arcs] += load[i];
  return rhs(per_arc);
}

namespace {

std::uint64_t mix(std::uint64_t h, std::uint64_t v) {
  h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  return h;
}

std::uint64_t quantize(double v) {
  return static_cast<std::uint64_t>(static_cast<std::int64_t>(std::llround(v * 1e9)));
}

double total_demand(const DemandMatrix& m) { return m.total(); }

// Cut from an optimal LP: the constant collects every dual term whose
// right-hand side does not depend on the first stage; rows of `kind` carry
// rhs = capacity(index) - load(index).
Cut cut_from_lp(const LpModel& m, const LpSolution& sol, RowKind kind, CutFamily family, int scenario,
                int num_arcs, const std::function<double(const Row&)>& capacity) {
  Cut cut;
  cut.family = family;
  cut.scenario = scenario;
  cut.subproblem_value = sol.objective;
  double constant = sol.dual_objective(m);
  for (int i = 0; i < m.num_rows(); ++i) {
    const Row& r = m.row(i);
    if (r.key.kind != kind) continue;
    const double pi = sol.duals[i];
    constant += pi * (capacity(r) - r.rhs);
    if (pi == 0.0) continue;
    const int index = family == CutFamily::kX ? r.key.wavelength * num_arcs + r.key.arc : r.key.arc;
    cut.coefficients.emplace_back(index, -pi);
  }
  std::sort(cut.coefficients.begin(), cut.coefficients.end());
  cut.constant = constant;
  return cut;
}

void require_duals(const SolverBackend& backend) {
  if (!backend.capabilities().duals) {
    throw ConfigError("backend '" + backend.name() + "' does not provide dual values");
  }
}

}  // namespace

bool CutPool::add(const Cut& cut) {
  std::uint64_t h = mix(static_cast<std::uint64_t>(cut.family), static_cast<std::uint64_t>(cut.scenario));
  h = mix(h, quantize(cut.constant));
  for (const auto& [i, c] : cut.coefficients) {
    if (std::abs(c) < 1e-12) continue;
    h = mix(mix(h, static_cast<std::uint64_t>(i)), quantize(c));
  }
  if (!seen_.insert(h).second) return false;
  cuts_.push_back(cut);
  (cut.family == CutFamily::kX ? n_x_ : n_beta_) += 1;
  return true;
}

CutRow MasterProblem::to_row(const Cut& cut) const {
  CutRow row;
  row.family = to_string(cut.family);
  row.sense = Sense::kLe;
  row.rhs = cut.constant;
  row.cols.push_back(eta_cols.at(cut.scenario));
  row.vals.push_back(1.0);
  for (const auto& [i, c] : cut.coefficients) {
    if (c == 0.0) continue;
    if (cut.family == CutFamily::kBeta && !beta_cols.empty()) {
      row.cols.push_back(beta_cols[i]);
      row.vals.push_back(-c);
      continue;
    }
    if (cut.family == CutFamily::kX) {
      for (int j : x_by_wavelink[i]) {
        row.cols.push_back(j);
        row.vals.push_back(-c);
      }
    } else {
      for (std::size_t wl = i; wl < x_by_wavelink.size(); wl += num_arcs) {
        for (int j : x_by_wavelink[wl]) {
          row.cols.push_back(j);
          row.vals.push_back(-c);
        }
      }
    }
  }
  return row;
}

MasterProblem build_master(const FormulationSpec& spec, bool with_beta) {
  MasterProblem master;
  master.model = build_first_stage(spec);
  const Topology& t = spec.topology();
  master.num_arcs = t.num_arcs();
  master.x_by_wavelink.assign(std::size_t(t.num_arcs()) * t.num_wavelengths(), {});
  for (int j = 0; j < master.model.num_cols(); ++j) {
    const VarKey& k = master.model.key(j);
    if (k.kind == VarKind::kX) master.x_by_wavelink[std::size_t(k.wavelength) * t.num_arcs() + k.arc].push_back(j);
  }
  const auto& scenarios = spec.scenarios.scenarios;
  const double weight = scenarios.empty() ? 0.0 : 1.0 / double(scenarios.size());
  for (int k = 0; k < static_cast<int>(scenarios.size()); ++k) {
    master.eta_cols.push_back(
        master.model.add_column({VarKey::eta(k), 0.0, total_demand(scenarios[k]), weight, false}));
  }
  if (with_beta) {
    for (ArcId a = 0; a < t.num_arcs(); ++a) {
      const int b = master.model.add_column({VarKey::beta(a), 0.0, kInf, 0.0, false});
      master.beta_cols.push_back(b);
      Row row;
      row.key = {RowKind::kBetaDef, -1, -1, a, -1, -1, -1};
      row.cols.push_back(b);
      row.vals.push_back(1.0);
      for (int w = 0; w < t.num_wavelengths(); ++w) {
        for (int j : master.x_by_wavelink[std::size_t(w) * t.num_arcs() + a]) {
          row.cols.push_back(j);
          row.vals.push_back(-1.0);
        }
      }
      row.sense = Sense::kEq;
      master.model.add_row(std::move(row));
    }
  }
  return master;
}

Cut make_x_cut(const FormulationSpec& spec, const WavelinkLoad& load, int scenario,
               const SolverBackend& backend) {
  require_duals(backend);
  const DemandMatrix& xi = spec.scenarios.scenarios.at(scenario);
  const int num_arcs = spec.topology().num_arcs();
  if (xi.empty()) {
    Cut c;
    c.family = CutFamily::kX;
    c.scenario = scenario;
    c.point = load;
    return c;
  }
  const LpModel m = build_recourse(spec, load, xi, false);
  const LpSolution sol = backend.solve_lp(m, {});
  if (sol.status != LpStatus::kOptimal) {
    throw SolverError("recourse LP for scenario " + std::to_string(scenario) + " not optimal: " +
                      to_string(sol.status));
  }
  Cut c = cut_from_lp(m, sol, RowKind::kCapacity, CutFamily::kX, scenario, num_arcs,
                      [](const Row&) { return 1.0; });
  c.point = load;
  return c;
}

Cut make_beta_cut(const FormulationSpec& spec, std::span<const double> arc_load, int scenario,
                  const SolverBackend& backend) {
  require_duals(backend);
  const DemandMatrix& xi = spec.scenarios.scenarios.at(scenario);
  const int num_arcs = spec.topology().num_arcs();
  if (xi.empty()) {
    Cut c;
    c.family = CutFamily::kBeta;
    c.scenario = scenario;
    c.point.assign(arc_load.begin(), arc_load.end());
    return c;
  }
  const LpModel m = build_relaxed_recourse(spec, arc_load, xi);
  const LpSolution sol = backend.solve_lp(m, {});
  if (sol.status != LpStatus::kOptimal) {
    throw SolverError("relaxed recourse LP for scenario " + std::to_string(scenario) + " not optimal: " +
                      to_string(sol.status));
  }
  Cut c = cut_from_lp(m, sol, RowKind::kArcCapacity, CutFamily::kBeta, scenario, num_arcs,
                      [&](const Row& r) { return double(spec.arc_capacity(r.key.arc)); });
  c.point.assign(arc_load.begin(), arc_load.end());
  return c;
}

std::optional<Cut> separate_x_cut(const FormulationSpec& spec, const WavelinkLoad& load, double eta_hat,
                                  int scenario, double tol_cut, const SolverBackend& backend) {
  Cut c = make_x_cut(spec, load, scenario, backend);
  if (eta_hat > c.subproblem_value + tol_cut) return c;
  return std::nullopt;
}

std::optional<Cut> separate_beta_cut(const FormulationSpec& spec, std::span<const double> arc_load,
                                     double eta_hat, int scenario, double tol_cut,
                                     const SolverBackend& backend) {
  Cut c = make_beta_cut(spec, arc_load, scenario, backend);
  if (eta_hat > c.subproblem_value + tol_cut) return c;
  return std::nullopt;
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

void add_cut_row(LpModel& m, const CutRow& r) {
  Row row;
  row.key = {RowKind::kCut, -1, -1, -1, -1, -1, -1};
  row.cols = r.cols;
  row.vals = r.vals;
  row.sense = r.sense;
  row.rhs = r.rhs;
  m.add_row(std::move(row));
}

PreprocessResult run_preprocess(const FormulationSpec& spec, const BendersConfig& config,
                                const SolverConfig& solver, const SolverBackend& backend,
                                MasterProblem& master, Clock::time_point deadline_start) {
  PreprocessResult result;
  const int n = static_cast<int>(spec.scenarios.scenarios.size());
  if (n == 0) return result;
  LpModel relaxed = master.model;
  relaxed.relax_integrality();
  for (;;) {
    if (seconds_since(deadline_start) > solver.time_limit_seconds) {
      result.complete = false;
      break;
    }
    const LpSolution sol = backend.solve_lp(relaxed, solver);
    if (sol.status != LpStatus::kOptimal) throw SolverError("relaxed master LP not optimal");
    ++result.rounds;
    result.lp_value = sol.objective;
    const WavelinkLoad load = wavelink_load(spec, relaxed, sol.primal);
    const std::vector<double> arcs = arc_load(spec, load);
    int added = 0;
    for (int k = 0; k < n; ++k) {
      auto cut = separate_beta_cut(spec, arcs, sol.primal[master.eta_cols[k]], k, config.tol_cut, backend);
      if (!cut || !result.pool.add(*cut)) continue;
      add_cut_row(relaxed, master.to_row(*cut));
      ++added;
    }
    if (added == 0) break;
  }
  return result;
}

}  // namespace

PreprocessResult preprocess_lp_lp(const FormulationSpec& spec, const BendersConfig& config,
                                  const SolverConfig& solver, const SolverBackend& backend) {
  config.validate();
  require_duals(backend);
  MasterProblem master = build_master(spec, true);
  return run_preprocess(spec, config, solver, backend, master, Clock::now());
}

nlohmann::json SolveResult::stats() const {
  nlohmann::json j;
  j["method"] = to_string(method);
  j["time_s"] = seconds;
  j["gap_pct"] = std::isfinite(gap) ? gap * 100.0 : -1.0;
  j["n_beta_cuts"] = n_beta_cuts;
  j["n_x_cuts"] = n_x_cuts;
  j["objective"] = objective;
  return j;
}

SolveResult solve(const FormulationSpec& spec, const BendersConfig& raw_config, const SolverConfig& solver,
                  const SolverBackend& backend) {
  const BendersConfig config = raw_config.normalized();
  config.validate();
  solver.validate();
  const auto start = Clock::now();
  const int n = static_cast<int>(spec.scenarios.scenarios.size());
  SolveResult result;
  result.method = config.method;

  LpModel model;
  std::vector<int> eta_cols;
  CutCallback callback;
  CutPool pool;
  MasterProblem master;

  if (config.method == Method::kExtensive || n == 0) {
    model = build_extensive(spec);
    for (int k = 0; k < n; ++k) eta_cols.push_back(model.index(VarKey::eta(k)));
  } else {
    if (spec.relaxation == Relaxation::kIpIp) {
      throw ConfigError("Benders methods solve IP-LP; use EXTENSIVE for IP-IP");
    }
    require_duals(backend);
    if (!backend.capabilities().lazy_cuts) {
      throw ConfigError("backend '" + backend.name() + "' does not support lazy cuts");
    }
    const bool with_beta = config.method == Method::kBendersXBeta;
    master = build_master(spec, with_beta);
    if (spec.relaxation == Relaxation::kLpLp) master.model.relax_integrality();
    if (with_beta && config.preprocess_lp_lp) {
      PreprocessResult pre = run_preprocess(spec, config, solver, backend, master, start);
      for (const Cut& c : pre.pool.cuts()) {
        add_cut_row(master.model, master.to_row(c));
        pool.add(c);
      }
    }
    model = master.model;
    eta_cols = master.eta_cols;
    callback = [&, with_beta](const NodeRelaxation& node) {
      std::vector<CutRow> rows;
      const bool beta_here = with_beta && (node.integral || config.separate_beta_at_fractional);
      const bool x_here = node.integral && config.separate_x_cuts;
      if (!beta_here && !x_here) return rows;
      const WavelinkLoad load = wavelink_load(spec, model, node.values);
      const std::vector<double> arcs = arc_load(spec, load);
      for (int k = 0; k < n; ++k) {
        const double eta_hat = node.values[eta_cols[k]];
        std::optional<Cut> cut;
        if (beta_here) cut = separate_beta_cut(spec, arcs, eta_hat, k, config.tol_cut, backend);
        // A cut already in the master can only look violated through round-off.
        if (cut && !pool.add(*cut)) cut.reset();
        if (!cut && x_here) {
          cut = separate_x_cut(spec, load, eta_hat, k, config.tol_cut, backend);
          if (cut && !pool.add(*cut)) cut.reset();
        }
        if (cut) rows.push_back(master.to_row(*cut));
      }
      return rows;
    };
  }

  SolverConfig mip_config = solver;
  mip_config.time_limit_seconds = std::max(1e-3, solver.time_limit_seconds - seconds_since(start));
  const MipSolution mip = backend.solve_mip(model, mip_config, callback);

  result.status = mip.status;
  result.nodes = mip.node_count;
  result.bound = mip.bound;
  result.gap = mip.gap;
  result.n_x_cuts = pool.count(CutFamily::kX);
  result.n_beta_cuts = pool.count(CutFamily::kBeta);
  result.cuts = pool.cuts();
  if (mip.has_incumbent) {
    result.objective = mip.objective;
    result.first_stage_value = first_stage_value(model, mip.incumbent);
    for (int c : eta_cols) result.eta.push_back(mip.incumbent[c]);
    result.load = wavelink_load(spec, model, mip.incumbent);
    if (spec.relaxation != Relaxation::kLpLp) result.first_stage = decode_first_stage(spec, model, mip.incumbent);
  } else {
    result.objective = -kInf;
  }
  result.seconds = seconds_since(start);
  return result;
}

}  // namespace srwa
