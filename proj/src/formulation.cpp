#include "srwa/formulation.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <tuple>

#include "srwa/error.hpp"
#include "srwa/solver.hpp"

namespace srwa {

std::string to_string(Problem p) {
  switch (p) {
    case Problem::kMaxRwa: return "maxRWA";
    case Problem::kMinRwa: return "minRWA";
    case Problem::kSmaxRwa: return "SmaxRWA";
    case Problem::kSmaxLr: return "SmaxLR";
  }
  return "unknown";
}

std::string to_string(Relaxation r) {
  switch (r) {
    case Relaxation::kIpIp: return "IP-IP";
    case Relaxation::kIpLp: return "IP-LP";
    case Relaxation::kLpLp: return "LP-LP";
  }
  return "unknown";
}

Problem problem_from_string(const std::string& s) {
  for (Problem p : {Problem::kMaxRwa, Problem::kMinRwa, Problem::kSmaxRwa, Problem::kSmaxLr}) {
    if (to_string(p) == s) return p;
  }
  throw ConfigError("unknown problem '" + s + "'");
}

Relaxation relaxation_from_string(const std::string& s) {
  for (Relaxation r : {Relaxation::kIpIp, Relaxation::kIpLp, Relaxation::kLpLp}) {
    if (to_string(r) == s) return r;
  }
  throw ConfigError("unknown relaxation '" + s + "'");
}

const DemandMatrix& FormulationSpec::first_stage_demand() const {
  return rerouting() ? current_demand : new_demand;
}

bool FormulationSpec::available(ArcId arc, Wavelength w) const {
  return rerouting() || state.is_free(arc, w);
}

int FormulationSpec::arc_capacity(ArcId arc) const {
  return rerouting() ? topology().num_wavelengths() : state.free_wavelengths(arc);
}

namespace {

bool usable_for_pair(const Arc& a, NodeId s, NodeId d) { return a.head != s && a.tail != d; }

// Capacity of a recourse wavelink: either a constant right-hand side or the
// x columns of the same model (extensive form).
struct CapacitySource {
  const WavelinkLoad* load = nullptr;
  const std::map<int, std::vector<int>>* x_cols = nullptr;  // wavelink -> x columns
};

void add_flow_rows(LpModel& m, const Topology& t, NodeId s, NodeId d, Wavelength w,
                   const std::vector<int>& col_of_arc, int scenario) {
  for (NodeId v = 0; v < t.num_nodes(); ++v) {
    if (v == s || v == d) continue;
    Row row;
    row.key = {RowKind::kFlow, s, d, -1, w, v, scenario};
    for (ArcId a : t.delta_out(v)) {
      if (col_of_arc[a] >= 0) {
        row.cols.push_back(col_of_arc[a]);
        row.vals.push_back(1.0);
      }
    }
    for (ArcId a : t.delta_in(v)) {
      if (col_of_arc[a] >= 0) {
        row.cols.push_back(col_of_arc[a]);
        row.vals.push_back(-1.0);
      }
    }
    if (row.cols.empty()) continue;
    row.sense = Sense::kEq;
    m.add_row(std::move(row));
  }
}

// y, z columns plus flow/demand/grant rows for one scenario. Returns, per
// wavelink index, the y columns created (for the capacity rows). z columns are
// appended to `z_cols`.
std::map<int, std::vector<int>> add_recourse_columns(LpModel& m, const FormulationSpec& spec,
                                                     const DemandMatrix& xi, int scenario, bool integer,
                                                     std::vector<int>& z_cols) {
  const Topology& t = spec.topology();
  const int num_arcs = t.num_arcs();
  std::map<int, std::vector<int>> per_wavelink;
  for (const auto& [pair, r] : xi.counts()) {
    const auto [s, d] = pair;
    std::vector<int> leaving;
    for (Wavelength w = 0; w < t.num_wavelengths(); ++w) {
      std::vector<int> col_of_arc(num_arcs, -1);
      for (const Arc& a : t.arcs()) {
        if (!spec.available(a.id, w) || !usable_for_pair(a, s, d)) continue;
        Column c;
        c.key = VarKey::y(s, d, a.id, w, scenario);
        c.lb = 0.0;
        c.ub = integer ? 1.0 : kInf;
        c.integer = integer;
        const int j = m.add_column(c);
        col_of_arc[a.id] = j;
        per_wavelink[w * num_arcs + a.id].push_back(j);
        if (a.tail == s) leaving.push_back(j);
      }
      add_flow_rows(m, t, s, d, w, col_of_arc, scenario);
    }
    Column z;
    z.key = VarKey::z(s, d, scenario);
    z.lb = 0.0;
    z.ub = integer ? double(r) : kInf;
    z.obj = scenario < 0 ? 1.0 : 0.0;
    z.integer = integer;
    const int zc = m.add_column(z);
    z_cols.push_back(zc);

    Row demand;
    demand.key = {RowKind::kDemand, s, d, -1, -1, -1, scenario};
    demand.cols = leaving;
    demand.vals.assign(leaving.size(), 1.0);
    demand.sense = Sense::kLe;
    demand.rhs = r;
    m.add_row(std::move(demand));

    Row grant;
    grant.key = {RowKind::kGrant, s, d, -1, -1, -1, scenario};
    grant.cols.push_back(zc);
    grant.vals.push_back(1.0);
    for (int j : leaving) {
      grant.cols.push_back(j);
      grant.vals.push_back(-1.0);
    }
    grant.sense = Sense::kEq;
    m.add_row(std::move(grant));
  }
  return per_wavelink;
}

void add_capacity_rows(LpModel& m, const FormulationSpec& spec,
                       const std::map<int, std::vector<int>>& per_wavelink, const CapacitySource& cap,
                       int scenario) {
  const int num_arcs = spec.topology().num_arcs();
  for (const auto& [wl, ycols] : per_wavelink) {
    Row row;
    row.key = {RowKind::kCapacity, -1, -1, wl % num_arcs, wl / num_arcs, -1, scenario};
    row.cols = ycols;
    row.vals.assign(ycols.size(), 1.0);
    row.sense = Sense::kLe;
    row.rhs = 1.0;
    if (cap.load) {
      const double load = (*cap.load)[wl];
      if (load > 1.0 + 1e-6) {
        throw ModelError("first-stage load " + std::to_string(load) + " exceeds one on arc " +
                         std::to_string(wl % num_arcs) + " wavelength " + std::to_string(wl / num_arcs));
      }
      row.rhs = std::max(0.0, 1.0 - load);
    } else if (cap.x_cols) {
      if (auto it = cap.x_cols->find(wl); it != cap.x_cols->end()) {
        for (int j : it->second) {
          row.cols.push_back(j);
          row.vals.push_back(1.0);
        }
      }
    }
    m.add_row(std::move(row));
  }
}

// First-stage columns and rows; returns x columns per wavelink.
std::map<int, std::vector<int>> add_first_stage(LpModel& m, const FormulationSpec& spec, bool integer) {
  const Topology& t = spec.topology();
  const int num_arcs = t.num_arcs();
  const DemandMatrix& demand = spec.first_stage_demand();
  std::map<int, std::vector<int>> per_wavelink;
  for (const auto& [pair, r] : demand.counts()) {
    const auto [s, d] = pair;
    if (s < 0 || s >= t.num_nodes() || d < 0 || d >= t.num_nodes()) {
      throw ModelError("demand pair outside the topology");
    }
    std::vector<int> leaving;
    for (Wavelength w = 0; w < t.num_wavelengths(); ++w) {
      std::vector<int> col_of_arc(num_arcs, -1);
      for (const Arc& a : t.arcs()) {
        if (!spec.available(a.id, w) || !usable_for_pair(a, s, d)) continue;
        Column c;
        c.key = VarKey::x(s, d, a.id, w);
        c.lb = 0.0;
        c.ub = 1.0;
        c.integer = integer;
        switch (spec.problem) {
          case Problem::kMaxRwa:
          case Problem::kSmaxRwa: c.obj = a.tail == s ? 1.0 : 0.0; break;
          case Problem::kMinRwa: c.obj = -1.0; break;
          case Problem::kSmaxLr: c.obj = 0.0; break;
        }
        const int j = m.add_column(c);
        col_of_arc[a.id] = j;
        per_wavelink[w * num_arcs + a.id].push_back(j);
        if (a.tail == s) leaving.push_back(j);
      }
      add_flow_rows(m, t, s, d, w, col_of_arc, -1);
    }
    Row row;
    row.key = {RowKind::kDemand, s, d, -1, -1, -1, -1};
    row.cols = leaving;
    row.vals.assign(leaving.size(), 1.0);
    row.sense = spec.rerouting() ? Sense::kEq : Sense::kLe;
    row.rhs = r;
    m.add_row(std::move(row));
  }
  for (const auto& [wl, cols] : per_wavelink) {
    if (cols.size() < 2) continue;  // a single binary column never conflicts
    Row row;
    row.key = {RowKind::kConflict, -1, -1, wl % num_arcs, wl / num_arcs, -1, -1};
    row.cols = cols;
    row.vals.assign(cols.size(), 1.0);
    row.sense = Sense::kLe;
    row.rhs = 1.0;
    m.add_row(std::move(row));
  }
  return per_wavelink;
}

}  // namespace

LpModel build_first_stage(const FormulationSpec& spec) {
  LpModel m;
  add_first_stage(m, spec, spec.relaxation != Relaxation::kLpLp);
  return m;
}

LpModel build_recourse(const FormulationSpec& spec, const WavelinkLoad& load, const DemandMatrix& xi,
                       bool integer) {
  const Topology& t = spec.topology();
  if (load.size() != std::size_t(t.num_arcs()) * t.num_wavelengths()) {
    throw ModelError("wavelink load has the wrong size");
  }
  LpModel m;
  std::vector<int> z_cols;
  const auto per_wavelink = add_recourse_columns(m, spec, xi, -1, integer, z_cols);
  add_capacity_rows(m, spec, per_wavelink, CapacitySource{&load, nullptr}, -1);
  return m;
}

LpModel build_relaxed_recourse(const FormulationSpec& spec, std::span<const double> arc_load,
                               const DemandMatrix& xi) {
  const Topology& t = spec.topology();
  if (arc_load.size() != std::size_t(t.num_arcs())) throw ModelError("arc load has the wrong size");
  const int num_arcs = t.num_arcs();
  LpModel m;
  std::vector<int> z_cols;
  const auto per_wavelink = add_recourse_columns(m, spec, xi, -1, false, z_cols);
  std::vector<std::vector<int>> per_arc(num_arcs);
  for (const auto& [wl, cols] : per_wavelink) {
    per_arc[wl % num_arcs].insert(per_arc[wl % num_arcs].end(), cols.begin(), cols.end());
  }
  for (ArcId a = 0; a < num_arcs; ++a) {
    if (per_arc[a].empty()) continue;
    Row row;
    row.key = {RowKind::kArcCapacity, -1, -1, a, -1, -1, -1};
    row.cols = per_arc[a];
    row.vals.assign(per_arc[a].size(), 1.0);
    row.sense = Sense::kLe;
    row.rhs = std::max(0.0, spec.arc_capacity(a) - arc_load[a]);
    m.add_row(std::move(row));
  }
  for (const auto& [wl, cols] : per_wavelink) {
    Row row;
    row.key = {RowKind::kUnit, -1, -1, wl % num_arcs, wl / num_arcs, -1, -1};
    row.cols = cols;
    row.vals.assign(cols.size(), 1.0);
    row.sense = Sense::kLe;
    row.rhs = 1.0;
    m.add_row(std::move(row));
  }
  return m;
}

LpModel build_extensive(const FormulationSpec& spec) {
  LpModel m;
  const auto x_cols = add_first_stage(m, spec, spec.relaxation != Relaxation::kLpLp);
  const auto& scenarios = spec.scenarios.scenarios;
  const bool integer = spec.relaxation == Relaxation::kIpIp;
  const double weight = scenarios.empty() ? 0.0 : 1.0 / double(scenarios.size());
  for (int k = 0; k < static_cast<int>(scenarios.size()); ++k) {
    std::vector<int> z_cols;
    const auto per_wavelink = add_recourse_columns(m, spec, scenarios[k], k, integer, z_cols);
    add_capacity_rows(m, spec, per_wavelink, CapacitySource{nullptr, &x_cols}, k);
    Column eta;
    eta.key = VarKey::eta(k);
    eta.lb = 0.0;
    eta.ub = kInf;
    eta.obj = weight;
    const int e = m.add_column(eta);
    Row link;
    link.key = {RowKind::kEtaLink, -1, -1, -1, -1, -1, k};
    link.cols.push_back(e);
    link.vals.push_back(1.0);
    for (int z : z_cols) {
      link.cols.push_back(z);
      link.vals.push_back(-1.0);
    }
    link.sense = Sense::kLe;
    link.rhs = 0.0;
    m.add_row(std::move(link));
  }
  return m;
}

WavelinkLoad wavelink_load(const FormulationSpec& spec, const LpModel& model,
                           std::span<const double> values) {
  const Topology& t = spec.topology();
  WavelinkLoad load(std::size_t(t.num_arcs()) * t.num_wavelengths(), 0.0);
  for (int j = 0; j < model.num_cols(); ++j) {
    const VarKey& k = model.key(j);
    if (k.kind != VarKind::kX) continue;
    load[std::size_t(k.wavelength) * t.num_arcs() + k.arc] += values[j];
  }
  return load;
}

std::vector<double> arc_load(const FormulationSpec& spec, const WavelinkLoad& load) {
  const int num_arcs = spec.topology().num_arcs();
  std::vector<double> out(num_arcs, 0.0);
  for (std::size_t i = 0; i < load.size(); ++i) out[i % num_arcs] += load[i];
  return out;
}

double first_stage_value(const LpModel& model, std::span<const double> values) {
  double total = 0.0;
  for (int j = 0; j < model.num_cols(); ++j) {
    const Column& c = model.column(j);
    if (c.key.kind == VarKind::kX) total += c.obj * values[j];
  }
  return total;
}

std::vector<Lightpath> decode_first_stage(const FormulationSpec& spec, const LpModel& model,
                                          std::span<const double> values) {
  const Topology& t = spec.topology();
  // (s, d, w) -> support arcs, kept sorted by id
  std::map<std::tuple<int, int, int>, std::vector<ArcId>> support;
  for (int j = 0; j < model.num_cols(); ++j) {
    const VarKey& k = model.key(j);
    if (k.kind != VarKind::kX || values[j] < 0.5) continue;
    support[{k.s, k.d, k.wavelength}].push_back(k.arc);
  }
  std::vector<Lightpath> out;
  for (auto& [key, arcs] : support) {
    const auto [s, d, w] = key;
    std::sort(arcs.begin(), arcs.end());
    std::vector<char> used(t.num_arcs(), 0);
    std::vector<char> in_support(t.num_arcs(), 0);
    for (ArcId a : arcs) in_support[a] = 1;
    auto next_arc = [&](NodeId v) {
      ArcId best = -1;
      for (ArcId a : t.delta_out(v))
        if (in_support[a] && !used[a] && (best < 0 || a < best)) best = a;
      return best;
    };
    for (;;) {
      if (next_arc(s) < 0) break;
      Lightpath lp{s, d, w, {}};
      std::vector<NodeId> nodes{s};
      NodeId at = s;
      while (at != d) {
        const ArcId a = next_arc(at);
        if (a < 0) throw ModelError("first-stage flow is not conserved");
        used[a] = 1;
        lp.path.push_back(a);
        at = t.arc(a).head;
        if (auto it = std::find(nodes.begin(), nodes.end(), at); it != nodes.end()) {
          // Drop the cycle just closed.
          const auto keep = std::size_t(it - nodes.begin());
          lp.path.resize(keep);
          nodes.resize(keep + 1);
          continue;
        }
        nodes.push_back(at);
      }
      out.push_back(std::move(lp));
    }
  }
  return out;
}

double recourse_value(const FormulationSpec& spec, const WavelinkLoad& load, const DemandMatrix& xi,
                      bool integer) {
  if (xi.empty()) return 0.0;
  const LpModel m = build_recourse(spec, load, xi, integer);
  if (integer) {
    const MipSolution s = solve_mip(m);
    if (s.status != MipStatus::kOptimal) throw SolverError("integer recourse not solved to optimality");
    return s.objective;
  }
  const LpSolution s = solve_lp(m);
  if (s.status != LpStatus::kOptimal) throw SolverError("recourse LP not optimal: " + to_string(s.status));
  return s.objective;
}

}  // namespace srwa
