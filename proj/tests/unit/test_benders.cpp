#include <doctest.h>

#include <memory>
#include <random>

#include <nlohmann/json.hpp>

#include "rwa_oracle.hpp"
#include "srwa/benders.hpp"
#include "srwa/error.hpp"
#include "srwa/formulation.hpp"
#include "tableau_backend.hpp"

using namespace srwa;

namespace {

std::shared_ptr<const Topology> ring(int n, int w) {
  std::vector<std::pair<NodeId, NodeId>> f;
  for (int i = 0; i < n; ++i) f.emplace_back(i, (i + 1) % n);
  return std::make_shared<const Topology>(n, f, w);
}

std::shared_ptr<const Topology> random_topo(std::mt19937_64& gen, int nodes, int extra, int w) {
  return std::make_shared<const Topology>(oracle::random_topology(gen, nodes, extra, w));
}

FormulationSpec stochastic_spec(std::mt19937_64& gen, std::shared_ptr<const Topology> t, Relaxation r,
                                int first, int scenarios, int per_scenario, int occupied = 0) {
  FormulationSpec spec{Problem::kSmaxRwa, r, oracle::random_state(gen, t, occupied), {}, {}, {}};
  spec.new_demand = oracle::random_demand(gen, t->num_nodes(), first);
  for (int k = 0; k < scenarios; ++k)
    spec.scenarios.scenarios.push_back(oracle::random_demand(gen, t->num_nodes(), per_scenario));
  return spec;
}

// First-stage load of the lightpaths of a random state on an empty network.
WavelinkLoad random_integral_load(std::mt19937_64& gen, std::shared_ptr<const Topology> t, int lightpaths) {
  const oracle::Occupancy occ = oracle::occupancy_of(oracle::random_state(gen, t, lightpaths));
  return WavelinkLoad(occ.begin(), occ.end());
}

// LP-LP first stage merged with one relaxed recourse block whose arc
// capacity rows subtract the first-stage arc usage directly.
LpModel aggregated_lp(const FormulationSpec& spec) {
  LpModel m = build_first_stage(spec);
  m.relax_integrality();
  const std::vector<double> zero(spec.topology().num_arcs(), 0.0);
  const LpModel rec = build_relaxed_recourse(spec, zero, spec.scenarios.scenarios.at(0));
  std::vector<int> map(rec.num_cols());
  for (int j = 0; j < rec.num_cols(); ++j) map[j] = m.add_column(rec.column(j));
  const int first_cols = m.num_cols() - rec.num_cols();
  for (const Row& r : rec.rows()) {
    Row row = r;
    for (int& c : row.cols) c = map[c];
    if (r.key.kind == RowKind::kArcCapacity) {
      for (int j = 0; j < first_cols; ++j) {
        if (m.key(j).kind == VarKind::kX && m.key(j).arc == r.key.arc) {
          row.cols.push_back(j);
          row.vals.push_back(1.0);
        }
      }
      row.rhs = spec.arc_capacity(r.key.arc);
    }
    m.add_row(std::move(row));
  }
  return m;
}

double lp_objective(const LpModel& m) {
  const LpSolution s = solve_lp(m);
  REQUIRE(s.status == LpStatus::kOptimal);
  return s.objective;
}

}  // namespace

TEST_CASE("cut at an empty first stage with a huge eta estimate") {
  auto t = ring(4, 2);
  FormulationSpec spec{Problem::kSmaxRwa, Relaxation::kIpLp, NetworkState(t), {}, {}, {}};
  spec.new_demand.set(0, 2, 1);
  spec.scenarios.scenarios = {DemandMatrix{{{0, 1}, 2}, {{1, 3}, 1}, {{3, 2}, 3}}};
  const WavelinkLoad zero(std::size_t(t->num_arcs()) * 2, 0.0);
  const double q0 = recourse_value(spec, zero, spec.scenarios.scenarios[0]);
  auto cut = separate_x_cut(spec, zero, 1e6, 0);
  REQUIRE(cut.has_value());
  CHECK(cut->family == CutFamily::kX);
  CHECK(cut->rhs_at_load(zero, t->num_arcs()) == doctest::Approx(q0).epsilon(1e-9));
  CHECK(cut->subproblem_value == doctest::Approx(q0).epsilon(1e-9));
  CHECK_FALSE(separate_x_cut(spec, zero, q0, 0).has_value());
  CHECK_FALSE(separate_beta_cut(spec, arc_load(spec, zero), q0 + 1e-7, 0).has_value());
}

TEST_CASE("cuts are tight where generated and valid everywhere") {
  std::mt19937_64 gen(5);
  int checked = 0;
  for (int trial = 0; trial < 12; ++trial) {
    auto t = random_topo(gen, 5, 3, 2);
    FormulationSpec spec{Problem::kSmaxRwa, Relaxation::kIpLp, NetworkState(t), {}, {}, {}};
    spec.scenarios.scenarios = {oracle::random_demand(gen, 5, 4)};
    const DemandMatrix& xi = spec.scenarios.scenarios[0];
    const WavelinkLoad at = random_integral_load(gen, t, 2 + trial % 3);
    const Cut xc = make_x_cut(spec, at, 0);
    const Cut bc = make_beta_cut(spec, arc_load(spec, at), 0);
    const double q_at = recourse_value(spec, at, xi);
    CHECK(xc.rhs_at_load(at, t->num_arcs()) == doctest::Approx(q_at).epsilon(1e-7));
    CHECK(bc.rhs_at_load(at, t->num_arcs()) == doctest::Approx(bc.subproblem_value).epsilon(1e-7));
    CHECK(bc.subproblem_value >= q_at - 1e-7);
    for (int probe = 0; probe < 10; ++probe) {
      // Integral loads and their midpoints with another one.
      WavelinkLoad load = random_integral_load(gen, t, 1 + probe % 4);
      if (probe % 2) {
        const WavelinkLoad other = random_integral_load(gen, t, 2);
        for (std::size_t i = 0; i < load.size(); ++i) load[i] = 0.5 * (load[i] + other[i]);
      }
      const double q = recourse_value(spec, load, xi);
      const double relaxed =
          lp_objective(build_relaxed_recourse(spec, arc_load(spec, load), xi));
      CHECK(relaxed >= q - 1e-7);
      CHECK(q <= xc.rhs_at_load(load, t->num_arcs()) + 1e-7);
      CHECK(relaxed <= bc.rhs_at_load(load, t->num_arcs()) + 1e-7);
      ++checked;
    }
  }
  CHECK(checked >= 100);
}

TEST_CASE("cut pool rejects duplicates and counts families") {
  auto t = ring(4, 1);
  FormulationSpec spec{Problem::kSmaxRwa, Relaxation::kIpLp, NetworkState(t), {}, {}, {}};
  spec.scenarios.scenarios = {DemandMatrix{{{0, 2}, 1}}};
  const WavelinkLoad zero(t->num_arcs(), 0.0);
  CutPool pool;
  CHECK(pool.add(make_x_cut(spec, zero, 0)));
  CHECK_FALSE(pool.add(make_x_cut(spec, zero, 0)));
  CHECK(pool.add(make_beta_cut(spec, arc_load(spec, zero), 0)));
  CHECK(pool.count(CutFamily::kX) == 1);
  CHECK(pool.count(CutFamily::kBeta) == 1);
  CHECK(pool.size() == 2);
}

TEST_CASE("preprocessing without scenarios adds nothing") {
  auto t = ring(4, 2);
  FormulationSpec spec{Problem::kSmaxRwa, Relaxation::kIpLp, NetworkState(t), {}, {}, {}};
  spec.new_demand.set(0, 2, 2);
  const PreprocessResult r = preprocess_lp_lp(spec, {});
  CHECK(r.pool.size() == 0);
  CHECK(r.complete);
}

TEST_CASE("preprocessing converges to the aggregated LP relaxation") {
  std::mt19937_64 gen(11);
  for (int trial = 0; trial < 8; ++trial) {
    auto t = random_topo(gen, 4 + trial % 2, 2, 2);
    FormulationSpec spec = stochastic_spec(gen, t, Relaxation::kLpLp, 2, 1, 3, trial % 3);
    const PreprocessResult r = preprocess_lp_lp(spec, {});
    REQUIRE(r.complete);
    CHECK(r.lp_value == doctest::Approx(lp_objective(aggregated_lp(spec))).epsilon(1e-6));
    CHECK(r.pool.count(CutFamily::kX) == 0);
  }
}

TEST_CASE("all methods agree on small IP-LP instances") {
  std::mt19937_64 gen(23);
  for (int trial = 0; trial < 10; ++trial) {
    auto t = random_topo(gen, 4 + trial % 2, 2, 2);
    FormulationSpec spec = stochastic_spec(gen, t, Relaxation::kIpLp, 2 + trial % 2, 3, 3, trial % 2);
    BendersConfig ext{Method::kExtensive};
    BendersConfig bx{Method::kBendersX};
    BendersConfig bxb{Method::kBendersXBeta};
    const SolveResult a = solve(spec, ext);
    const SolveResult b = solve(spec, bx);
    const SolveResult c = solve(spec, bxb);
    REQUIRE(a.status == MipStatus::kOptimal);
    REQUIRE(b.status == MipStatus::kOptimal);
    REQUIRE(c.status == MipStatus::kOptimal);
    CHECK(b.objective == doctest::Approx(a.objective).epsilon(1e-6));
    CHECK(c.objective == doctest::Approx(a.objective).epsilon(1e-6));
    CHECK(b.n_beta_cuts == 0);
    for (const SolveResult* r : {&b, &c}) {
      for (int k = 0; k < 3; ++k) {
        const double q = recourse_value(spec, r->load, spec.scenarios.scenarios[k]);
        CHECK(r->eta[k] == doctest::Approx(q).epsilon(1e-5));
      }
    }
  }
}

TEST_CASE("SmaxLR Benders matches the extensive form") {
  std::mt19937_64 gen(29);
  auto t = ring(5, 2);
  FormulationSpec spec{Problem::kSmaxLr, Relaxation::kIpLp, NetworkState(t), {}, {}, {}};
  spec.current_demand = DemandMatrix{{{0, 2}, 1}, {{1, 3}, 1}, {{4, 2}, 1}};
  for (int k = 0; k < 3; ++k) spec.scenarios.scenarios.push_back(oracle::random_demand(gen, 5, 3));
  const SolveResult a = solve(spec, {Method::kExtensive});
  const SolveResult c = solve(spec, {Method::kBendersXBeta});
  REQUIRE(a.status == MipStatus::kOptimal);
  REQUIRE(c.status == MipStatus::kOptimal);
  CHECK(c.objective == doctest::Approx(a.objective).epsilon(1e-6));
  CHECK(c.first_stage.size() == 3);
}

TEST_CASE("no scenarios reduces to the deterministic problem") {
  auto t = ring(5, 2);
  FormulationSpec spec{Problem::kSmaxRwa, Relaxation::kIpLp, NetworkState(t), {}, {}, {}};
  spec.new_demand = DemandMatrix{{{0, 2}, 2}, {{1, 3}, 2}, {{3, 0}, 1}};
  FormulationSpec det = spec;
  det.problem = Problem::kMaxRwa;
  const MipSolution ref = solve_mip(build_first_stage(det));
  for (Method m : {Method::kExtensive, Method::kBendersX, Method::kBendersXBeta}) {
    const SolveResult r = solve(spec, {m});
    REQUIRE(r.status == MipStatus::kOptimal);
    CHECK(r.objective == doctest::Approx(ref.objective));
    CHECK(r.n_x_cuts + r.n_beta_cuts == 0);
  }
}

TEST_CASE("beta-only master bounds the IP-LP optimum from above") {
  std::mt19937_64 gen(31);
  for (int trial = 0; trial < 6; ++trial) {
    auto t = random_topo(gen, 5, 2, 2);
    FormulationSpec spec = stochastic_spec(gen, t, Relaxation::kIpLp, 2, 2, 4);
    BendersConfig beta_only{Method::kBendersXBeta};
    beta_only.separate_x_cuts = false;
    const SolveResult r = solve(spec, beta_only);
    const SolveResult exact = solve(spec, {Method::kExtensive});
    REQUIRE(r.status == MipStatus::kOptimal);
    CHECK(r.n_x_cuts == 0);
    CHECK(r.objective >= exact.objective - 1e-6);
  }
}

TEST_CASE("extensive IP-IP matches exhaustive two-stage search") {
  std::mt19937_64 gen(37);
  for (int trial = 0; trial < 8; ++trial) {
    auto t = random_topo(gen, 4, 1, 2);
    FormulationSpec spec = stochastic_spec(gen, t, Relaxation::kIpIp, 2, 2, 2, trial % 2);
    const SolveResult r = solve(spec, {Method::kExtensive});
    REQUIRE(r.status == MipStatus::kOptimal);
    const double expect = oracle::smax_rwa(*t, spec.new_demand, spec.scenarios.scenarios,
                                           oracle::occupancy_of(spec.state));
    CHECK(r.objective == doctest::Approx(expect).epsilon(1e-6));
  }
}

TEST_CASE("Benders rejects backends without duals and IP-IP") {
  auto t = ring(4, 2);
  FormulationSpec spec{Problem::kSmaxRwa, Relaxation::kIpLp, NetworkState(t), {}, {}, {}};
  spec.new_demand.set(0, 2, 1);
  spec.scenarios.scenarios = {DemandMatrix{{{1, 3}, 1}}};
  const oracle::TableauBackend tableau;
  CHECK_THROWS_AS(solve(spec, {Method::kBendersX}, {}, tableau), ConfigError);
  CHECK_THROWS_AS(solve(spec, {Method::kBendersXBeta}, {}, tableau), ConfigError);
  CHECK_THROWS_AS(preprocess_lp_lp(spec, {}, {}, tableau), ConfigError);
  spec.relaxation = Relaxation::kIpIp;
  CHECK_THROWS_AS(solve(spec, {Method::kBendersX}), ConfigError);
  CHECK_NOTHROW(solve(spec, {Method::kExtensive}));
}

TEST_CASE("second backend reproduces extensive objectives") {
  std::mt19937_64 gen(41);
  const oracle::TableauBackend tableau;
  for (int trial = 0; trial < 6; ++trial) {
    auto t = random_topo(gen, 4, 1, 2);
    FormulationSpec spec = stochastic_spec(gen, t, trial % 2 ? Relaxation::kIpIp : Relaxation::kIpLp, 2, 2, 2);
    const SolveResult a = solve(spec, {Method::kExtensive});
    const SolveResult b = solve(spec, {Method::kExtensive}, {}, tableau);
    REQUIRE(b.status == MipStatus::kOptimal);
    CHECK(b.objective == doctest::Approx(a.objective).epsilon(1e-6));
  }
}

TEST_CASE("stats report the solve") {
  auto t = ring(4, 2);
  FormulationSpec spec{Problem::kSmaxRwa, Relaxation::kIpLp, NetworkState(t), {}, {}, {}};
  spec.new_demand.set(0, 2, 1);
  spec.scenarios.scenarios = {DemandMatrix{{{1, 3}, 2}}, DemandMatrix{{{0, 2}, 2}}};
  const SolveResult r = solve(spec, {Method::kBendersXBeta});
  const auto j = r.stats();
  CHECK(j.at("method") == "BENDERS_xbeta");
  CHECK(j.at("objective").get<double>() == doctest::Approx(r.objective));
  CHECK(j.at("n_beta_cuts").get<int>() == r.n_beta_cuts);
  CHECK(j.contains("time_s"));
  CHECK(j.at("gap_pct").get<double>() <= 1e-4);
  CHECK(method_from_string("BENDERS_x") == Method::kBendersX);
  CHECK_THROWS_AS(method_from_string("bogus"), ConfigError);
}
