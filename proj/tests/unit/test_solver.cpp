#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "srwa/error.hpp"
#include "srwa/solver.hpp"

using namespace srwa;

namespace {

LpModel single_var(double ub, double row_rhs) {
  LpModel m;
  m.add_column({VarKey::beta(0), 0.0, ub, 1.0, false});
  m.add_row({RowKey{}, {0}, {1.0}, Sense::kLe, row_rhs});
  return m;
}

oracle::DenseLp random_lp(std::mt19937_64& gen, int n, int m, bool with_eq) {
  std::uniform_int_distribution<int> coef(-3, 3);
  std::uniform_int_distribution<int> bnd(0, 3);
  std::uniform_int_distribution<int> sense_pick(0, with_eq ? 2 : 1);
  oracle::DenseLp lp;
  for (int j = 0; j < n; ++j) {
    lp.c.push_back(coef(gen));
    const int lo = -bnd(gen) / 2;
    lp.lb.push_back(lo);
    lp.ub.push_back(lo + 1 + bnd(gen));
  }
  for (int i = 0; i < m; ++i) {
    std::vector<double> row(n);
    for (auto& v : row) v = coef(gen);
    lp.a.push_back(row);
    const int s = sense_pick(gen);
    lp.sense.push_back(s == 0 ? Sense::kLe : s == 1 ? Sense::kGe : Sense::kEq);
    lp.b.push_back(coef(gen) + (s == 1 ? -3 : 2));
  }
  return lp;
}

}  // namespace

TEST_CASE("lp: single bounded column, row dual") {
  const LpModel m = single_var(2.0, 1.0);
  const LpSolution s = solve_lp(m);
  REQUIRE(s.status == LpStatus::kOptimal);
  CHECK(s.objective == doctest::Approx(1.0));
  CHECK(s.duals[0] == doctest::Approx(1.0));
  CHECK(s.dual_objective(m) == doctest::Approx(1.0));
}

TEST_CASE("lp: infeasible empty row") {
  LpModel m;
  m.add_column({VarKey::beta(0), 0.0, 5.0, 1.0, false});
  m.add_row({RowKey{}, {0}, {0.0}, Sense::kGe, 1.0});
  CHECK(solve_lp(m).status == LpStatus::kInfeasible);
}

TEST_CASE("lp: unbounded") {
  LpModel m;
  m.add_column({VarKey::beta(0), 0.0, kInf, 1.0, false});
  m.add_column({VarKey::beta(1), 0.0, kInf, 0.0, false});
  m.add_row({RowKey{}, {0, 1}, {1.0, -1.0}, Sense::kLe, 1.0});
  CHECK(solve_lp(m).status == LpStatus::kUnbounded);
}

TEST_CASE("lp: scale guard rejects huge coefficients") {
  LpModel m;
  m.add_column({VarKey::beta(0), 0.0, 1.0, 1.0, false});
  m.add_row({RowKey{}, {0}, {1e12}, Sense::kLe, 1.0});
  CHECK_THROWS_AS(solve_lp(m), SolverError);
}

TEST_CASE("lp: random instances match vertex enumeration, strong duality holds") {
  std::mt19937_64 gen(7);
  int optimal = 0;
  for (int trial = 0; trial < 400; ++trial) {
    const int n = 2 + trial % 3;
    const int m = 1 + trial % 4;
    const auto lp = random_lp(gen, n, m, true);
    const double expect = oracle::vertex_enumeration(lp);
    const LpModel model = oracle::to_model(lp, false);
    const LpSolution s = solve_lp(model);
    if (!std::isfinite(expect)) {
      CHECK(s.status == LpStatus::kInfeasible);
      continue;
    }
    ++optimal;
    REQUIRE(s.status == LpStatus::kOptimal);
    CHECK(s.objective == doctest::Approx(expect).epsilon(1e-7));
    CHECK(model.max_violation(s.primal) <= 1e-7);
    CHECK(std::abs(s.dual_objective(model) - s.objective) <= 1e-6 * (1 + std::abs(s.objective)));
    for (int i = 0; i < model.num_rows(); ++i) {
      const Row& r = model.row(i);
      if (r.sense == Sense::kLe) CHECK(s.duals[i] >= -1e-9);
      if (r.sense == Sense::kGe) CHECK(s.duals[i] <= 1e-9);
    }
  }
  CHECK(optimal > 100);
}

TEST_CASE("lp: weak duality at every traced iteration") {
  std::mt19937_64 gen(11);
  for (int trial = 0; trial < 100; ++trial) {
    const auto lp = random_lp(gen, 4, 3, false);
    const double expect = oracle::vertex_enumeration(lp);
    if (!std::isfinite(expect)) continue;
    int calls = 0;
    const LpSolution s = solve_lp(oracle::to_model(lp, false), {}, [&](double primal, double dual) {
      ++calls;
      CHECK(dual >= expect - 1e-7);
      CHECK(primal <= expect + 1e-7);
    });
    CHECK(s.status == LpStatus::kOptimal);
  }
}

TEST_CASE("mip: small binary example") {
  LpModel m;
  m.add_column({VarKey::beta(0), 0.0, 1.0, 1.0, true});
  m.add_column({VarKey::beta(1), 0.0, 1.0, 1.0, true});
  m.add_row({RowKey{}, {0, 1}, {1.0, 1.0}, Sense::kLe, 1.5});
  const MipSolution s = solve_mip(m);
  CHECK(s.status == MipStatus::kOptimal);
  CHECK(s.objective == doctest::Approx(1.0));
  CHECK(s.gap >= 0.0);
}

TEST_CASE("mip: random instances match integer enumeration") {
  std::mt19937_64 gen(3);
  for (int trial = 0; trial < 300; ++trial) {
    const auto lp = random_lp(gen, 3 + trial % 2, 2 + trial % 3, trial % 3 == 0);
    const double expect = oracle::integer_enumeration(lp);
    const LpModel model = oracle::to_model(lp, true);
    const MipSolution s = solve_mip(model);
    if (!std::isfinite(expect)) {
      CHECK(s.status == MipStatus::kInfeasible);
      continue;
    }
    REQUIRE(s.status == MipStatus::kOptimal);
    CHECK(s.objective == doctest::Approx(expect));
    CHECK(model.max_violation(s.incumbent) <= 1e-6);
    for (std::size_t k = 1; k < s.trace.size(); ++k) {
      CHECK(s.trace[k].bound <= s.trace[k - 1].bound + 1e-9);
      CHECK(s.trace[k].incumbent >= s.trace[k - 1].incumbent);
    }
  }
}

TEST_CASE("mip: empty callback equals plain branch and bound; runs are deterministic") {
  std::mt19937_64 gen(5);
  for (int trial = 0; trial < 50; ++trial) {
    const LpModel model = oracle::to_model(random_lp(gen, 4, 3, false), true);
    const MipSolution a = solve_mip(model);
    const MipSolution b = solve_mip(model, {}, [](const NodeRelaxation&) { return std::vector<CutRow>{}; });
    const MipSolution c = solve_mip(model);
    CHECK(a.status == b.status);
    CHECK(a.node_count == b.node_count);
    CHECK(a.incumbent == b.incumbent);
    CHECK(a.node_count == c.node_count);
    CHECK(a.incumbent == c.incumbent);
  }
}

TEST_CASE("mip: lazy cut callback restricts the incumbent") {
  // max x0 + x1 over {0..3}^2, lazily enforce x0 + x1 <= 2.
  LpModel m;
  m.add_column({VarKey::beta(0), 0.0, 3.0, 1.0, true});
  m.add_column({VarKey::beta(1), 0.0, 3.0, 1.0, true});
  int calls = 0;
  const MipSolution s = solve_mip(m, {}, [&](const NodeRelaxation& node) {
    ++calls;
    std::vector<CutRow> cuts;
    if (node.values[0] + node.values[1] > 2 + 1e-9) cuts.push_back({{0, 1}, {1.0, 1.0}, Sense::kLe, 2.0, "test"});
    return cuts;
  });
  CHECK(s.status == MipStatus::kOptimal);
  CHECK(s.objective == doctest::Approx(2.0));
  CHECK(s.cut_counts.at("test") == 1);
  CHECK(calls >= 2);
}

TEST_CASE("backend: reference capabilities") {
  const auto caps = reference_backend().capabilities();
  CHECK(caps.duals);
  CHECK(caps.lazy_cuts);
}

TEST_CASE("config: non-positive tolerance rejected") {
  SolverConfig c;
  c.tol_feas = 0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
}
