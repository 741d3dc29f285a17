#include <cmath>

#include "simplex.hpp"
#include "srwa/error.hpp"
#include "srwa/solver.hpp"

namespace srwa {

void SolverConfig::validate() const {
  if (!(tol_feas > 0) || !(tol_int > 0) || !(tol_obj > 0)) {
    throw ConfigError("solver tolerances must be positive");
  }
  if (!(time_limit_seconds > 0)) throw ConfigError("time limit must be positive");
}

std::string to_string(LpStatus s) {
  switch (s) {
    case LpStatus::kOptimal: return "optimal";
    case LpStatus::kInfeasible: return "infeasible";
    case LpStatus::kUnbounded: return "unbounded";
    case LpStatus::kIterationLimit: return "iteration_limit";
  }
  return "unknown";
}

std::string to_string(MipStatus s) {
  switch (s) {
    case MipStatus::kOptimal: return "optimal";
    case MipStatus::kInfeasible: return "infeasible";
    case MipStatus::kUnbounded: return "unbounded";
    case MipStatus::kTimeLimit: return "time_limit";
    case MipStatus::kIterationLimit: return "iteration_limit";
  }
  return "unknown";
}

double LpSolution::dual_objective(const LpModel& model) const {
  double total = 0.0;
  for (int i = 0; i < model.num_rows(); ++i) {
    if (duals[i] != 0.0) total += duals[i] * model.row(i).rhs;
  }
  for (int j = 0; j < model.num_cols(); ++j) {
    const double d = reduced_costs[j];
    if (d == 0.0) continue;
    const Column& c = model.column(j);
    // Nonbasic columns sit at the bound the reduced-cost sign points to.
    const double at = d > 0 ? c.ub : c.lb;
    if (std::isfinite(at)) {
      total += d * at;
    } else {
      total += d * primal[j];
    }
  }
  return total;
}

LpSolution solve_lp(const LpModel& model, const SolverConfig& config, const SimplexTrace& trace) {
  config.validate();
  if (model.num_cols() < 1) throw SolverError("LP needs at least one column");
  detail::SimplexEngine engine(model, config);
  LpSolution sol;
  sol.status = engine.solve(trace ? &trace : nullptr);
  sol.iterations = engine.iterations();
  sol.primal = engine.primal();
  sol.objective = engine.objective();
  if (sol.status == LpStatus::kOptimal) {
    sol.duals = engine.duals();
    sol.reduced_costs = engine.reduced_costs();
  } else {
    sol.duals.assign(model.num_rows(), 0.0);
    sol.reduced_costs.assign(model.num_cols(), 0.0);
  }
  return sol;
}

const SolverBackend& reference_backend() {
  static const ReferenceBackend backend;
  return backend;
}

}  // namespace srwa
