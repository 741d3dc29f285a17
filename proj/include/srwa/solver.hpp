#pragma once

#include <functional>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "srwa/lp_model.hpp"

namespace srwa {

enum class BranchingRule { kMostFractional };
enum class NodeSelection { kBestBound };

struct SolverConfig {
  double tol_feas = 1e-7;
  double tol_int = 1e-6;
  double tol_obj = 1e-6;
  double time_limit_seconds = 600.0;
  NodeSelection node_selection = NodeSelection::kBestBound;
  BranchingRule branching = BranchingRule::kMostFractional;
  // Consecutive degenerate pivots before switching to Bland's rule.
  int stall_threshold = 50;
  long max_iterations = 5'000'000;

  void validate() const;
};

enum class LpStatus { kOptimal, kInfeasible, kUnbounded, kIterationLimit };
std::string to_string(LpStatus s);

struct LpSolution {
  LpStatus status = LpStatus::kIterationLimit;
  double objective = 0.0;
  std::vector<double> primal;          // per column
  std::vector<double> duals;           // per row; <= rows >= 0 at optimality (maximization)
  std::vector<double> reduced_costs;   // per column
  long iterations = 0;

  // Dual objective: sum_i dual_i * rhs_i + sum_j reduced_cost_j * (bound the column sits at).
  double dual_objective(const LpModel& model) const;
};

// Called once per phase-2 simplex iteration with the current primal objective
// and a Lagrangian upper bound built from the current row multipliers.
using SimplexTrace = std::function<void(double primal_objective, double dual_bound)>;

LpSolution solve_lp(const LpModel& model, const SolverConfig& config = {},
                    const SimplexTrace& trace = {});

enum class MipStatus { kOptimal, kInfeasible, kUnbounded, kTimeLimit, kIterationLimit };
std::string to_string(MipStatus s);

struct CutRow {
  std::vector<int> cols;
  std::vector<double> vals;
  Sense sense = Sense::kLe;
  double rhs = 0.0;
  std::string family;
};

struct NodeRelaxation {
  std::span<const double> values;
  bool integral = false;
  double objective = 0.0;
  int depth = 0;
  long node = 0;
};

// Returns violated cuts for the node relaxation (empty: accept). Cuts are
// added globally and the node is re-solved.
using CutCallback = std::function<std::vector<CutRow>(const NodeRelaxation&)>;

struct BoundTrace {
  double incumbent;
  double bound;
};

struct MipSolution {
  MipStatus status = MipStatus::kInfeasible;
  bool has_incumbent = false;
  std::vector<double> incumbent;
  double objective = -kInf;  // incumbent objective
  double bound = kInf;       // best dual bound
  double gap = kInf;
  long node_count = 0;
  long lp_iterations = 0;
  std::map<std::string, int> cut_counts;
  std::vector<BoundTrace> trace;  // (incumbent, global bound) after each node
  double seconds = 0.0;
};

MipSolution solve_mip(const LpModel& model, const SolverConfig& config = {},
                      const CutCallback& callback = {});

struct BackendCapabilities {
  bool duals = false;
  bool lazy_cuts = false;
};

// Pluggable LP/MIP engine. The in-tree reference backend supports both
// capabilities; adapters for external solvers implement the same surface.
class SolverBackend {
 public:
  virtual ~SolverBackend() = default;
  virtual std::string name() const = 0;
  virtual BackendCapabilities capabilities() const = 0;
  virtual LpSolution solve_lp(const LpModel& model, const SolverConfig& config) const = 0;
  virtual MipSolution solve_mip(const LpModel& model, const SolverConfig& config,
                                const CutCallback& callback) const = 0;
};

class ReferenceBackend final : public SolverBackend {
 public:
  std::string name() const override { return "reference"; }
  BackendCapabilities capabilities() const override { return {true, true}; }
  LpSolution solve_lp(const LpModel& model, const SolverConfig& config) const override {
    return srwa::solve_lp(model, config);
  }
  MipSolution solve_mip(const LpModel& model, const SolverConfig& config,
                        const CutCallback& callback) const override {
    return srwa::solve_mip(model, config, callback);
  }
};

const SolverBackend& reference_backend();

}  // namespace srwa
