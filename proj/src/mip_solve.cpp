#include <algorithm>
#include <chrono>
#include <cmath>
#include <queue>

#include "simplex.hpp"
#include "srwa/error.hpp"
#include "srwa/solver.hpp"

namespace srwa {
namespace {

struct Node {
  long id = 0;
  int depth = 0;
  double bound = kInf;
  std::vector<double> lb;  // integer-column bounds, parallel to int_cols
  std::vector<double> ub;
  detail::SimplexEngine::Basis basis;
};

// Best bound first; among equal bounds the most recent node (plunging).
struct NodeOrder {
  bool operator()(const Node& a, const Node& b) const {
    if (a.bound != b.bound) return a.bound < b.bound;
    return a.id < b.id;
  }
};

double relative_gap(double incumbent, double bound) {
  if (!std::isfinite(incumbent) || !std::isfinite(bound)) return kInf;
  return std::max(0.0, bound - incumbent) / std::max(1.0, std::abs(incumbent));
}

}  // namespace

MipSolution solve_mip(const LpModel& model, const SolverConfig& config, const CutCallback& callback) {
  config.validate();
  using Clock = std::chrono::steady_clock;
  const auto start = Clock::now();
  auto elapsed = [&] { return std::chrono::duration<double>(Clock::now() - start).count(); };

  MipSolution result;
  detail::SimplexEngine engine(model, config);

  std::vector<int> int_cols;
  for (int j = 0; j < model.num_cols(); ++j) {
    if (model.column(j).integer) int_cols.push_back(j);
  }

  std::priority_queue<Node, std::vector<Node>, NodeOrder> open;
  long next_id = 0;
  {
    Node root;
    root.id = next_id++;
    for (int j : int_cols) {
      root.lb.push_back(std::ceil(model.column(j).lb - config.tol_int));
      root.ub.push_back(std::floor(model.column(j).ub + config.tol_int));
    }
    open.push(std::move(root));
  }

  double incumbent_value = -kInf;
  bool hit_time_limit = false;
  bool hit_iteration_limit = false;
  bool unbounded = false;

  auto prune_threshold = [&] {
    if (!std::isfinite(incumbent_value)) return -kInf;
    return incumbent_value + config.tol_obj * std::max(1.0, std::abs(incumbent_value));
  };
  auto global_bound = [&](double current) {
    double b = std::isfinite(current) ? current : -kInf;
    if (!open.empty()) b = std::max(b, open.top().bound);
    return std::max(b, incumbent_value);
  };

  while (!open.empty()) {
    if (elapsed() > config.time_limit_seconds) {
      hit_time_limit = true;
      break;
    }
    Node node = open.top();
    open.pop();
    if (node.bound <= prune_threshold()) continue;

    for (std::size_t k = 0; k < int_cols.size(); ++k) {
      engine.set_column_bounds(int_cols[k], node.lb[k], node.ub[k]);
    }
    if (!node.basis.status.empty()) engine.set_basis(node.basis);
    ++result.node_count;

    double node_value = -kInf;
    for (;;) {
      const LpStatus st = engine.solve();
      if (st == LpStatus::kInfeasible) break;
      if (st == LpStatus::kUnbounded) {
        unbounded = true;
        break;
      }
      if (st == LpStatus::kIterationLimit) {
        hit_iteration_limit = true;
        break;
      }
      node_value = engine.objective();
      if (node_value <= prune_threshold()) break;

      std::vector<double> x = engine.primal();
      int branch_col = -1;
      double best_frac = 0.0;
      for (std::size_t k = 0; k < int_cols.size(); ++k) {
        const double v = x[int_cols[k]];
        const double f = v - std::floor(v);
        const double frac = std::min(f, 1.0 - f);
        if (frac > config.tol_int && frac > best_frac + 1e-12) {
          best_frac = frac;
          branch_col = static_cast<int>(k);
        }
      }
      const bool integral = branch_col < 0;

      if (callback) {
        NodeRelaxation relax{x, integral, node_value, node.depth, result.node_count};
        std::vector<CutRow> cuts = callback(relax);
        if (!cuts.empty()) {
          for (const CutRow& c : cuts) {
            engine.add_row(c.cols, c.vals, c.sense, c.rhs);
            ++result.cut_counts[c.family];
          }
          continue;
        }
      }

      if (integral) {
        for (int j : int_cols) x[j] = std::round(x[j]);
        incumbent_value = model.objective(x);
        result.incumbent = std::move(x);
        result.has_incumbent = true;
        break;
      }

      // Branch on the most fractional column (lowest index on ties).
      const int j = int_cols[branch_col];
      const double v = x[j];
      auto basis = engine.basis();
      Node down;
      down.depth = node.depth + 1;
      down.bound = node_value;
      down.lb = node.lb;
      down.ub = node.ub;
      down.ub[branch_col] = std::floor(v);
      down.basis = basis;
      Node up = down;
      up.ub[branch_col] = node.ub[branch_col];
      up.lb[branch_col] = std::ceil(v);
      // Rounding direction explored first: the closer integer.
      if (v - std::floor(v) >= 0.5) {
        down.id = next_id++;
        up.id = next_id++;
      } else {
        up.id = next_id++;
        down.id = next_id++;
      }
      open.push(std::move(down));
      open.push(std::move(up));
      break;
    }
    result.trace.push_back({incumbent_value, global_bound(-kInf)});
    if (unbounded && !result.has_incumbent && result.node_count == 1) break;
    if (hit_iteration_limit) break;
    if (result.has_incumbent && !open.empty() &&
        relative_gap(incumbent_value, open.top().bound) <= config.tol_obj) {
      // Remaining nodes cannot improve beyond tolerance.
      while (!open.empty()) open.pop();
    }
  }

  result.lp_iterations = engine.iterations();
  result.seconds = elapsed();
  result.objective = incumbent_value;
  if (unbounded && !result.has_incumbent) {
    result.status = MipStatus::kUnbounded;
    result.bound = kInf;
  } else if (hit_time_limit || hit_iteration_limit) {
    result.status = hit_time_limit ? MipStatus::kTimeLimit : MipStatus::kIterationLimit;
    result.bound = global_bound(-kInf);
    if (!std::isfinite(result.bound)) result.bound = kInf;
  } else if (!result.has_incumbent) {
    result.status = MipStatus::kInfeasible;
    result.bound = -kInf;
  } else {
    result.status = MipStatus::kOptimal;
    result.bound = std::max(incumbent_value, global_bound(-kInf));
  }
  result.gap = result.has_incumbent ? relative_gap(incumbent_value, result.bound) : kInf;
  return result;
}

}  // namespace srwa
