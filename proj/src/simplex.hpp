#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "srwa/lp_model.hpp"
#include "srwa/solver.hpp"

namespace srwa::detail {

// Bounded-variable revised primal simplex over
//   max c'x  s.t.  A x - r = 0,  l <= x <= u,  lo <= r <= hi
// with an explicit dense basis inverse. Phase 1 minimizes the sum of bound
// infeasibilities of the basic variables, so any basis is a valid start.
// Columns 0..n-1 are structural, n..n+m-1 are the row logicals r.
class SimplexEngine {
 public:
  enum Status : std::int8_t { kBasic = 0, kLower = 1, kUpper = 2, kZero = 3 };

  struct Basis {
    std::vector<std::int8_t> status;  // per variable (structural then logical)
  };

  SimplexEngine(const LpModel& model, const SolverConfig& config);

  int num_structural() const { return n_; }
  int num_rows() const { return m_; }

  void set_column_bounds(int j, double lb, double ub);
  double column_lb(int j) const { return lb_[j]; }
  double column_ub(int j) const { return ub_[j]; }
  void add_row(std::span<const int> cols, std::span<const double> vals, Sense sense, double rhs);

  LpStatus solve(const SimplexTrace* trace = nullptr);

  double objective() const;
  std::vector<double> primal() const;
  std::vector<double> duals() const;          // per row, valid after kOptimal
  std::vector<double> reduced_costs() const;  // per structural column
  long iterations() const { return iterations_; }

  Basis basis() const;
  void set_basis(const Basis& basis);

 private:
  using Entry = std::pair<int, double>;

  void slack_basis();
  void place_nonbasic(int j);
  bool refactor();
  void ensure_factored();
  void compute_basic_values();
  void compute_duals(bool phase1, std::vector<double>& y) const;
  double reduced_cost(int j, const std::vector<double>& y, bool phase1) const;
  void column_times_binv(int j, std::vector<double>& alpha) const;
  void pivot(int r, const std::vector<double>& alpha);
  double lagrangian_bound(const std::vector<double>& y) const;
  double basic_infeasibility() const;

  SolverConfig config_;
  int n_ = 0;
  int m_ = 0;
  std::vector<std::vector<Entry>> cols_;  // structural columns
  std::vector<double> cost_;
  std::vector<double> lb_;
  std::vector<double> ub_;
  std::vector<double> x_;
  std::vector<std::int8_t> status_;
  std::vector<int> head_;  // basic variable per basis position
  std::vector<double> binv_;  // column-major m x m
  bool factored_ = false;
  bool values_stale_ = true;
  long iterations_ = 0;
};

}  // namespace srwa::detail
