#include "simplex.hpp"

#include <algorithm>
#include <cmath>

#include "srwa/error.hpp"

namespace srwa::detail {
namespace {

constexpr double kPivotTol = 1e-9;
constexpr double kDualTol = 1e-9;
constexpr double kSingularTol = 1e-11;
constexpr double kMaxCoefficient = 1e9;
constexpr int kRefactorInterval = 100;

}  // namespace

SimplexEngine::SimplexEngine(const LpModel& model, const SolverConfig& config)
    : config_(config), n_(model.num_cols()) {
  cols_.resize(n_);
  cost_.reserve(n_ + model.num_rows());
  lb_.reserve(n_ + model.num_rows());
  ub_.reserve(n_ + model.num_rows());
  for (const Column& c : model.columns()) {
    if (std::abs(c.obj) > kMaxCoefficient) throw SolverError("objective coefficient exceeds 1e9");
    cost_.push_back(c.obj);
    lb_.push_back(c.lb);
    ub_.push_back(c.ub);
  }
  x_.assign(n_, 0.0);
  status_.assign(n_, kLower);
  for (int j = 0; j < n_; ++j) place_nonbasic(j);
  for (const Row& r : model.rows()) add_row(r.cols, r.vals, r.sense, r.rhs);
}

void SimplexEngine::place_nonbasic(int j) {
  if (std::isfinite(lb_[j])) {
    status_[j] = kLower;
    x_[j] = lb_[j];
  } else if (std::isfinite(ub_[j])) {
    status_[j] = kUpper;
    x_[j] = ub_[j];
  } else {
    status_[j] = kZero;
    x_[j] = 0.0;
  }
}

void SimplexEngine::add_row(std::span<const int> cols, std::span<const double> vals, Sense sense,
                            double rhs) {
  if (std::abs(rhs) > kMaxCoefficient && std::isfinite(rhs)) {
    throw SolverError("right-hand side exceeds 1e9");
  }
  const int row = m_;
  double activity = 0.0;
  std::vector<double> basic_coef;  // row coefficients on current basic variables
  if (factored_) basic_coef.assign(m_, 0.0);
  for (std::size_t k = 0; k < cols.size(); ++k) {
    const int j = cols[k];
    const double v = vals[k];
    if (std::abs(v) > kMaxCoefficient) throw SolverError("constraint coefficient exceeds 1e9");
    if (v == 0.0) continue;
    cols_.at(j).emplace_back(row, v);
    activity += v * x_[j];
  }
  const double lo = sense == Sense::kLe ? -kInf : rhs;
  const double hi = sense == Sense::kGe ? kInf : rhs;
  cost_.push_back(0.0);
  lb_.push_back(lo);
  ub_.push_back(hi);
  x_.push_back(activity);
  status_.push_back(kBasic);

  if (factored_) {
    // Extend the inverse: new logical is basic in the new position.
    const int old_m = m_;
    for (int p = 0; p < old_m; ++p) {
      const int var = head_[p];
      if (var < n_) {
        for (const auto& [r, v] : cols_[var]) {
          if (r == row) basic_coef[p] += v;
        }
      }
    }
    std::vector<double> next(std::size_t(old_m + 1) * (old_m + 1), 0.0);
    for (int k = 0; k < old_m; ++k) {
      double acc = 0.0;
      const double* colk = &binv_[std::size_t(k) * old_m];
      for (int p = 0; p < old_m; ++p) {
        next[std::size_t(k) * (old_m + 1) + p] = colk[p];
        acc += basic_coef[p] * colk[p];
      }
      next[std::size_t(k) * (old_m + 1) + old_m] = acc;
    }
    next[std::size_t(old_m) * (old_m + 1) + old_m] = -1.0;
    binv_.swap(next);
  }
  head_.push_back(n_ + row);
  m_ = row + 1;
}

void SimplexEngine::set_column_bounds(int j, double lb, double ub) {
  lb_.at(j) = lb;
  ub_.at(j) = ub;
  if (status_[j] != kBasic) {
    if (status_[j] == kUpper && std::isfinite(ub)) {
      x_[j] = ub;
    } else {
      place_nonbasic(j);
    }
  }
  values_stale_ = true;
}

void SimplexEngine::slack_basis() {
  for (int j = 0; j < n_; ++j) place_nonbasic(j);
  head_.resize(m_);
  for (int i = 0; i < m_; ++i) {
    head_[i] = n_ + i;
    status_[n_ + i] = kBasic;
  }
  factored_ = false;
  values_stale_ = true;
}

SimplexEngine::Basis SimplexEngine::basis() const { return {status_}; }

void SimplexEngine::set_basis(const Basis& basis) {
  const int total = n_ + m_;
  std::vector<std::int8_t> st = basis.status;
  if (static_cast<int>(st.size()) > total) {
    slack_basis();
    return;
  }
  // Rows added after the basis was recorded keep their logicals basic.
  while (static_cast<int>(st.size()) < total) st.push_back(kBasic);
  if (factored_ && st == status_) return;
  int basic = 0;
  for (auto s : st) basic += s == kBasic ? 1 : 0;
  if (basic != m_) {
    slack_basis();
    return;
  }
  status_ = st;
  head_.clear();
  for (int j = 0; j < total; ++j) {
    if (status_[j] == kBasic) {
      head_.push_back(j);
    } else if (status_[j] == kLower && std::isfinite(lb_[j])) {
      x_[j] = lb_[j];
    } else if (status_[j] == kUpper && std::isfinite(ub_[j])) {
      x_[j] = ub_[j];
    } else {
      place_nonbasic(j);
    }
  }
  factored_ = false;
  values_stale_ = true;
}

bool SimplexEngine::refactor() {
  const int m = m_;
  std::vector<int> row_is_logical(m, -1);  // basis position of the logical, or -1
  std::vector<int> structural_pos;          // basis positions of structurals
  for (int p = 0; p < m; ++p) {
    const int var = head_[p];
    if (var >= n_) {
      row_is_logical[var - n_] = p;
    } else {
      structural_pos.push_back(p);
    }
  }
  std::vector<int> free_rows;  // rows R without a basic logical
  std::vector<int> rindex(m, -1);
  for (int i = 0; i < m; ++i) {
    if (row_is_logical[i] < 0) {
      rindex[i] = static_cast<int>(free_rows.size());
      free_rows.push_back(i);
    }
  }
  const int k = static_cast<int>(structural_pos.size());
  if (static_cast<int>(free_rows.size()) != k) return false;

  // Invert A_RC by Gauss-Jordan with partial pivoting.
  std::vector<double> a(std::size_t(k) * k, 0.0);
  std::vector<double> inv(std::size_t(k) * k, 0.0);
  for (int q = 0; q < k; ++q) {
    for (const auto& [r, v] : cols_[head_[structural_pos[q]]]) {
      if (rindex[r] >= 0) a[std::size_t(rindex[r]) * k + q] += v;
    }
    inv[std::size_t(q) * k + q] = 1.0;
  }
  for (int c = 0; c < k; ++c) {
    int p = c;
    double best = std::abs(a[std::size_t(c) * k + c]);
    for (int r = c + 1; r < k; ++r) {
      const double v = std::abs(a[std::size_t(r) * k + c]);
      if (v > best) {
        best = v;
        p = r;
      }
    }
    if (best < kSingularTol) return false;
    if (p != c) {
      std::swap_ranges(a.begin() + std::ptrdiff_t(p) * k, a.begin() + std::ptrdiff_t(p + 1) * k,
                       a.begin() + std::ptrdiff_t(c) * k);
      std::swap_ranges(inv.begin() + std::ptrdiff_t(p) * k,
                       inv.begin() + std::ptrdiff_t(p + 1) * k,
                       inv.begin() + std::ptrdiff_t(c) * k);
    }
    const double piv = 1.0 / a[std::size_t(c) * k + c];
    double* ac = &a[std::size_t(c) * k];
    double* ic = &inv[std::size_t(c) * k];
    for (int t = 0; t < k; ++t) {
      ac[t] *= piv;
      ic[t] *= piv;
    }
    for (int r = 0; r < k; ++r) {
      if (r == c) continue;
      double* ar = &a[std::size_t(r) * k];
      const double f = ar[c];
      if (f == 0.0) continue;
      double* ir = &inv[std::size_t(r) * k];
      for (int t = c; t < k; ++t) ar[t] -= f * ac[t];
      for (int t = 0; t < k; ++t) ir[t] -= f * ic[t];
    }
  }
  // inv[q][t] is (A_RC)^{-1}: structural q, free-row t.
  binv_.assign(std::size_t(m) * m, 0.0);
  for (int q = 0; q < k; ++q) {
    const int p = structural_pos[q];
    for (int t = 0; t < k; ++t) {
      binv_[std::size_t(free_rows[t]) * m + p] = inv[std::size_t(q) * k + t];
    }
  }
  for (int s = 0; s < m; ++s) {
    const int p = row_is_logical[s];
    if (p >= 0) binv_[std::size_t(s) * m + p] = -1.0;
  }
  // Logical rows: sum over structurals of A[s][C_q] * inv[q][:].
  for (int q = 0; q < k; ++q) {
    for (const auto& [r, v] : cols_[head_[structural_pos[q]]]) {
      const int p = row_is_logical[r];
      if (p < 0) continue;
      const double* iq = &inv[std::size_t(q) * k];
      for (int t = 0; t < k; ++t) binv_[std::size_t(free_rows[t]) * m + p] += v * iq[t];
    }
  }
  factored_ = true;
  return true;
}

void SimplexEngine::ensure_factored() {
  if (head_.size() != static_cast<std::size_t>(m_)) slack_basis();
  if (!factored_ && !refactor()) {
    slack_basis();
    if (!refactor()) throw SolverError("slack basis failed to factor");
  }
  if (values_stale_) compute_basic_values();
}

void SimplexEngine::compute_basic_values() {
  const int m = m_;
  std::vector<double> v(m, 0.0);
  for (int j = 0; j < n_; ++j) {
    if (status_[j] == kBasic || x_[j] == 0.0) continue;
    for (const auto& [r, a] : cols_[j]) v[r] -= a * x_[j];
  }
  for (int i = 0; i < m; ++i) {
    const int j = n_ + i;
    if (status_[j] != kBasic) v[i] += x_[j];
  }
  std::vector<double> xb(m, 0.0);
  for (int c = 0; c < m; ++c) {
    if (v[c] == 0.0) continue;
    const double* col = &binv_[std::size_t(c) * m];
    for (int p = 0; p < m; ++p) xb[p] += col[p] * v[c];
  }
  for (int p = 0; p < m; ++p) x_[head_[p]] = xb[p];
  values_stale_ = false;
}

void SimplexEngine::compute_duals(bool phase1, std::vector<double>& y) const {
  const int m = m_;
  const double tol = config_.tol_feas;
  std::vector<double> cb(m, 0.0);
  for (int p = 0; p < m; ++p) {
    const int var = head_[p];
    if (phase1) {
      if (x_[var] < lb_[var] - tol) {
        cb[p] = 1.0;
      } else if (x_[var] > ub_[var] + tol) {
        cb[p] = -1.0;
      }
    } else {
      cb[p] = cost_[var];
    }
  }
  y.assign(m, 0.0);
  for (int c = 0; c < m; ++c) {
    const double* col = &binv_[std::size_t(c) * m];
    double acc = 0.0;
    for (int p = 0; p < m; ++p) acc += cb[p] * col[p];
    y[c] = acc;
  }
}

double SimplexEngine::reduced_cost(int j, const std::vector<double>& y, bool phase1) const {
  if (j >= n_) return y[j - n_];
  double d = phase1 ? 0.0 : cost_[j];
  for (const auto& [r, a] : cols_[j]) d -= y[r] * a;
  return d;
}

void SimplexEngine::column_times_binv(int j, std::vector<double>& alpha) const {
  const int m = m_;
  alpha.assign(m, 0.0);
  auto axpy = [&](int c, double a) {
    const double* col = &binv_[std::size_t(c) * m];
    for (int p = 0; p < m; ++p) alpha[p] += a * col[p];
  };
  if (j >= n_) {
    axpy(j - n_, -1.0);
  } else {
    for (const auto& [r, a] : cols_[j]) axpy(r, a);
  }
}

void SimplexEngine::pivot(int r, const std::vector<double>& alpha) {
  const int m = m_;
  const double inv_piv = 1.0 / alpha[r];
  for (int c = 0; c < m; ++c) {
    double* col = &binv_[std::size_t(c) * m];
    const double t = col[r] * inv_piv;
    if (t != 0.0) {
      for (int p = 0; p < m; ++p) col[p] -= alpha[p] * t;
    }
    col[r] = t;
  }
}

double SimplexEngine::lagrangian_bound(const std::vector<double>& y) const {
  double bound = 0.0;
  auto add = [&](double d, double lo, double hi) {
    if (d > 0) {
      bound += std::isfinite(hi) ? d * hi : kInf;
    } else if (d < 0) {
      bound += std::isfinite(lo) ? d * lo : kInf;
    }
  };
  for (int j = 0; j < n_; ++j) add(reduced_cost(j, y, false), lb_[j], ub_[j]);
  for (int i = 0; i < m_; ++i) add(y[i], lb_[n_ + i], ub_[n_ + i]);
  return bound;
}

double SimplexEngine::basic_infeasibility() const {
  double worst = 0.0;
  for (int p = 0; p < m_; ++p) {
    const int var = head_[p];
    worst = std::max({worst, lb_[var] - x_[var], x_[var] - ub_[var]});
  }
  return worst;
}

LpStatus SimplexEngine::solve(const SimplexTrace* trace) {
  ensure_factored();
  const double tol = config_.tol_feas;
  int since_refactor = 0;
  int degenerate = 0;
  int rechecks = 0;
  bool bland = false;
  std::vector<double> y;
  std::vector<double> alpha;
  const long start_iterations = iterations_;

  for (;;) {
    if (iterations_ - start_iterations >= config_.max_iterations) return LpStatus::kIterationLimit;
    if (since_refactor >= kRefactorInterval) {
      if (!refactor()) {
        slack_basis();
        refactor();
      }
      compute_basic_values();
      since_refactor = 0;
    }
    const bool phase1 = basic_infeasibility() > tol;
    compute_duals(phase1, y);

    // Pricing.
    int q = -1;
    double dq = 0.0;
    double best = 0.0;
    const int total = n_ + m_;
    for (int j = 0; j < total; ++j) {
      const auto st = status_[j];
      if (st == kBasic || lb_[j] == ub_[j]) continue;
      const double d = reduced_cost(j, y, phase1);
      const bool eligible = (st == kLower && d > kDualTol) || (st == kUpper && d < -kDualTol) ||
                            (st == kZero && std::abs(d) > kDualTol);
      if (!eligible) continue;
      if (bland) {
        q = j;
        dq = d;
        break;
      }
      if (std::abs(d) > best) {
        best = std::abs(d);
        q = j;
        dq = d;
      }
    }

    if (q < 0) {
      // Confirm with a fresh factorization before declaring the outcome.
      if (since_refactor > 0 && rechecks < 3) {
        ++rechecks;
        if (!refactor()) {
          slack_basis();
          refactor();
        }
        compute_basic_values();
        since_refactor = 0;
        continue;
      }
      return phase1 ? LpStatus::kInfeasible : LpStatus::kOptimal;
    }

    if (!phase1 && trace && *trace) (*trace)(objective(), lagrangian_bound(y));

    const double dir = dq > 0 ? 1.0 : -1.0;
    column_times_binv(q, alpha);

    // Ratio test. rate_p: change of basic p per unit step.
    int leave = -1;
    double step = kInf;
    double leave_bound = 0.0;
    auto limit_of = [&](int p, double rate, double slack, double& bound_out) -> double {
      const int var = head_[p];
      const double xv = x_[var];
      if (rate < 0) {
        double bound;
        if (phase1 && xv > ub_[var] + tol) {
          bound = ub_[var];
        } else if (phase1 && xv < lb_[var] - tol) {
          return kInf;
        } else {
          bound = lb_[var];
        }
        if (!std::isfinite(bound)) return kInf;
        bound_out = bound;
        return (xv - bound + slack) / -rate;
      }
      double bound;
      if (phase1 && xv < lb_[var] - tol) {
        bound = lb_[var];
      } else if (phase1 && xv > ub_[var] + tol) {
        return kInf;
      } else {
        bound = ub_[var];
      }
      if (!std::isfinite(bound)) return kInf;
      bound_out = bound;
      return (bound - xv + slack) / rate;
    };

    if (bland) {
      int leave_var = -1;
      for (int p = 0; p < m_; ++p) {
        if (std::abs(alpha[p]) <= kPivotTol) continue;
        double b = 0.0;
        const double t = std::max(0.0, limit_of(p, -dir * alpha[p], 0.0, b));
        if (t < step - 1e-12 || (t <= step + 1e-12 && leave >= 0 && head_[p] < leave_var)) {
          step = t;
          leave = p;
          leave_var = head_[p];
          leave_bound = b;
        }
      }
    } else {
      double relaxed = kInf;
      for (int p = 0; p < m_; ++p) {
        if (std::abs(alpha[p]) <= kPivotTol) continue;
        double b = 0.0;
        relaxed = std::min(relaxed, limit_of(p, -dir * alpha[p], tol, b));
      }
      if (std::isfinite(relaxed)) {
        double best_alpha = 0.0;
        for (int p = 0; p < m_; ++p) {
          if (std::abs(alpha[p]) <= kPivotTol) continue;
          double b = 0.0;
          const double t = limit_of(p, -dir * alpha[p], 0.0, b);
          if (t <= relaxed && std::abs(alpha[p]) > best_alpha) {
            best_alpha = std::abs(alpha[p]);
            leave = p;
            step = std::max(0.0, t);
            leave_bound = b;
          }
        }
      }
    }

    const double range = ub_[q] - lb_[q];
    const bool flip = std::isfinite(range) && range <= step;
    if (!flip && leave < 0) {
      if (phase1) {
        // Cannot happen with exact arithmetic; refresh and retry once.
        if (rechecks++ < 3) {
          refactor();
          compute_basic_values();
          since_refactor = 0;
          continue;
        }
        return LpStatus::kInfeasible;
      }
      return LpStatus::kUnbounded;
    }
    const double t = flip ? range : step;

    for (int p = 0; p < m_; ++p) {
      if (alpha[p] != 0.0) x_[head_[p]] -= dir * alpha[p] * t;
    }
    if (flip) {
      if (dir > 0) {
        status_[q] = kUpper;
        x_[q] = ub_[q];
      } else {
        status_[q] = kLower;
        x_[q] = lb_[q];
      }
    } else {
      x_[q] += dir * t;
      const int out = head_[leave];
      x_[out] = leave_bound;
      status_[out] = (leave_bound == lb_[out]) ? kLower : kUpper;
      pivot(leave, alpha);
      head_[leave] = q;
      status_[q] = kBasic;
      ++since_refactor;
    }
    ++iterations_;

    if (t <= 1e-12) {
      if (++degenerate > config_.stall_threshold) bland = true;
    } else {
      degenerate = 0;
      bland = false;
    }
  }
}

double SimplexEngine::objective() const {
  double z = 0.0;
  for (int j = 0; j < n_; ++j) z += cost_[j] * x_[j];
  return z;
}

std::vector<double> SimplexEngine::primal() const {
  return std::vector<double>(x_.begin(), x_.begin() + n_);
}

std::vector<double> SimplexEngine::duals() const {
  std::vector<double> y;
  compute_duals(false, y);
  return y;
}

std::vector<double> SimplexEngine::reduced_costs() const {
  std::vector<double> y;
  compute_duals(false, y);
  std::vector<double> d(n_);
  for (int j = 0; j < n_; ++j) d[j] = status_[j] == kBasic ? 0.0 : reduced_cost(j, y, false);
  return d;
}

}  // namespace srwa::detail
