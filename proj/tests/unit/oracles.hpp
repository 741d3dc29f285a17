#pragma once

// Brute-force reference solvers used only by tests.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include "srwa/lp_model.hpp"

namespace oracle {

// Dense small LP: max c'x, rows a_i x (<=,>=,=) b_i, finite bounds l <= x <= u.
// Optimum by enumerating every vertex (n tight constraints out of rows+bounds).
struct DenseLp {
  std::vector<double> c;
  std::vector<std::vector<double>> a;
  std::vector<srwa::Sense> sense;
  std::vector<double> b;
  std::vector<double> lb;
  std::vector<double> ub;
};

inline bool solve_square(std::vector<std::vector<double>> m, std::vector<double> rhs,
                         std::vector<double>& x) {
  const int n = static_cast<int>(rhs.size());
  for (int c = 0; c < n; ++c) {
    int p = c;
    for (int r = c + 1; r < n; ++r)
      if (std::abs(m[r][c]) > std::abs(m[p][c])) p = r;
    if (std::abs(m[p][c]) < 1e-10) return false;
    std::swap(m[p], m[c]);
    std::swap(rhs[p], rhs[c]);
    for (int r = 0; r < n; ++r) {
      if (r == c) continue;
      const double f = m[r][c] / m[c][c];
      if (f == 0) continue;
      for (int k = c; k < n; ++k) m[r][k] -= f * m[c][k];
      rhs[r] -= f * rhs[c];
    }
  }
  x.resize(n);
  for (int i = 0; i < n; ++i) x[i] = rhs[i] / m[i][i];
  return true;
}

inline bool feasible(const DenseLp& lp, const std::vector<double>& x, double tol = 1e-7) {
  const int n = static_cast<int>(lp.c.size());
  for (int j = 0; j < n; ++j)
    if (x[j] < lp.lb[j] - tol || x[j] > lp.ub[j] + tol) return false;
  for (std::size_t i = 0; i < lp.a.size(); ++i) {
    double s = 0;
    for (int j = 0; j < n; ++j) s += lp.a[i][j] * x[j];
    if (lp.sense[i] != srwa::Sense::kGe && s > lp.b[i] + tol) return false;
    if (lp.sense[i] != srwa::Sense::kLe && s < lp.b[i] - tol) return false;
  }
  return true;
}

// Returns -inf when infeasible.
inline double vertex_enumeration(const DenseLp& lp) {
  const int n = static_cast<int>(lp.c.size());
  const int m = static_cast<int>(lp.a.size());
  const int total = m + 2 * n;
  double best = -std::numeric_limits<double>::infinity();
  std::vector<int> pick;
  std::function<void(int)> rec = [&](int from) {
    if (static_cast<int>(pick.size()) == n) {
      std::vector<std::vector<double>> mat;
      std::vector<double> rhs;
      for (int k : pick) {
        std::vector<double> row(n, 0.0);
        if (k < m) {
          row = lp.a[k];
          rhs.push_back(lp.b[k]);
        } else if (k < m + n) {
          row[k - m] = 1;
          rhs.push_back(lp.lb[k - m]);
        } else {
          row[k - m - n] = 1;
          rhs.push_back(lp.ub[k - m - n]);
        }
        mat.push_back(row);
      }
      std::vector<double> x;
      if (solve_square(mat, rhs, x) && feasible(lp, x)) {
        double v = 0;
        for (int j = 0; j < n; ++j) v += lp.c[j] * x[j];
        best = std::max(best, v);
      }
      return;
    }
    for (int k = from; k < total; ++k) {
      pick.push_back(k);
      rec(k + 1);
      pick.pop_back();
    }
  };
  rec(0);
  return best;
}

// Integer points in the box, all columns integer.
inline double integer_enumeration(const DenseLp& lp) {
  const int n = static_cast<int>(lp.c.size());
  std::vector<double> x(n);
  double best = -std::numeric_limits<double>::infinity();
  std::function<void(int)> rec = [&](int j) {
    if (j == n) {
      if (feasible(lp, x)) {
        double v = 0;
        for (int k = 0; k < n; ++k) v += lp.c[k] * x[k];
        best = std::max(best, v);
      }
      return;
    }
    for (double v = std::ceil(lp.lb[j]); v <= lp.ub[j] + 1e-9; v += 1.0) {
      x[j] = v;
      rec(j + 1);
    }
  };
  rec(0);
  return best;
}

inline srwa::LpModel to_model(const DenseLp& lp, bool integer) {
  srwa::LpModel model;
  const int n = static_cast<int>(lp.c.size());
  for (int j = 0; j < n; ++j) {
    srwa::Column col;
    col.key = srwa::VarKey::beta(j);
    col.lb = lp.lb[j];
    col.ub = lp.ub[j];
    col.obj = lp.c[j];
    col.integer = integer;
    model.add_column(col);
  }
  for (std::size_t i = 0; i < lp.a.size(); ++i) {
    srwa::Row row;
    for (int j = 0; j < n; ++j) {
      if (lp.a[i][j] != 0) {
        row.cols.push_back(j);
        row.vals.push_back(lp.a[i][j]);
      }
    }
    row.sense = lp.sense[i];
    row.rhs = lp.b[i];
    model.add_row(row);
  }
  return model;
}

}  // namespace oracle
