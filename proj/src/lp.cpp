#include "mdr/lp.hpp"

#include <cmath>
#include <cstddef>
#include <stdexcept>

namespace mdr::detail {

namespace {
constexpr double kPivotEps = 1e-11;
}

LpFeasibility lp_feasible(int num_vars, std::vector<LinearRow> rows, double slack_tol) {
  const std::size_t n = static_cast<std::size_t>(num_vars);
  const std::size_t m = rows.size();
  for (auto& r : rows) {
    if (r.coeffs.size() != n) throw std::invalid_argument("row width mismatch");
    r.rhs += (r.sense == RowSense::le) ? slack_tol : -slack_tol;
  }

  // Standard form: normalize rhs >= 0, add one slack per row, add an
  // artificial where the slack cannot serve as the initial basic variable.
  // Columns: [0, n) structural, [n, n+m) slacks, [n+m, ...) artificials.
  std::vector<std::vector<double>> t(m, std::vector<double>(n + m, 0.0));
  std::vector<double> rhs(m);
  std::vector<int> basis(m, -1);
  std::vector<std::size_t> art_rows;
  for (std::size_t i = 0; i < m; ++i) {
    double sign = 1.0;
    double slack = (rows[i].sense == RowSense::le) ? 1.0 : -1.0;
    double b = rows[i].rhs;
    if (b < 0.0) {
      sign = -1.0;
      slack = -slack;
      b = -b;
    }
    for (std::size_t j = 0; j < n; ++j) t[i][j] = sign * rows[i].coeffs[j];
    t[i][n + i] = slack;
    rhs[i] = b;
    if (slack > 0.0) {
      basis[i] = static_cast<int>(n + i);
    } else {
      art_rows.push_back(i);
    }
  }
  const std::size_t num_art = art_rows.size();
  const std::size_t width = n + m + num_art;
  for (auto& row : t) row.resize(width, 0.0);
  for (std::size_t k = 0; k < num_art; ++k) {
    t[art_rows[k]][n + m + k] = 1.0;
    basis[art_rows[k]] = static_cast<int>(n + m + k);
  }

  // Phase-1 objective: minimize the sum of artificials.  Price out the
  // artificial basic rows into the objective row.
  std::vector<double> obj(width, 0.0);
  double obj_rhs = 0.0;
  for (std::size_t i : art_rows) {
    for (std::size_t j = 0; j < width; ++j) obj[j] += t[i][j];
    obj_rhs += rhs[i];
  }
  for (std::size_t k = 0; k < num_art; ++k) obj[n + m + k] = 0.0;  // reduced cost of basics

  const std::size_t enter_limit = n + m;  // artificials never re-enter
  while (true) {
    // Bland: smallest column with positive reduced objective coefficient.
    std::size_t enter = width;
    for (std::size_t j = 0; j < enter_limit; ++j) {
      if (obj[j] > kPivotEps) {
        enter = j;
        break;
      }
    }
    if (enter == width) break;

    // Ratio test; Bland tie-break on the leaving basic variable index.
    std::size_t leave = m;
    double best = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      if (t[i][enter] > kPivotEps) {
        const double ratio = rhs[i] / t[i][enter];
        if (leave == m || ratio < best - kPivotEps ||
            (std::abs(ratio - best) <= kPivotEps && basis[i] < basis[leave])) {
          leave = i;
          best = ratio;
        }
      }
    }
    if (leave == m) break;  // unbounded in the phase-1 objective: cannot happen, bail safely

    // Pivot.
    const double piv = t[leave][enter];
    for (std::size_t j = 0; j < width; ++j) t[leave][j] /= piv;
    rhs[leave] /= piv;
    for (std::size_t i = 0; i < m; ++i) {
      if (i == leave || t[i][enter] == 0.0) continue;
      const double f = t[i][enter];
      for (std::size_t j = 0; j < width; ++j) t[i][j] -= f * t[leave][j];
      rhs[i] -= f * rhs[leave];
      if (std::abs(rhs[i]) < 1e-14) rhs[i] = 0.0;
    }
    if (obj[enter] != 0.0) {
      const double f = obj[enter];
      for (std::size_t j = 0; j < width; ++j) obj[j] -= f * t[leave][j];
      obj_rhs -= f * rhs[leave];
    }
    basis[leave] = static_cast<int>(enter);
  }

  LpFeasibility out;
  out.feasible = obj_rhs <= 1e-7;  // residual infeasibility after loosening
  if (out.feasible) {
    out.x.assign(n, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
      if (basis[i] >= 0 && static_cast<std::size_t>(basis[i]) < n) {
        out.x[static_cast<std::size_t>(basis[i])] = std::max(0.0, rhs[i]);
      }
    }
  }
  return out;
}

}  // namespace mdr::detail
