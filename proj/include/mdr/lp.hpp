#pragma once

// Minimal dense phase-1 simplex for linear feasibility over x >= 0.
// Deterministic: Bland's rule for both entering and leaving choices, so the
// pivot sequence (and the returned witness) is a pure function of the input.

#include <vector>

namespace mdr::detail {

enum class RowSense { le, ge };

struct LinearRow {
  std::vector<double> coeffs;  // length = variable count
  RowSense sense;
  double rhs;
};

struct LpFeasibility {
  bool feasible;
  std::vector<double> x;  // a feasible point when feasible, else empty
};

// Decides feasibility of { x >= 0 : rows }.  Each row is first loosened by
// slack_tol (le: rhs + tol, ge: rhs - tol), so the verdict is "feasible within
// slack_tol" and the witness satisfies every original row within slack_tol.
LpFeasibility lp_feasible(int num_vars, std::vector<LinearRow> rows, double slack_tol);

}  // namespace mdr::detail
