#pragma once

#include "dkbound/spectra.hpp"

namespace dkbound::lp {

enum class LpStatus { Optimal, Infeasible, Unbounded, PivotLimit };

struct LpResult {
  LpStatus status = LpStatus::Infeasible;
  double value = 0.0;
  Vector x;
  int pivots = 0;
};

/// Dense tableau simplex for small problems:
///   maximize c^T x  subject to  A x <= b,  x >= 0.
/// Two-phase (auxiliary variable for an infeasible origin). Pivot choice is
/// most-negative reduced cost with lowest-index ties; after a run of
/// degenerate pivots it switches to Bland's rule so cycling cannot occur.
LpResult maximize(const Matrix& a, const Vector& b, const Vector& c);

/// Same problem with per-variable bounds lower <= x <= upper (upper may be
/// +inf, lower must be finite). Shifts to x - lower >= 0 and appends the
/// finite upper bounds as rows.
LpResult maximize_boxed(const Matrix& a, const Vector& b, const Vector& c,
                        const Vector& lower, const Vector& upper);

}  // namespace dkbound::lp
