#pragma once

#include <vector>

#include "isodisplay/linalg.hpp"

namespace isodisplay {

struct LpResult {
    enum class Status { Optimal, Infeasible, Unbounded };
    Status status = Status::Infeasible;
    double value = 0.0;
    VecD x;
};

// min c.x  subject to  A x = b, x >= 0   (two-phase tableau simplex, Bland's rule)
LpResult lp_solve_eq(const MatD& A, const VecD& b, const VecD& c, double tol = 1e-10);

// max c.x  subject to  A x <= b, x >= 0  with b >= 0 (slack start)
LpResult lp_solve_max_leq(const MatD& A, const VecD& b, const VecD& c, double tol = 1e-10);

// Is p a convex combination of the given points? Returns the phase-1
// residual (0 within tolerance iff member).
double convex_hull_residual(const VecD& p, const std::vector<VecD>& points, double tol = 1e-10);

inline bool in_convex_hull(const VecD& p, const std::vector<VecD>& points, double tol = 1e-8) {
    return convex_hull_residual(p, points) <= tol;
}

}  // namespace isodisplay
