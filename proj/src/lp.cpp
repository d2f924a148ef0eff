#include "isodisplay/lp.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace isodisplay {

namespace {

// Tableau rows: m constraint rows then the objective row. Columns: variables
// then the rhs. `basis[i]` is the variable basic in row i.
struct Tableau {
    int m, n;
    std::vector<double> t;  // (m+1) x (n+1)
    std::vector<int> basis;

    double& at(int i, int j) { return t[static_cast<size_t>(i) * (n + 1) + j]; }
    double at(int i, int j) const { return t[static_cast<size_t>(i) * (n + 1) + j]; }

    void pivot(int row, int col) {
        double p = at(row, col);
        for (int j = 0; j <= n; ++j) at(row, j) /= p;
        for (int i = 0; i <= m; ++i) {
            if (i == row) continue;
            double f = at(i, col);
            if (f == 0.0) continue;
            for (int j = 0; j <= n; ++j) at(i, j) -= f * at(row, j);
        }
        basis[row] = col;
    }

    // Bland's rule; returns false when optimal, throws on unboundedness.
    bool step(double tol) {
        int col = -1;
        for (int j = 0; j < n; ++j)
            if (at(m, j) < -tol) { col = j; break; }
        if (col < 0) return false;
        int row = -1;
        double best = std::numeric_limits<double>::infinity();
        for (int i = 0; i < m; ++i) {
            if (at(i, col) > tol) {
                double ratio = at(i, n) / at(i, col);
                if (ratio < best - 1e-15 || (std::fabs(ratio - best) <= 1e-15 &&
                                             (row < 0 || basis[i] < basis[row]))) {
                    best = ratio;
                    row = i;
                }
            }
        }
        if (row < 0) throw std::runtime_error("lp: unbounded");
        pivot(row, col);
        return true;
    }
};

}  // namespace

LpResult lp_solve_eq(const MatD& A, const VecD& b, const VecD& c, double tol) {
    int m = A.rows, n = A.cols;
    if (static_cast<int>(b.size()) != m || static_cast<int>(c.size()) != n)
        throw std::invalid_argument("lp_solve_eq: dimension mismatch");

    // Phase 1 with artificials.
    Tableau tb;
    tb.m = m;
    tb.n = n + m;
    tb.t.assign(static_cast<size_t>(m + 1) * (tb.n + 1), 0.0);
    tb.basis.resize(m);
    for (int i = 0; i < m; ++i) {
        double s = b[i] < 0 ? -1.0 : 1.0;
        for (int j = 0; j < n; ++j) tb.at(i, j) = s * A.at(i, j);
        tb.at(i, n + i) = 1.0;
        tb.at(i, tb.n) = s * b[i];
        tb.basis[i] = n + i;
    }
    // objective: min sum of artificials -> row = -(sum of constraint rows) over x-cols
    for (int j = 0; j <= tb.n; ++j) {
        double s = 0.0;
        for (int i = 0; i < m; ++i) s += tb.at(i, j);
        tb.at(m, j) = (j >= n && j < tb.n) ? 0.0 : -s;
    }
    try {
        while (tb.step(tol)) {}
    } catch (const std::runtime_error&) {
        throw std::logic_error("lp: phase-1 unbounded (internal error)");
    }
    double phase1 = -tb.at(m, tb.n);
    LpResult res;
    if (phase1 > 1e-7) {
        res.status = LpResult::Status::Infeasible;
        res.value = phase1;
        return res;
    }
    // Pivot remaining artificials out where possible; rows that cannot be
    // pivoted are redundant and stay with a zero-valued artificial.
    for (int i = 0; i < m; ++i) {
        if (tb.basis[i] < n) continue;
        int col = -1;
        for (int j = 0; j < n; ++j)
            if (std::fabs(tb.at(i, j)) > 1e-9) { col = j; break; }
        if (col >= 0) tb.pivot(i, col);
    }

    // Phase 2: rebuild objective row for c over the current basis.
    for (int j = 0; j <= tb.n; ++j) tb.at(m, j) = 0.0;
    for (int j = 0; j < n; ++j) tb.at(m, j) = c[j];
    // forbid artificials from re-entering
    for (int j = n; j < tb.n; ++j) tb.at(m, j) = 1e30;
    for (int i = 0; i < m; ++i) {
        int bj = tb.basis[i];
        double f = tb.at(m, bj);
        if (f == 0.0) continue;
        for (int j = 0; j <= tb.n; ++j) tb.at(m, j) -= f * tb.at(i, j);
    }
    try {
        while (tb.step(tol)) {}
    } catch (const std::runtime_error&) {
        res.status = LpResult::Status::Unbounded;
        return res;
    }

    res.status = LpResult::Status::Optimal;
    res.x.assign(n, 0.0);
    for (int i = 0; i < m; ++i)
        if (tb.basis[i] < n) res.x[tb.basis[i]] = tb.at(i, tb.n);
    res.value = dot(res.x, c);
    return res;
}

LpResult lp_solve_max_leq(const MatD& A, const VecD& b, const VecD& c, double tol) {
    int m = A.rows, n = A.cols;
    for (double v : b)
        if (v < 0) throw std::invalid_argument("lp_solve_max_leq: rhs must be nonnegative");
    // Slack form: [A I] [x;s] = b with slack start; min -c.
    MatD Ae(m, n + m);
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < n; ++j) Ae.at(i, j) = A.at(i, j);
        Ae.at(i, n + i) = 1.0;
    }
    VecD ce(n + m, 0.0);
    for (int j = 0; j < n; ++j) ce[j] = -c[j];
    LpResult inner = lp_solve_eq(Ae, b, ce, tol);
    LpResult res;
    res.status = inner.status;
    if (inner.status == LpResult::Status::Optimal) {
        res.x.assign(inner.x.begin(), inner.x.begin() + n);
        res.value = dot(res.x, c);
    }
    return res;
}

double convex_hull_residual(const VecD& p, const std::vector<VecD>& points, double tol) {
    if (points.empty()) return norm2(p) + 1.0;
    int d = static_cast<int>(p.size());
    int k = static_cast<int>(points.size());
    MatD A(d + 1, k);
    VecD b(d + 1);
    for (int i = 0; i < d; ++i) {
        for (int j = 0; j < k; ++j) A.at(i, j) = points[j][i];
        b[i] = p[i];
    }
    for (int j = 0; j < k; ++j) A.at(d, j) = 1.0;
    b[d] = 1.0;
    VecD c(k, 0.0);
    LpResult r = lp_solve_eq(A, b, c, tol);
    return r.status == LpResult::Status::Optimal ? 0.0 : r.value;
}

}  // namespace isodisplay
