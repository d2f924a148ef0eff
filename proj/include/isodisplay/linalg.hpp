#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>
#include <vector>

#include "isodisplay/rational.hpp"

namespace isodisplay {

using VecQ = std::vector<Rat>;
using VecD = std::vector<double>;

inline Rat dot(const VecQ& a, const VecQ& b) {
    if (a.size() != b.size()) throw std::invalid_argument("dot: dimension mismatch");
    Rat s;
    for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline double dot(const VecD& a, const VecD& b) {
    if (a.size() != b.size()) throw std::invalid_argument("dot: dimension mismatch");
    double s = 0.0;
    for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline double norm2(const VecD& a) { return std::sqrt(dot(a, a)); }

inline VecD operator+(const VecD& a, const VecD& b) {
    VecD r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
    return r;
}
inline VecD operator-(const VecD& a, const VecD& b) {
    VecD r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
    return r;
}
inline VecD operator*(double s, const VecD& a) {
    VecD r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = s * a[i];
    return r;
}
inline VecD operator-(const VecD& a) { return -1.0 * a; }

inline double dist2(const VecD& a, const VecD& b) { return norm2(a - b); }

inline VecQ neg(const VecQ& a) {
    VecQ r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = -a[i];
    return r;
}

inline VecD to_double(const VecQ& a) {
    VecD r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = a[i].to_double();
    return r;
}

// Dense square/rectangular matrix, row major.
template <class T>
struct Mat {
    int rows = 0, cols = 0;
    std::vector<T> a;

    Mat() = default;
    Mat(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c, T{}) {}

    T& at(int i, int j) { return a[static_cast<size_t>(i) * cols + j]; }
    const T& at(int i, int j) const { return a[static_cast<size_t>(i) * cols + j]; }

    static Mat identity(int n) {
        Mat m(n, n);
        for (int i = 0; i < n; ++i) m.at(i, i) = T{1};
        return m;
    }

    std::vector<T> apply(const std::vector<T>& x) const {
        if (static_cast<int>(x.size()) != cols) throw std::invalid_argument("Mat::apply: dimension mismatch");
        std::vector<T> y(rows, T{});
        for (int i = 0; i < rows; ++i) {
            T s{};
            for (int j = 0; j < cols; ++j) s += at(i, j) * x[j];
            y[i] = s;
        }
        return y;
    }

    Mat operator*(const Mat& o) const {
        if (cols != o.rows) throw std::invalid_argument("Mat::operator*: dimension mismatch");
        Mat r(rows, o.cols);
        for (int i = 0; i < rows; ++i)
            for (int k = 0; k < cols; ++k) {
                const T& v = at(i, k);
                if (v == T{}) continue;
                for (int j = 0; j < o.cols; ++j) r.at(i, j) += v * o.at(k, j);
            }
        return r;
    }

    bool operator==(const Mat& o) const { return rows == o.rows && cols == o.cols && a == o.a; }
};

using MatQ = Mat<Rat>;
using MatD = Mat<double>;

inline MatD to_double(const MatQ& m) {
    MatD r(m.rows, m.cols);
    for (size_t i = 0; i < m.a.size(); ++i) r.a[i] = m.a[i].to_double();
    return r;
}

// Exact rank of a rational matrix (Gaussian elimination).
inline int rank(const MatQ& m) {
    MatQ w = m;
    int r = 0;
    for (int c = 0; c < w.cols && r < w.rows; ++c) {
        int piv = -1;
        for (int i = r; i < w.rows; ++i)
            if (!w.at(i, c).is_zero()) { piv = i; break; }
        if (piv < 0) continue;
        for (int j = 0; j < w.cols; ++j) std::swap(w.at(piv, j), w.at(r, j));
        for (int i = r + 1; i < w.rows; ++i) {
            if (w.at(i, c).is_zero()) continue;
            Rat f = w.at(i, c) / w.at(r, c);
            for (int j = c; j < w.cols; ++j) w.at(i, j) -= f * w.at(r, j);
        }
        ++r;
    }
    return r;
}

// Exact solve A x = b for square A; nullopt when singular.
inline std::optional<VecQ> solve(const MatQ& A, const VecQ& b) {
    if (A.rows != A.cols || static_cast<int>(b.size()) != A.rows)
        throw std::invalid_argument("solve: dimension mismatch");
    int n = A.rows;
    MatQ w = A;
    VecQ r = b;
    for (int c = 0; c < n; ++c) {
        int piv = -1;
        for (int i = c; i < n; ++i)
            if (!w.at(i, c).is_zero()) { piv = i; break; }
        if (piv < 0) return std::nullopt;
        for (int j = 0; j < n; ++j) std::swap(w.at(piv, j), w.at(c, j));
        std::swap(r[piv], r[c]);
        for (int i = 0; i < n; ++i) {
            if (i == c || w.at(i, c).is_zero()) continue;
            Rat f = w.at(i, c) / w.at(c, c);
            for (int j = c; j < n; ++j) w.at(i, j) -= f * w.at(c, j);
            r[i] -= f * r[c];
        }
    }
    for (int i = 0; i < n; ++i) r[i] /= w.at(i, i);
    return r;
}

// Float solve with partial pivoting; nullopt when numerically singular.
inline std::optional<VecD> solve(const MatD& A, const VecD& b, double piv_tol = 1e-12) {
    if (A.rows != A.cols || static_cast<int>(b.size()) != A.rows)
        throw std::invalid_argument("solve: dimension mismatch");
    int n = A.rows;
    MatD w = A;
    VecD r = b;
    for (int c = 0; c < n; ++c) {
        int piv = c;
        for (int i = c + 1; i < n; ++i)
            if (std::fabs(w.at(i, c)) > std::fabs(w.at(piv, c))) piv = i;
        if (std::fabs(w.at(piv, c)) < piv_tol) return std::nullopt;
        for (int j = 0; j < n; ++j) std::swap(w.at(piv, j), w.at(c, j));
        std::swap(r[piv], r[c]);
        for (int i = 0; i < n; ++i) {
            if (i == c) continue;
            double f = w.at(i, c) / w.at(c, c);
            if (f == 0.0) continue;
            for (int j = c; j < n; ++j) w.at(i, j) -= f * w.at(c, j);
            r[i] -= f * r[c];
        }
    }
    for (int i = 0; i < n; ++i) r[i] /= w.at(i, i);
    return r;
}

// Solve X * A = B for X (i.e. rows of X are coordinates of rows of B in the row basis of A).
inline std::optional<MatD> solve_left(const MatD& A, const MatD& B, double piv_tol = 1e-12) {
    // X = B * A^{-1}; compute via solving A^T x^T = b^T per row.
    if (A.rows != A.cols || B.cols != A.rows) throw std::invalid_argument("solve_left: dimension mismatch");
    MatD At(A.cols, A.rows);
    for (int i = 0; i < A.rows; ++i)
        for (int j = 0; j < A.cols; ++j) At.at(j, i) = A.at(i, j);
    MatD X(B.rows, A.rows);
    for (int i = 0; i < B.rows; ++i) {
        VecD row(B.cols);
        for (int j = 0; j < B.cols; ++j) row[j] = B.at(i, j);
        auto x = solve(At, row, piv_tol);
        if (!x) return std::nullopt;
        for (int j = 0; j < A.rows; ++j) X.at(i, j) = (*x)[j];
    }
    return X;
}

// Numerical rank via modified Gram-Schmidt with threshold.
inline int rank(const std::vector<VecD>& vecs, double tol = 1e-9) {
    if (vecs.empty()) return 0;
    std::vector<VecD> basis;
    for (const auto& v : vecs) {
        VecD w = v;
        for (const auto& b : basis) {
            double c = dot(w, b);
            for (size_t i = 0; i < w.size(); ++i) w[i] -= c * b[i];
        }
        double n = norm2(w);
        if (n > tol) basis.push_back((1.0 / n) * w);
    }
    return static_cast<int>(basis.size());
}

// Distance of x to the span of the given vectors (euclidean).
inline double dist_to_span(const VecD& x, const std::vector<VecD>& span, double tol = 1e-12) {
    VecD w = x;
    std::vector<VecD> basis;
    for (const auto& v : span) {
        VecD u = v;
        for (const auto& b : basis) {
            double c = dot(u, b);
            for (size_t i = 0; i < u.size(); ++i) u[i] -= c * b[i];
        }
        double n = norm2(u);
        if (n > tol) basis.push_back((1.0 / n) * u);
    }
    for (const auto& b : basis) {
        double c = dot(w, b);
        for (size_t i = 0; i < w.size(); ++i) w[i] -= c * b[i];
    }
    return norm2(w);
}

}  // namespace isodisplay
