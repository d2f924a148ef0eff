#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "isodisplay/linalg.hpp"
#include "isodisplay/scalar.hpp"

namespace isodisplay {

namespace detail {
inline bool entries_equal(const Rat& a, const Rat& b, double) { return a == b; }
inline bool entries_equal(double a, double b, double tol) { return std::fabs(a - b) <= tol; }
}  // namespace detail

// A finite group of invertible matrices stored as an explicit element list
// with its composition table. table(i,j) = index of elements[i]*elements[j].
template <class T>
class MatrixGroupT {
public:
    using Matrix = Mat<T>;

    MatrixGroupT() = default;

    static MatrixGroupT from_elements(std::vector<Matrix> elems, double tol = kDefaultTolerance,
                                      bool symmetric_required = false) {
        MatrixGroupT g;
        g.tol_ = tol;
        g.elements_ = std::move(elems);
        g.finish(symmetric_required);
        return g;
    }

    // Smallest group containing the generators; throws when the closure
    // exceeds `cap` elements (non-finite or too-large group).
    static MatrixGroupT closure(const std::vector<Matrix>& generators, size_t cap,
                                double tol = kDefaultTolerance, bool symmetric_required = false) {
        if (generators.empty()) throw std::invalid_argument("group_closure: no generators");
        int n = generators.front().rows;
        for (const auto& g : generators) {
            if (g.rows != n || g.cols != n)
                throw std::invalid_argument("group_closure: generator dimension mismatch");
            if (!invertible(g)) throw std::invalid_argument("group_closure: singular generator");
        }
        MatrixGroupT grp;
        grp.tol_ = tol;
        grp.elements_.push_back(Matrix::identity(n));
        size_t frontier = 0;
        while (frontier < grp.elements_.size()) {
            Matrix cur = grp.elements_[frontier++];
            for (const auto& g : generators) {
                Matrix prod = cur * g;
                if (grp.find(prod) < 0) {
                    grp.elements_.push_back(prod);
                    if (grp.elements_.size() > cap)
                        throw std::runtime_error("group_closure: order exceeds cap " + std::to_string(cap));
                }
            }
        }
        grp.finish(symmetric_required);
        return grp;
    }

    int dim() const { return elements_.empty() ? 0 : elements_.front().rows; }
    size_t order() const { return elements_.size(); }
    const std::vector<Matrix>& elements() const { return elements_; }
    const Matrix& element(size_t i) const { return elements_[i]; }
    int identity_index() const { return identity_index_; }
    int table(int i, int j) const { return table_[static_cast<size_t>(i) * elements_.size() + j]; }
    int inverse_index(int i) const { return inverse_[i]; }
    double tolerance() const { return tol_; }

    int find(const Matrix& m) const {
        for (size_t i = 0; i < elements_.size(); ++i) {
            if (equal(elements_[i], m)) return static_cast<int>(i);
        }
        return -1;
    }

    bool contains(const Matrix& m) const { return find(m) >= 0; }

    bool contains_minus_id() const {
        if (elements_.empty()) return false;
        Matrix mid = Matrix::identity(dim());
        for (auto& v : mid.a) v = -v;
        return contains(mid);
    }

    // Subgroup of elements fixing every given vector (stabilizer).
    MatrixGroupT stabilizer(const std::vector<std::vector<T>>& fixed) const {
        std::vector<Matrix> keep;
        for (const auto& e : elements_) {
            bool fixes = true;
            for (const auto& x : fixed) {
                auto y = e.apply(x);
                for (size_t i = 0; i < x.size() && fixes; ++i)
                    if (!detail::entries_equal(y[i], x[i], tol_)) fixes = false;
                if (!fixes) break;
            }
            if (fixes) keep.push_back(e);
        }
        return from_elements(std::move(keep), tol_);
    }

    bool equal(const Matrix& a, const Matrix& b) const {
        if (a.rows != b.rows || a.cols != b.cols) return false;
        for (size_t i = 0; i < a.a.size(); ++i)
            if (!detail::entries_equal(a.a[i], b.a[i], tol_)) return false;
        return true;
    }

    // Set equality of two groups (same elements up to tolerance).
    bool same_elements(const MatrixGroupT& o) const {
        if (order() != o.order()) return false;
        for (const auto& e : o.elements_)
            if (find(e) < 0) return false;
        return true;
    }

private:
    static bool invertible(const Matrix& m) {
        if constexpr (std::is_same_v<T, Rat>) {
            return rank(m) == m.rows;
        } else {
            std::vector<VecD> rows;
            for (int i = 0; i < m.rows; ++i) {
                VecD r(m.cols);
                for (int j = 0; j < m.cols; ++j) r[j] = m.at(i, j);
                rows.push_back(r);
            }
            return rank(rows, 1e-12) == m.rows;
        }
    }

    void finish(bool symmetric_required) {
        if (elements_.empty()) throw std::invalid_argument("MatrixGroup: empty element list");
        size_t n = elements_.size();
        identity_index_ = find(Matrix::identity(dim()));
        if (identity_index_ < 0) throw std::invalid_argument("MatrixGroup: identity missing");
        table_.assign(n * n, -1);
        inverse_.assign(n, -1);
        for (size_t i = 0; i < n; ++i)
            for (size_t j = 0; j < n; ++j) {
                int k = find(elements_[i] * elements_[j]);
                if (k < 0) throw std::invalid_argument("MatrixGroup: not closed under composition");
                table_[i * n + j] = k;
                if (k == identity_index_) inverse_[i] = static_cast<int>(j);
            }
        for (size_t i = 0; i < n; ++i)
            if (inverse_[i] < 0) throw std::invalid_argument("MatrixGroup: inverse missing");
        if (symmetric_required && !contains_minus_id())
            throw std::invalid_argument("MatrixGroup: -Id required but missing");
    }

    std::vector<Matrix> elements_;
    std::vector<int> table_;
    std::vector<int> inverse_;
    int identity_index_ = -1;
    double tol_ = kDefaultTolerance;
};

using MatrixGroupQ = MatrixGroupT<Rat>;
using MatrixGroupD = MatrixGroupT<double>;

inline MatrixGroupD to_double(const MatrixGroupQ& g) {
    std::vector<MatD> elems;
    elems.reserve(g.order());
    for (const auto& e : g.elements()) elems.push_back(to_double(e));
    return MatrixGroupD::from_elements(std::move(elems), g.tolerance());
}

}  // namespace isodisplay
