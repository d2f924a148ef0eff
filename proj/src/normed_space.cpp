#include "isodisplay/normed_space.hpp"

#include <algorithm>
#include <cmath>

#include "isodisplay/polytope.hpp"

namespace isodisplay {

namespace {

void validate_metric(const std::vector<std::vector<int>>& d) {
    size_t n = d.size();
    if (n == 0) throw std::invalid_argument("graph_norm: empty metric");
    for (const auto& row : d)
        if (row.size() != n) throw std::invalid_argument("graph_norm: metric not square");
    for (size_t i = 0; i < n; ++i) {
        if (d[i][i] != 0) throw std::invalid_argument("graph_norm: nonzero diagonal");
        for (size_t j = 0; j < n; ++j) {
            if (d[i][j] != d[j][i]) throw std::invalid_argument("graph_norm: metric not symmetric");
            if (i != j && d[i][j] < 1) throw std::invalid_argument("graph_norm: off-diagonal entry < 1 (disconnected?)");
            for (size_t k = 0; k < n; ++k)
                if (d[i][j] > d[i][k] + d[k][j])
                    throw std::invalid_argument("graph_norm: triangle inequality fails");
        }
    }
}

}  // namespace

std::vector<VecQ> gamma_facets(const std::vector<std::vector<int>>& metric) {
    int n = static_cast<int>(metric.size());
    std::vector<VecQ> fs;
    for (int i = 0; i < n; ++i) {
        VecQ f(n, Rat(0));
        f[i] = Rat(1);
        fs.push_back(f);
    }
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            VecQ f(n, Rat(0));
            f[i] = Rat(1);
            f[j] = Rat(1, 1 + 2LL * metric[i][j]);
            fs.push_back(f);
        }
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            VecQ f(n, Rat(0));
            f[i] = Rat(1);
            f[j] = -Rat(1, 2 + 2LL * metric[i][j]);
            fs.push_back(f);
        }
    size_t half = fs.size();
    for (size_t k = 0; k < half; ++k) fs.push_back(neg(fs[k]));
    return fs;
}

NormedSpace NormedSpace::euclidean(int dim) {
    if (dim <= 0) throw std::invalid_argument("euclidean: dimension must be positive");
    NormedSpace s;
    s.dim_ = dim;
    s.kind_ = SpaceKind::Euclidean;
    return s;
}

NormedSpace NormedSpace::polyhedral(int dim, std::vector<VecQ> facets) {
    if (dim <= 0) throw std::invalid_argument("polyhedral: dimension must be positive");
    if (facets.empty()) throw std::invalid_argument("polyhedral: empty facet list");
    for (const auto& f : facets)
        if (static_cast<int>(f.size()) != dim)
            throw std::invalid_argument("polyhedral: facet dimension mismatch");
    // Negation symmetry.
    for (const auto& f : facets) {
        VecQ nf = neg(f);
        if (std::find(facets.begin(), facets.end(), nf) == facets.end())
            throw std::invalid_argument("polyhedral: facet list not symmetric under negation");
    }
    // Full rank; with symmetry this is equivalent to positive-definiteness.
    MatQ m(static_cast<int>(facets.size()), dim);
    for (size_t i = 0; i < facets.size(); ++i)
        for (int j = 0; j < dim; ++j) m.at(static_cast<int>(i), j) = facets[i][j];
    if (rank(m) != dim)
        throw std::invalid_argument("polyhedral: facets do not positively span the dual (norm not positive-definite)");
    NormedSpace s;
    s.dim_ = dim;
    s.kind_ = SpaceKind::Polyhedral;
    s.facets_ = std::move(facets);
    return s;
}

NormedSpace NormedSpace::graph_norm(std::vector<std::vector<int>> metric) {
    validate_metric(metric);
    NormedSpace s;
    s.dim_ = static_cast<int>(metric.size());
    s.kind_ = SpaceKind::GraphNorm;
    s.metric_ = std::move(metric);
    if (s.dim_ <= 16) s.facets_ = gamma_facets(s.metric_);
    return s;
}

NormedSpace NormedSpace::pimple(NormedSpace base, std::vector<Spike> spikes, double tol) {
    if (base.kind() == SpaceKind::Pimple) throw std::invalid_argument("pimple: nested pimple base");
    for (const auto& sp : spikes) {
        if (static_cast<int>(sp.dir.size()) != base.dim())
            throw std::invalid_argument("pimple: spike dimension mismatch");
        if (!(sp.depth > 0.0 && sp.depth < 0.5))
            throw std::invalid_argument("pimple: lambda outside (1/2,1)");
        if (std::fabs(base.norm(sp.dir) - 1.0) > tol)
            throw std::invalid_argument("pimple: spike direction not base-normalized");
    }
    NormedSpace s;
    s.dim_ = base.dim();
    s.kind_ = SpaceKind::Pimple;
    s.base_ = std::make_shared<NormedSpace>(std::move(base));
    s.spikes_ = std::move(spikes);
    return s;
}

const std::vector<VecQ>& NormedSpace::facets() const {
    if (kind_ != SpaceKind::Polyhedral && kind_ != SpaceKind::GraphNorm)
        throw std::logic_error("facets: space kind has no facet list");
    if (facets_.empty())
        throw std::logic_error("facets: facet list not materialized at this dimension");
    return facets_;
}

const std::vector<std::vector<int>>& NormedSpace::metric() const {
    if (kind_ != SpaceKind::GraphNorm) throw std::logic_error("metric: not a graph norm");
    return metric_;
}

const NormedSpace& NormedSpace::base() const {
    if (kind_ != SpaceKind::Pimple) throw std::logic_error("base: not a pimple space");
    return *base_;
}

const std::vector<Spike>& NormedSpace::spikes() const {
    if (kind_ != SpaceKind::Pimple) throw std::logic_error("spikes: not a pimple space");
    return spikes_;
}

double NormedSpace::norm(const VecD& x) const {
    if (static_cast<int>(x.size()) != dim_) throw std::invalid_argument("norm: dimension mismatch");
    switch (kind_) {
        case SpaceKind::Euclidean:
            return norm2(x);
        case SpaceKind::Polyhedral: {
            double best = 0.0;
            for (const auto& f : facets_) {
                double v = 0.0;
                for (int j = 0; j < dim_; ++j) v += f[j].to_double() * x[j];
                best = std::max(best, v);
            }
            return best;
        }
        case SpaceKind::GraphNorm: {
            double best = 0.0;
            for (int i = 0; i < dim_; ++i) best = std::max(best, std::fabs(x[i]));
            for (int i = 0; i < dim_; ++i)
                for (int j = 0; j < dim_; ++j) {
                    if (i == j) continue;
                    best = std::max(best, std::fabs(x[i] + x[j] / (1.0 + 2.0 * metric_[i][j])));
                    best = std::max(best, std::fabs(x[i] - x[j] / (2.0 + 2.0 * metric_[i][j])));
                }
            return best;
        }
        case SpaceKind::Pimple:
            return pimple_norm_value(*this, x);
    }
    throw std::logic_error("norm: unknown kind");
}

Rat NormedSpace::norm_exact(const VecQ& x) const {
    if (static_cast<int>(x.size()) != dim_) throw std::invalid_argument("norm_exact: dimension mismatch");
    if (kind_ == SpaceKind::Polyhedral) {
        Rat best;
        for (const auto& f : facets_) {
            Rat v = dot(f, x);
            if (v > best) best = v;
        }
        return best;
    }
    if (kind_ == SpaceKind::GraphNorm) {
        Rat best;
        for (int i = 0; i < dim_; ++i)
            if (x[i].abs() > best) best = x[i].abs();
        for (int i = 0; i < dim_; ++i)
            for (int j = 0; j < dim_; ++j) {
                if (i == j) continue;
                Rat p = (x[i] + x[j] / Rat(1 + 2LL * metric_[i][j])).abs();
                if (p > best) best = p;
                Rat q = (x[i] - x[j] / Rat(2 + 2LL * metric_[i][j])).abs();
                if (q > best) best = q;
            }
        return best;
    }
    throw std::logic_error("norm_exact: exact evaluation requires a polyhedral or graph-norm space");
}

std::vector<VecQ> NormedSpace::ball_vertices(int dim_cap) const {
    if (!exact_mode()) throw std::logic_error("ball_vertices: exact kinds only");
    if (dim_ > dim_cap)
        throw std::runtime_error("ball_vertices: dimension " + std::to_string(dim_) +
                                 " exceeds cap " + std::to_string(dim_cap));
    return enumerate_ball_vertices(facets(), dim_);
}

double NormedSpace::dual_norm(const VecD& phi) const {
    if (static_cast<int>(phi.size()) != dim_) throw std::invalid_argument("dual_norm: dimension mismatch");
    switch (kind_) {
        case SpaceKind::Euclidean:
            return norm2(phi);
        case SpaceKind::Polyhedral:
        case SpaceKind::GraphNorm: {
            VecQ q(phi.size());
            bool integral = true;
            for (size_t i = 0; i < phi.size(); ++i) {
                if (phi[i] != std::floor(phi[i])) { integral = false; break; }
                q[i] = Rat(static_cast<long long>(phi[i]));
            }
            if (integral) return dual_norm_exact(q).to_double();
            auto verts = ball_vertices();
            double best = 0.0;
            for (const auto& v : verts) best = std::max(best, dot(phi, to_double(v)));
            return best;
        }
        case SpaceKind::Pimple: {
            double best = base_->dual_norm(phi);
            for (const auto& sp : spikes_)
                best = std::max(best, std::fabs(dot(phi, sp.dir)) * (1.0 + sp.depth / (1.0 - sp.depth)));
            return best;
        }
    }
    throw std::logic_error("dual_norm: unknown kind");
}

Rat NormedSpace::dual_norm_exact(const VecQ& phi, int vertex_cap) const {
    if (!exact_mode()) throw std::logic_error("dual_norm_exact: unsupported kind without facet conversion");
    auto verts = ball_vertices(vertex_cap);
    Rat best;
    bool first = true;
    for (const auto& v : verts) {
        Rat s = dot(phi, v);
        if (first || s > best) { best = s; first = false; }
    }
    return best;
}

VecD NormedSpace::support_functional(const VecD& x) const {
    if (norm(x) == 0.0) throw std::invalid_argument("support_functional: zero vector");
    switch (kind_) {
        case SpaceKind::Euclidean:
            return (1.0 / norm2(x)) * x;
        case SpaceKind::Polyhedral:
        case SpaceKind::GraphNorm: {
            const auto& fs = facets();
            size_t best = 0;
            double bv = -1e300;
            for (size_t i = 0; i < fs.size(); ++i) {
                double v = dot(to_double(fs[i]), x);
                if (v > bv + 1e-15) { bv = v; best = i; }
            }
            return to_double(fs[best]);
        }
        case SpaceKind::Pimple:
            throw std::logic_error("support_functional: not available for pimple spaces");
    }
    throw std::logic_error("support_functional: unknown kind");
}

VecQ NormedSpace::support_functional_exact(const VecQ& x) const {
    if (!exact_mode()) throw std::logic_error("support_functional_exact: exact kinds only");
    bool zero = true;
    for (const auto& c : x)
        if (!c.is_zero()) { zero = false; break; }
    if (zero) throw std::invalid_argument("support_functional: zero vector");
    const auto& fs = facets();
    size_t best = 0;
    Rat bv = dot(fs[0], x);
    for (size_t i = 1; i < fs.size(); ++i) {
        Rat v = dot(fs[i], x);
        if (v > bv) { bv = v; best = i; }  // ties keep the lowest index
    }
    return fs[best];
}

Scalar norm_eval(const NormedSpace& space, const std::vector<Scalar>& x) {
    if (static_cast<int>(x.size()) != space.dim())
        throw std::invalid_argument("norm_eval: dimension mismatch");
    bool any_exact = false, any_float = false;
    for (const auto& s : x) (s.exact() ? any_exact : any_float) = true;
    if (any_exact && any_float) throw std::invalid_argument("norm_eval: mixing exact and float entries");
    bool exact_in = any_exact || !any_float;  // empty or all-exact
    if (exact_in != space.exact_mode())
        throw std::invalid_argument("norm_eval: scalar mode does not match space mode");
    if (exact_in) {
        VecQ q(x.size());
        for (size_t i = 0; i < x.size(); ++i) q[i] = x[i].rat();
        return Scalar(space.norm_exact(q));
    }
    VecD d(x.size());
    for (size_t i = 0; i < x.size(); ++i) d[i] = x[i].value();
    return Scalar(space.norm(d));
}

Scalar dual_norm_eval(const NormedSpace& space, const std::vector<Scalar>& phi) {
    if (static_cast<int>(phi.size()) != space.dim())
        throw std::invalid_argument("dual_norm_eval: dimension mismatch");
    bool any_exact = false, any_float = false;
    for (const auto& s : phi) (s.exact() ? any_exact : any_float) = true;
    if (any_exact && any_float) throw std::invalid_argument("dual_norm_eval: mixing exact and float entries");
    bool exact_in = any_exact || !any_float;
    if (exact_in != space.exact_mode())
        throw std::invalid_argument("dual_norm_eval: scalar mode does not match space mode");
    if (exact_in) {
        VecQ q(phi.size());
        for (size_t i = 0; i < phi.size(); ++i) q[i] = phi[i].rat();
        return Scalar(space.dual_norm_exact(q));
    }
    VecD d(phi.size());
    for (size_t i = 0; i < phi.size(); ++i) d[i] = phi[i].value();
    return Scalar(space.dual_norm(d));
}

}  // namespace isodisplay
