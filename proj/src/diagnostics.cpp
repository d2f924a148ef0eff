#include "isodisplay/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "isodisplay/rng.hpp"

namespace isodisplay::diag {

namespace {

VecD normalize(const NormedSpace& space, const VecD& v) {
    double n = space.norm(v);
    if (n <= 0) throw std::invalid_argument("diag: zero vector");
    return (1.0 / n) * v;
}

void require_normalized(const NormedSpace& space, const VecD& x, const char* what) {
    if (std::fabs(space.norm(x) - 1.0) > 1e-7)
        throw std::invalid_argument(std::string("diag: ") + what + " not normalized");
}

// best feasible ||x+y|| over unit y with ||x-y|| >= eps: seeded random
// search, targeted seeds, then shrinking local moves (random tangents and
// a pull toward x that tightens the constraint from the feasible side).
double sup_lur(const NormedSpace& space, const VecD& x, double eps, int budget, Rng& rng) {
    int dim = space.dim();
    double best = 0.0;
    VecD besty;

    auto consider = [&](const VecD& cand) {
        double n = space.norm(cand);
        if (n <= 0) return;
        VecD y = (1.0 / n) * cand;
        if (space.norm(x - y) < eps) return;
        double f = space.norm(x + y);
        if (f > best) { best = f; besty = y; }
    };

    consider(-1.0 * x);
    for (int i = 0; i < dim; ++i) {
        VecD e(dim, 0.0);
        e[i] = 1.0;
        consider(x + eps * e);
        consider(x - eps * e);
        consider(e);
        consider(-1.0 * e);
    }
    for (int i = 0; i < budget; ++i) consider(rng.sphere(dim));
    if (besty.empty()) return 0.0;

    double step = 0.5;
    while (step > 1e-10) {
        bool improved = false;
        for (int tries = 0; tries < 12; ++tries) {
            VecD dir = tries == 0 ? x : rng.sphere(dim);
            VecD cand = besty + step * dir;
            double n = space.norm(cand);
            if (n <= 0) continue;
            VecD y = (1.0 / n) * cand;
            if (space.norm(x - y) < eps) continue;
            double f = space.norm(x + y);
            if (f > best + 1e-15) {
                best = f;
                besty = y;
                improved = true;
            }
        }
        if (!improved) step *= 0.5;
    }
    return best;
}

}  // namespace

TransitivityVerdict convex_transitivity_test(const NormedSpace& space, const MatrixGroupD& G,
                                             const VecD& x, const VecD& xstar, double tol) {
    require_normalized(space, x, "x");
    if (std::fabs(space.dual_norm(xstar) - 1.0) > 1e-7)
        throw std::invalid_argument("diag: x* not normalized in the dual");
    TransitivityVerdict v;
    v.x = x;
    v.xstar = xstar;
    v.exact = true;
    v.sup = -1e300;
    for (const auto& g : G.elements()) v.sup = std::max(v.sup, dot(xstar, g.apply(x)));
    v.fails = v.sup < 1.0 - tol;
    return v;
}

TransitivityVerdict convex_transitivity_test(const NormedSpace& space, const RotationSampler& G,
                                             const VecD& x, const VecD& xstar, double tol) {
    if (space.dim() != 2) throw std::invalid_argument("rotation sampler: dimension 2 only");
    require_normalized(space, x, "x");
    if (std::fabs(space.dual_norm(xstar) - 1.0) > 1e-7)
        throw std::invalid_argument("diag: x* not normalized in the dual");
    TransitivityVerdict v;
    v.x = x;
    v.xstar = xstar;
    v.exact = false;
    Rng rng(G.seed);
    v.sup = -1e300;
    for (int i = 0; i < G.budget; ++i) {
        double theta = (i + rng.uniform()) * 2.0 * 3.14159265358979323846 / G.budget;
        double c = std::cos(theta), s = std::sin(theta);
        VecD tx{c * x[0] - s * x[1], s * x[0] + c * x[1]};
        v.sup = std::max(v.sup, dot(xstar, tx));
    }
    v.fails = v.sup < 1.0 - tol;
    return v;
}

NecessaryReport necessary_conditions(const NormedSpace& space, const MatrixGroupD& G,
                                     int sample_budget, uint64_t seed, double tol) {
    NecessaryReport rep;
    rep.has_minus_id = G.contains_minus_id();
    rep.closed = true;
    rep.note = "finite group: closedness is automatic";

    Rng rng(seed);
    int dim = space.dim();
    double best_sup = 1e300;
    for (int i = 0; i < sample_budget; ++i) {
        VecD x = normalize(space, rng.sphere(dim));
        VecD phi = rng.sphere(dim);
        double dn = space.dual_norm(phi);
        if (dn <= 0) continue;
        phi = (1.0 / dn) * phi;
        double sup = -1e300;
        for (const auto& g : G.elements()) sup = std::max(sup, dot(phi, g.apply(x)));
        if (sup < best_sup) {
            best_sup = sup;
            rep.witness_x = x;
            rep.witness_xstar = phi;
            rep.witness_sup = sup;
        }
    }
    rep.witness_found = best_sup < 1.0 - std::max(tol * 100, 1e-6);
    return rep;
}

double distinguished_point_check(const NormedSpace& space, const MatrixGroupD& G, const VecD& x) {
    double best = 1e300;
    for (size_t i = 0; i < G.order(); ++i) {
        if (static_cast<int>(i) == G.identity_index()) continue;
        best = std::min(best, space.norm(G.element(i).apply(x) - x));
    }
    return G.order() <= 1 ? 0.0 : best;
}

LurModulus lur_modulus(const NormedSpace& space, const VecD& x, const VecD& eps_grid, int budget,
                       uint64_t seed) {
    require_normalized(space, x, "x");
    LurModulus mod;
    mod.x = x;
    mod.seed = seed;
    std::vector<double> sups;
    for (double eps : eps_grid) {
        Rng rng(seed ^ static_cast<uint64_t>(eps * 1e9));
        sups.push_back(eps <= 0 ? 2.0 : sup_lur(space, x, eps, budget, rng));
    }
    // each estimate lower-bounds the sup at every smaller eps; enforce the
    // monotone envelope so delta comes out nondecreasing in eps
    for (int i = static_cast<int>(sups.size()) - 2; i >= 0; --i)
        if (eps_grid[i] < eps_grid[i + 1]) sups[i] = std::max(sups[i], sups[i + 1]);
    for (size_t i = 0; i < sups.size(); ++i)
        mod.table.emplace_back(eps_grid[i], std::max(0.0, 2.0 - sups[i]));
    return mod;
}

SeparationWitness separation_witness(const NormedSpace& space, const MatrixGroupD& G, const VecD& y,
                                     std::optional<double> alpha_opt, uint64_t seed, double tol) {
    require_normalized(space, y, "y");
    SeparationWitness w;

    double alpha = 1e300;
    bool any_moved = false;
    for (const auto& g : G.elements()) {
        double d = space.norm(g.apply(y) - y);
        if (d > tol * 10) { alpha = std::min(alpha, d); any_moved = true; }
    }
    if (alpha_opt) alpha = *alpha_opt;
    if (any_moved && alpha <= tol)
        throw std::invalid_argument("separation_witness: orbit separation is zero");
    if (!any_moved) alpha = 2.0;  // every element fixes y; the Ty = y branch carries the bound

    // epsilon with ||y + Ty|| <= 2 - 2 eps whenever Ty != y, and 2 eps < alpha
    double m2 = 0.0;
    for (const auto& g : G.elements()) {
        VecD gy = g.apply(y);
        if (space.norm(gy - y) > tol * 10) m2 = std::max(m2, space.norm(gy + y));
    }
    double eps = std::min({(2.0 - m2) / 2.0, alpha * 0.45, 0.5});
    if (eps <= tol)
        throw std::invalid_argument("separation_witness: no rotundity gap at y (space not LUR at y?)");

    // x inside the eps-ball around y on the sphere
    Rng rng(seed);
    VecD x;
    for (int tries = 0; tries < 64; ++tries) {
        VecD dir = rng.sphere(space.dim());
        VecD cand = normalize(space, y + (eps / 4.0) * dir);
        double d = space.norm(cand - y);
        if (d > tol * 10 && d < eps) { x = cand; break; }
    }
    if (x.empty()) throw std::runtime_error("separation_witness: could not place x inside the LUR radius");

    // support functional at y with x*(y) = 1
    VecD phi;
    if (space.kind() == SpaceKind::Euclidean) {
        phi = (1.0 / norm2(y)) * y;
    } else if (space.kind() == SpaceKind::Pimple) {
        if (std::fabs(space.norm(y) - norm2(y)) > 1e-9)
            throw std::invalid_argument("separation_witness: y sits in a spike region; pick a generic point");
        phi = (1.0 / norm2(y)) * y;
        double dn = space.dual_norm(phi);
        if (dn > 1.0 + 1e-9)
            throw std::invalid_argument("separation_witness: support functional at y not dual-normalized");
    } else {
        phi = space.support_functional(y);
    }
    if (std::fabs(dot(phi, y) - 1.0) > 1e-7)
        throw std::logic_error("separation_witness: x*(y) != 1");

    w.x = x;
    w.xstar = phi;
    double sup = -1e300;
    for (const auto& g : G.elements()) sup = std::max(sup, dot(phi, g.apply(x)));
    w.bound = sup;
    w.beta = 1.0 - sup;
    w.verified = w.beta > tol;
    return w;
}

std::vector<std::pair<double, double>> uniform_convexity_modulus(const NormedSpace& space,
                                                                 const VecD& eps_grid, int budget,
                                                                 uint64_t seed) {
    std::vector<std::pair<double, double>> table;
    int dim = space.dim();
    std::vector<double> sups;
    for (double eps : eps_grid) {
        if (eps <= 0) { sups.push_back(2.0); continue; }
        Rng rng(seed ^ static_cast<uint64_t>(eps * 1e9));
        double best = 0.0;
        // optimize over both x and y
        int outer = std::max(8, budget / 250);
        for (int i = 0; i < outer; ++i) {
            VecD x = normalize(space, rng.sphere(dim));
            best = std::max(best, sup_lur(space, x, eps, budget / outer + 8, rng));
        }
        sups.push_back(best);
    }
    for (int i = static_cast<int>(sups.size()) - 2; i >= 0; --i)
        if (eps_grid[i] < eps_grid[i + 1]) sups[i] = std::max(sups[i], sups[i + 1]);
    for (size_t i = 0; i < sups.size(); ++i)
        table.emplace_back(eps_grid[i], std::max(0.0, 2.0 - sups[i]));
    return table;
}

}  // namespace isodisplay::diag
