#include "isodisplay/pimple.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <stdexcept>

#include "isodisplay/lp.hpp"
#include "isodisplay/parallel.hpp"
#include "isodisplay/rng.hpp"

namespace isodisplay {

// forward-declared in normed_space.hpp
double pimple_norm_value(const NormedSpace& pimple_space, const VecD& y) {
    return pimple::multi_pimple_norm(pimple_space.base(), pimple_space.spikes(), y).value;
}

}  // namespace isodisplay

namespace isodisplay::pimple {

namespace {

// Single euclidean spike in drop form with u = 1 - lambda: the norm drops
// exactly when |<y,x0>| > lambda ||y||, i.e. when n - |b| < u n with the
// stable gap n - |b| = s^2/(n + |b|). The drop itself is a sum of O(u)
// terms, so depths far below the representable gap under 1.0 survive.
double euclid_drop(const VecD& x0, double u, const VecD& y) {
    double b = dot(y, x0);
    double c = dot(y, y);
    if (c == 0.0) return 0.0;
    double ab = std::fabs(b);
    double n = std::sqrt(c);
    // distance^2 of y to the spike axis, from the residual vector: the
    // difference c - b^2 cancels exactly in the near-parallel regime that
    // decides whether the spike is engaged
    double s2 = 0.0;
    for (size_t i = 0; i < y.size(); ++i) {
        double r = y[i] - b * x0[i];
        s2 += r * r;
    }
    double gap = s2 / (n + ab);  // n - |b| without cancellation
    if (gap >= u * n) return 0.0;
    double drop = gap + u * ab - std::sqrt(s2 * u * (2.0 - u));
    return std::max(drop, 0.0);
}

double single_euclid(const VecD& x0, double lambda, const VecD& y) {
    return norm2(y) - euclid_drop(x0, 1.0 - lambda, y);
}

double golden_min(const std::function<double(double)>& f, double lo, double hi, int iters = 200) {
    const double phi = 0.6180339887498949;
    double a = lo, b = hi;
    double x1 = b - phi * (b - a), x2 = a + phi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    for (int i = 0; i < iters && (b - a) > 1e-14 * (1.0 + std::fabs(a) + std::fabs(b)); ++i) {
        if (f1 < f2) {
            b = x2; x2 = x1; f2 = f1;
            x1 = b - phi * (b - a); f1 = f(x1);
        } else {
            a = x1; x1 = x2; f1 = f2;
            x2 = a + phi * (b - a); f2 = f(x2);
        }
    }
    return std::min(f1, f2);
}

}  // namespace

double single_pimple_drop(const VecD& x0, double depth, const VecD& y) {
    if (!(depth > 0.0 && depth < 0.5)) throw std::invalid_argument("single_pimple_drop: depth outside (0,1/2)");
    return euclid_drop(x0, depth, y);
}

double single_pimple_norm(const NormedSpace& base, const VecD& x0, double lambda, const VecD& y) {
    if (!(lambda > 0.5 && lambda < 1.0)) throw std::invalid_argument("single_pimple_norm: lambda outside (1/2,1)");
    if (std::fabs(base.norm(x0) - 1.0) > 1e-7) throw std::invalid_argument("single_pimple_norm: x0 not normalized");
    if (base.kind() == SpaceKind::Euclidean) return single_euclid(x0, lambda, y);
    double ny = base.norm(y);
    if (ny == 0.0) return 0.0;
    double bound = ny / lambda + 1.0;
    return golden_min([&](double t) {
        VecD r = y - t * x0;
        return base.norm(r) + lambda * std::fabs(t);
    }, -bound, bound);
}

MultiNormResult multi_pimple_norm(const NormedSpace& base, const std::vector<Spike>& spikes,
                                  const VecD& y, int max_cycles, double step_tol) {
    MultiNormResult res;
    res.coeffs.assign(spikes.size(), 0.0);
    if (spikes.empty()) {
        res.value = base.norm(y);
        res.residual = y;
        res.converged = true;
        return res;
    }

    if (base.kind() == SpaceKind::Polyhedral) {
        // LP route: min sum lambda_j (t+_j + t-_j) + s with
        // <f, y - V(t+ - t-)> <= s for every facet f.
        const auto& fs = base.facets();
        size_t k = spikes.size();
        int nvar = static_cast<int>(2 * k + 1);
        MatD A(static_cast<int>(fs.size()), nvar);
        VecD bb(fs.size());
        for (size_t fi = 0; fi < fs.size(); ++fi) {
            VecD f = to_double(fs[fi]);
            for (size_t j = 0; j < k; ++j) {
                double fv = dot(f, spikes[j].dir);
                A.at(static_cast<int>(fi), static_cast<int>(j)) = -fv;
                A.at(static_cast<int>(fi), static_cast<int>(k + j)) = fv;
            }
            A.at(static_cast<int>(fi), nvar - 1) = -1.0;
            bb[fi] = -dot(f, y);
        }
        // A z <= -b form: -A z >= ... convert to equalities with slacks via lp_solve_eq on
        // A z + u = b is wrong sign; use: constraint row r: <f,y> - <f,V(t+-t-)> - s <= 0
        //  =>  -<f,V>t+ + <f,V>t- - s <= -<f,y>, which is A z <= bb above with bb possibly negative;
        // add slack u >= 0: A z + u = bb.
        MatD Ae(A.rows, nvar + A.rows);
        for (int i = 0; i < A.rows; ++i) {
            for (int j = 0; j < nvar; ++j) Ae.at(i, j) = A.at(i, j);
            Ae.at(i, nvar + i) = 1.0;
        }
        VecD c(nvar + A.rows, 0.0);
        for (size_t j = 0; j < k; ++j) c[j] = c[k + j] = spikes[j].lambda();
        c[nvar - 1] = 1.0;
        LpResult lp = lp_solve_eq(Ae, bb, c);
        if (lp.status != LpResult::Status::Optimal)
            throw std::runtime_error("multi_pimple_norm: LP failed on polyhedral base");
        res.value = lp.value;
        for (size_t j = 0; j < k; ++j) res.coeffs[j] = lp.x[j] - lp.x[k + j];
        res.residual = y;
        for (size_t j = 0; j < k; ++j) res.residual = res.residual - res.coeffs[j] * spikes[j].dir;
        res.converged = true;
        return res;
    }

    if (base.kind() != SpaceKind::Euclidean)
        throw std::invalid_argument("multi_pimple_norm: base must be euclidean or polyhedral");

    // Cyclic exact line search on f(t) = ||y - V t||_2 + sum lambda_j |t_j|.
    VecD r = y;
    double scale = 1.0 + norm2(y);
    for (int cycle = 0; cycle < max_cycles; ++cycle) {
        double moved = 0.0;
        for (size_t j = 0; j < spikes.size(); ++j) {
            const VecD& v = spikes[j].dir;
            double u = spikes[j].depth;
            // current sub-problem target: z = r + t_j v
            VecD z = r + res.coeffs[j] * v;
            double b = dot(z, v);
            double c2 = dot(z, z);
            double t_new;
            double ab = std::fabs(b);
            double nz = std::sqrt(std::max(c2, 0.0));
            double rest = 0.0;  // axis distance^2 from the residual vector (no cancellation)
            for (size_t q = 0; q < z.size(); ++q) {
                double rr = z[q] - b * v[q];
                rest += rr * rr;
            }
            double gap = nz + ab > 0 ? rest / (nz + ab) : 0.0;  // nz - |b|, stable
            if (gap >= u * nz || ab == 0.0) {
                t_new = 0.0;
            } else {
                double shrink = (1.0 - u) * std::sqrt(rest / (u * (2.0 - u)));
                t_new = b > 0 ? b - shrink : b + shrink;
            }
            double dt = t_new - res.coeffs[j];
            if (dt != 0.0) {
                r = r - dt * v;
                res.coeffs[j] = t_new;
                moved = std::max(moved, std::fabs(dt));
            }
        }
        res.cycles = cycle + 1;
        if (moved <= step_tol * scale) {
            res.converged = true;
            break;
        }
    }
    if (!res.converged)
        throw std::runtime_error("multi_pimple_norm: no convergence within the cycle cap (ill-conditioned spikes)");
    res.residual = r;
    double pen = 0.0;
    for (size_t j = 0; j < spikes.size(); ++j) pen += spikes[j].lambda() * std::fabs(res.coeffs[j]);
    res.value = norm2(r) + pen;
    return res;
}

GaugeCertificate certify_pimple_norm(const NormedSpace& sp, const VecD& y) {
    GaugeCertificate cert;
    MultiNormResult opt = multi_pimple_norm(sp.base(), sp.spikes(), y);
    cert.upper = opt.value;
    double rn = norm2(opt.residual);
    if (rn < 1e-10) return cert;  // subgradient functional not defined by the residual
    VecD phi = (1.0 / rn) * opt.residual;
    double h = sp.dual_norm(phi);
    cert.lower = dot(phi, y) / h;
    cert.available = true;
    return cert;
}

PimpleSchedule distinguished_mu(const std::vector<VecD>& xs, const MatrixGroupD& G, double epsilon,
                                const NormedSpace& base, double tol) {
    if (xs.empty()) throw std::invalid_argument("distinguished_mu: empty sequence");
    if (!(epsilon > 0.0 && epsilon < 1.0)) throw std::invalid_argument("distinguished_mu: epsilon outside (0,1)");
    for (const auto& x : xs)
        if (std::fabs(base.norm(x) - 1.0) > 1e-7)
            throw std::invalid_argument("distinguished_mu: sequence entries must be normalized");
    {
        std::vector<VecD> copy(xs.begin(), xs.end());
        if (rank(copy, 1e-9) != static_cast<int>(xs.size()))
            throw std::invalid_argument("distinguished_mu: dependent sequence");
    }

    size_t n = xs.size();
    PimpleSchedule sched;
    sched.epsilon = epsilon;
    sched.alpha.assign(n, 0.0);
    sched.dist.assign(n, 0.0);
    sched.mu.assign(n, 0.0);

    std::vector<std::vector<double>> fixed;  // prefix for stabilizers
    for (size_t k = 0; k < n; ++k) {
        MatrixGroupD stab = k == 0 ? G : G.stabilizer(std::vector<VecD>(xs.begin(), xs.begin() + k));
        double a = 0.0;
        bool mover = false;
        for (const auto& g : stab.elements()) {
            double d = dist2(g.apply(xs[k]), xs[k]);
            if (d > tol * 10) {
                if (!mover || d < a) a = d;
                mover = true;
            }
        }
        if (!mover) a = k == 0 ? 1.0 : sched.alpha[k - 1];  // orbit fixed: any positive bound is vacuous
        if (k > 0) a = std::min(a, sched.alpha[k - 1]);     // decreasing, as the estimates require
        sched.alpha[k] = a;
        sched.dist[k] = k == 0 ? 1.0 : dist_to_span(xs[k], std::vector<VecD>(xs.begin(), xs.begin() + k));
        if (k > 0 && sched.dist[k] <= tol)
            throw std::invalid_argument("distinguished_mu: dependent sequence");
    }

    sched.mu[0] = 1.0;
    for (size_t k = 0; k + 1 < n; ++k) {
        double ak = sched.alpha[k], mk = sched.mu[k];
        double cap = std::min({
            std::min({ak * mk / 4.0, ak / 16.0, mk}) / 2.0,           // tail bound via halving
            std::min(ak * mk / 24.0, epsilon * sched.dist[k] * mk) / 8.0,
            ak * mk / (8.0 * (1.0 - epsilon) * sched.dist[k + 1]),
            epsilon / std::pow(2.0, static_cast<double>(k) + 3.0),    // keeps partial-sum norms near 1
            mk / 2.0,
        });
        double mu = std::pow(2.0, std::floor(std::log2(cap * 0.5)));  // largest power of 1/2 with 1/2 safety
        while (mu > cap * 0.5) mu /= 2.0;
        sched.mu[k + 1] = mu;
    }

    // Verify the verbatim conditions by direct evaluation.
    for (size_t k = 0; k < n; ++k) {
        double tail = 0.0;
        for (size_t j = k + 1; j < n; ++j) tail += sched.mu[j];
        if (k + 1 < n) {
            double ak = sched.alpha[k], mk = sched.mu[k];
            if (!(tail < std::min({ak * mk / 4.0, ak / 16.0, mk})))
                throw std::logic_error("distinguished_mu: tail condition violated");
            if (!(8.0 * sched.mu[k + 1] <= std::min(ak * mk / 24.0, epsilon * sched.dist[k] * mk)))
                throw std::logic_error("distinguished_mu: step condition violated");
            if (!((1.0 - epsilon) * sched.dist[k + 1] * sched.mu[k + 1] <= ak * mk / 8.0))
                throw std::logic_error("distinguished_mu: span condition violated");
        }
        VecD partial(xs[0].size(), 0.0);
        for (size_t j = 0; j <= k; ++j) partial = partial + sched.mu[j] * xs[j];
        double nv = base.norm(partial);
        if (!(nv >= 1.0 - epsilon / 2.0 && nv <= 1.0 + epsilon / 2.0) ||
            !(1.0 / nv >= 1.0 - epsilon / 2.0 && 1.0 / nv <= 1.0 + epsilon / 2.0))
            throw std::logic_error("distinguished_mu: partial-sum norm window violated");
    }
    return sched;
}

YSequence build_y_sequence(const std::vector<VecD>& xs, const PimpleSchedule& sched,
                           const MatrixGroupD& G, const NormedSpace& base) {
    size_t n = xs.size();
    if (sched.mu.size() != n) throw std::invalid_argument("build_y_sequence: schedule size mismatch");
    YSequence seq;
    VecD partial(xs[0].size(), 0.0);
    for (size_t k = 0; k < n; ++k) {
        partial = partial + sched.mu[k] * xs[k];
        seq.ys.push_back((1.0 / base.norm(partial)) * partial);
    }

    double eps = sched.epsilon;
    seq.min_margin_same = 1e300;
    seq.min_margin_cross = 1e300;
    for (size_t m = 0; m < n; ++m) {
        for (const auto& g : G.elements()) {
            VecD gy = g.apply(seq.ys[m]);
            // same index: either fixed (up to float error) or separated
            double d_same = base.norm(seq.ys[m] - gy);
            if (m + 1 < n) {
                double bound = (1.0 - eps) * sched.mu[m + 1] * sched.dist[m + 1];
                bool fixed = d_same <= 1e-12;
                if (!fixed && d_same < bound * (1.0 - 1e-9))
                    throw std::runtime_error("build_y_sequence: same-index separation violated (mu-schedule bug)");
                if (!fixed) seq.min_margin_same = std::min(seq.min_margin_same, d_same - bound);
            }
            for (size_t nn = m + 1; nn < n; ++nn) {
                double bound = (1.0 - eps) * sched.mu[m + 1] * sched.dist[m + 1];
                double d_cross = base.norm(seq.ys[nn] - gy);
                if (d_cross < bound * (1.0 - 1e-9))
                    throw std::runtime_error("build_y_sequence: cross separation violated (mu-schedule bug)");
                seq.min_margin_cross = std::min(seq.min_margin_cross, d_cross - bound);
            }
        }
    }
    return seq;
}

std::vector<LevelOrbit> level_orbits(const std::vector<VecD>& ys, const MatrixGroupD& G,
                                     const NormedSpace& base, const PimpleSchedule& sched) {
    // distinct points are at least (1-eps) mu_{m+1} d_{m+1} apart; anything
    // below a quarter of the smallest such bound is the same point up to
    // float error
    double floor_sep = 1e300;
    for (size_t k = 1; k < sched.mu.size(); ++k)
        floor_sep = std::min(floor_sep, (1.0 - sched.epsilon) * sched.mu[k] * sched.dist[k]);
    double eq_tol = sched.mu.size() > 1 ? floor_sep / 4.0 : 1e-9;

    std::vector<LevelOrbit> levels;
    auto close = [&](const VecD& a, const VecD& b) { return dist2(a, b) <= eq_tol; };
    for (const auto& y : ys) {
        LevelOrbit lv;
        lv.rep = y;
        for (const auto& g : G.elements()) {
            VecD p = g.apply(y);
            bool seen = false;
            for (const auto& q : lv.points)
                if (close(p, q) || close(-1.0 * p, q)) { seen = true; break; }
            if (!seen) lv.points.push_back(p);
        }
        levels.push_back(std::move(lv));
    }
    // c_k = min over j, g with y_j != g y_k of ||y_j - g y_k||
    for (size_t k = 0; k < levels.size(); ++k) {
        double c = 1e300;
        for (const auto& g : G.elements()) {
            VecD gy = g.apply(ys[k]);
            for (size_t j = 0; j < ys.size(); ++j) {
                double d = base.norm(ys[j] - gy);
                if (d > eq_tol) c = std::min(c, d);
            }
        }
        if (c >= 1e300) throw std::runtime_error("level_orbits: no separation found (degenerate orbits)");
        levels[k].c = c;
    }
    return levels;
}

namespace {

// Euclidean LUR gap 1 - lambda(x,c) with lambda(x,c) = sup ||x+y||/2 over
// unit y with ||x-y|| >= c, computed without cancellation at small c.
double lur_gap_euclid(double c) {
    double cc = std::min(c, 2.0);
    double q = cc * cc / 4.0;
    return q / (1.0 + std::sqrt(std::max(1.0 - q, 0.0)));
}

struct CheckOutcome {
    bool ok = true;
    std::string name;
    int level = -1;  // level to bump, -1 = all
};

double segment_length(double u) { return std::sqrt(u * (2.0 - u)) / (1.0 - u); }

double inv_gap(double u) { return u / (1.0 - u); }  // lambda^-1 - 1

std::vector<Spike> spikes_from(const std::vector<LevelOrbit>& levels, const VecD& depth) {
    std::vector<Spike> sp;
    for (size_t k = 0; k < levels.size(); ++k)
        for (const auto& p : levels[k].points)
            sp.push_back(Spike{p, depth[k], static_cast<int>(k)});
    return sp;
}

CheckOutcome run_lambda_checks(const NormedSpace& base, const std::vector<LevelOrbit>& levels,
                               const PimpleSchedule& sched, const VecD& depth, int samples,
                               uint64_t seed) {
    CheckOutcome out;
    size_t nlev = levels.size();
    for (size_t k = 0; k < nlev; ++k) {
        double u = depth[k];
        if (!(inv_gap(u) <= sched.delta[k] / 3.0 + 1e-15)) {
            out = {false, "lambda-delta margin (lambda^-1 - 1 <= delta/3)", static_cast<int>(k)};
            return out;
        }
        double w = segment_length(u);
        if (!(w >= inv_gap(u) - 1e-15 && w <= sched.b[k] * (1.0 + 1e-12))) {
            out = {false, "segment-length window (lambda^-1 - 1 <= ||w|| <= b)", static_cast<int>(k)};
            return out;
        }
        if (k > 0 && !(w <= 0.5 * segment_length(depth[k - 1]))) {
            out = {false, "segment-length level separation", static_cast<int>(k)};
            return out;
        }
    }
    auto spikes = spikes_from(levels, depth);
    NormedSpace sp = NormedSpace::pimple(base, spikes);
    Rng rng(seed);
    int dim = base.dim();
    for (int i = 0; i < samples; ++i) {
        VecD y = rng.sphere(dim);
        double multi = sp.norm(y);
        double maxdrop = 0.0;
        for (const auto& s : spikes) maxdrop = std::max(maxdrop, euclid_drop(s.dir, s.depth, y));
        if (maxdrop > 1e-12) {
            // a norm drop must happen delta-close to a spike
            bool near = false;
            int nearest_level = -1;
            double nearest = 1e300;
            for (const auto& s : spikes) {
                double d = std::min(dist2(y, s.dir), dist2(y, -1.0 * s.dir));
                if (d < nearest) { nearest = d; nearest_level = s.level; }
                if (d < sched.delta[s.level]) { near = true; break; }
            }
            if (!near) {
                out = {false, "norm drop outside all delta neighborhoods", nearest_level};
                return out;
            }
        }
        double min_single = norm2(y) - maxdrop;
        if (std::fabs(multi - min_single) > 1e-7) {
            out = {false, "min-decomposition identity", -1};
            return out;
        }
    }
    for (const auto& s : spikes) {
        if (std::fabs(sp.norm(s.dir) - s.lambda()) > 1e-9) {
            out = {false, "spike gauge identity ||v||_Lambda = lambda", s.level};
            return out;
        }
    }
    return out;
}

}  // namespace

LambdaReport select_lambda(const NormedSpace& base, const std::vector<LevelOrbit>& levels,
                           PimpleSchedule& sched, int samples, uint64_t seed) {
    size_t nlev = levels.size();
    if (sched.delta.size() != nlev || sched.eps_k.size() != nlev || sched.c.size() != nlev)
        throw std::invalid_argument("select_lambda: schedule not prepared");
    sched.b.assign(nlev, 0.0);
    sched.depth.assign(nlev, 0.0);
    sched.lambda.assign(nlev, 0.0);

    // upper bound on the depth u = 1 - lambda at level k
    auto depth_cap = [&](size_t k) {
        double d = sched.delta[k];
        double cap = 0.3;                        // keeps lambda well inside (1/2,1)
        cap = std::min(cap, d / (3.0 + d));      // lambda^-1 - 1 <= delta/3
        cap = std::min(cap, d * d / 2.0);        // euclidean drop region inside the delta ball
        cap = std::min(cap, 1.0 - sched.m);      // pointwise lower equivalence m||.|| <= ||.||_Lambda
        if (k > 0) {
            // maximal segments shrink by half per level, so segment length
            // separates the levels (the b-chain of the recovery argument);
            // the depth with segment length s is 1 - 1/sqrt(1+s^2), written
            // without cancellation
            double s = 0.45 * segment_length(sched.depth[k - 1]);
            double root = std::sqrt(1.0 + s * s);
            cap = std::min(cap, s * s / (root * (1.0 + root)));
        }
        return cap;
    };

    for (size_t k = 0; k < nlev; ++k) {
        sched.depth[k] = 0.9 * depth_cap(k);
        if (sched.depth[k] <= 0.0) {
            LambdaReport rep;
            rep.ok = false;
            rep.failing_check = "depth underflow (schedule below double precision)";
            rep.depth = sched.depth;
            return rep;
        }
        sched.b[k] = segment_length(sched.depth[k]);
    }

    LambdaReport rep;
    for (int round = 0; round < 80; ++round) {
        CheckOutcome chk = run_lambda_checks(base, levels, sched, sched.depth, samples, seed);
        if (chk.ok) {
            rep.ok = true;
            rep.depth = sched.depth;
            rep.lambda.clear();
            for (double u : sched.depth) rep.lambda.push_back(1.0 - u);
            sched.lambda = rep.lambda;
            return rep;
        }
        rep.failing_check = chk.name;
        // shrink the offending level's depth (lambda toward 1) and re-derive
        size_t from = chk.level >= 0 ? static_cast<size_t>(chk.level) : 0;
        for (size_t k = from; k < nlev; ++k) {
            if (chk.level < 0 || k == from) sched.depth[k] /= 2.0;
            sched.depth[k] = std::min(sched.depth[k], 0.9 * depth_cap(k));
            sched.b[k] = segment_length(sched.depth[k]);
        }
    }
    rep.ok = false;
    rep.depth = sched.depth;
    return rep;
}

PropertyReport check_pimple_properties(const NormedSpace& space, const PimpleSchedule& sched,
                                       int N, uint64_t seed) {
    PropertyReport rep;
    const NormedSpace& base = space.base();
    const auto& spikes = space.spikes();
    int dim = base.dim();

    // (i) multi == min single and (ii) drops only near spikes, on N samples
    Rng rng(seed);
    std::vector<VecD> pts(static_cast<size_t>(N));
    for (auto& p : pts) p = rng.sphere(dim);
    std::vector<double> gap(pts.size(), 0.0), near(pts.size(), 0.0);
    std::vector<int> bad(pts.size(), 0);
    parallel_for(pts.size(), [&](size_t i) {
        const VecD& y = pts[i];
        double multi = space.norm(y);
        double maxdrop = 0.0;
        for (const auto& s : spikes) maxdrop = std::max(maxdrop, euclid_drop(s.dir, s.depth, y));
        gap[i] = std::fabs(multi - (norm2(y) - maxdrop));
        if (maxdrop > 1e-12) {
            double nearest = 1e300;
            int lev = 0;
            for (const auto& s : spikes) {
                double d = std::min(dist2(y, s.dir), dist2(y, -1.0 * s.dir));
                if (d < nearest) { nearest = d; lev = s.level; }
            }
            near[i] = nearest;
            if (nearest >= sched.delta[lev]) bad[i] = 1;
        }
    });
    for (size_t i = 0; i < pts.size(); ++i) {
        rep.max_min_decomposition_gap = std::max(rep.max_min_decomposition_gap, gap[i]);
        rep.max_spike_distance = std::max(rep.max_spike_distance, near[i]);
        if (gap[i] > 1e-7) rep.failures.push_back("min-decomposition gap " + std::to_string(gap[i]));
        if (bad[i]) rep.failures.push_back("norm drop far from spikes");
    }
    rep.checked = N;

    // (iii) points added by different spikes stay c_min/3 apart
    rep.min_cross_separation = 1e300;
    if (base.kind() == SpaceKind::Euclidean && dim >= 2) {
        Rng rng2(seed ^ 0xabcdef);
        std::vector<std::vector<VecD>> region(spikes.size());
        for (size_t j = 0; j < spikes.size(); ++j) {
            const auto& s = spikes[j];
            for (int rep_i = 0; rep_i < 8; ++rep_i) {
                VecD u = rng2.sphere(dim);
                double pr = dot(u, s.dir);
                u = u - pr * s.dir;
                double un = norm2(u);
                if (un < 1e-9) continue;
                u = (1.0 / un) * u;
                double ud = s.depth;
                // tangency point and spike tip of the cap geometry
                VecD q = (1.0 - ud) * s.dir + std::sqrt(ud * (2.0 - ud)) * u;
                VecD tip = s.dir + (ud / (1.0 - ud)) * s.dir;
                for (double t : {0.15, 0.5, 0.85})
                    region[j].push_back(tip + t * (q - tip));
            }
        }
        for (size_t j = 0; j < spikes.size(); ++j)
            for (size_t l = j + 1; l < spikes.size(); ++l) {
                if (dist2(spikes[j].dir, spikes[l].dir) < 1e-9 ||
                    dist2(spikes[j].dir, -1.0 * spikes[l].dir) < 1e-9)
                    continue;
                double bound = sched.c[std::min(spikes[j].level, spikes[l].level)] / 3.0;
                for (const auto& p : region[j])
                    for (const auto& q : region[l]) {
                        double d = base.norm(p - q);
                        rep.min_cross_separation = std::min(rep.min_cross_separation, d);
                        if (d < bound - 1e-9)
                            rep.failures.push_back("cross-spike separation below c_min/3");
                    }
            }
    }
    rep.pass = rep.failures.empty();
    return rep;
}

PimpleStage build_pimple_stage(const NormedSpace& base, const MatrixGroupD& G, std::vector<VecD> xs,
                               int samples, uint64_t seed, double tol) {
    if (base.kind() != SpaceKind::Euclidean)
        throw std::invalid_argument("display_renorm: base norm must be LUR (euclidean)");
    if (!G.contains_minus_id())
        throw std::invalid_argument("display_renorm: group must contain -Id");

    // prune to a linearly independent subsequence, left to right
    std::vector<VecD> pruned;
    for (auto& x : xs) {
        double nx = base.norm(x);
        if (nx <= tol) continue;
        VecD u = (1.0 / nx) * x;
        if (pruned.empty() || dist_to_span(u, pruned) > 1e-8) pruned.push_back(u);
    }
    if (pruned.empty()) throw std::invalid_argument("display_renorm: empty sequence");

    PimpleStage stage{NormedSpace::euclidean(base.dim()), {}, {}, pruned, {}, {}};
    stage.schedule = distinguished_mu(pruned, G, 0.5, base, tol);
    YSequence seq = build_y_sequence(pruned, stage.schedule, G, base);
    stage.ys = seq.ys;
    stage.levels = level_orbits(stage.ys, G, base, stage.schedule);

    size_t nlev = stage.levels.size();
    stage.schedule.c.resize(nlev);
    stage.schedule.eps_k.resize(nlev);
    stage.schedule.delta.resize(nlev);
    double min_c_so_far = 1e300;
    for (size_t k = 0; k < nlev; ++k) {
        double c = stage.levels[k].c;
        stage.schedule.c[k] = c;
        min_c_so_far = std::min(min_c_so_far, c);
        stage.schedule.eps_k[k] = std::min(c / 2.0, 1.0);
        double d = std::min({c / 4.0, stage.schedule.eps_k[k] / 2.0, min_c_so_far / 4.0,
                             (2.0 / 3.0) * lur_gap_euclid(c)});
        if (k > 0) d = std::min(d, stage.schedule.delta[k - 1]);
        stage.schedule.delta[k] = d;
    }

    stage.lambda_report = select_lambda(base, stage.levels, stage.schedule, samples, seed);
    if (!stage.lambda_report.ok)
        throw std::runtime_error("display_renorm: lambda search exhausted precision; smallest failing check: " +
                                 stage.lambda_report.failing_check);
    stage.space = NormedSpace::pimple(base, spikes_from(stage.levels, stage.schedule.depth), tol * 100);
    return stage;
}

DisplayResult display_renorm(const NormedSpace& base, const MatrixGroupD& G, std::vector<VecD> xs,
                             int samples, uint64_t seed, double tol) {
    PimpleStage stage = build_pimple_stage(base, G, std::move(xs), samples, seed, tol);
    if (static_cast<int>(stage.xs.size()) != base.dim())
        throw std::invalid_argument("display_renorm: sequence does not span the space");

    DisplayResult res{stage.space, G, stage.xs, stage.ys, stage.levels, stage.schedule, {}, stage.lambda_report, {}};
    size_t nlev = res.levels.size();
    for (size_t k = 0; k < nlev; ++k) {
        double f = res.schedule.depth[k] / (1.0 - res.schedule.depth[k]);
        for (const auto& p : res.levels[k].points) {
            VecD tip = p + f * p;
            res.tips.push_back(Tip{tip, static_cast<int>(k)});
            res.tips.push_back(Tip{-1.0 * tip, static_cast<int>(k)});
        }
    }
    res.properties = check_pimple_properties(res.space, res.schedule, samples, seed ^ 0x5eed);
    return res;
}

RecoveryReport isometry_group_from_extremes(const DisplayResult& result, int sample_count,
                                            uint64_t seed, double tol) {
    const auto& tips = result.tips;
    int dim = result.space.dim();
    {
        std::vector<VecD> pts;
        for (const auto& t : tips) pts.push_back(t.point);
        if (rank(pts, 1e-9) != dim)
            throw std::invalid_argument("isometry_group_from_extremes: extreme points do not span");
    }

    // spanning subset, greedy by level then order
    std::vector<int> span_idx;
    {
        std::vector<VecD> acc;
        for (size_t i = 0; i < tips.size() && static_cast<int>(span_idx.size()) < dim; ++i) {
            if (dist_to_span(tips[i].point, acc) > 1e-9) {
                acc.push_back(tips[i].point);
                span_idx.push_back(static_cast<int>(i));
            }
        }
    }

    MatD S(dim, dim);
    for (int j = 0; j < dim; ++j)
        for (int i = 0; i < dim; ++i) S.at(i, j) = tips[span_idx[j]].point[i];

    // tips grouped per level for image enumeration and membership checks
    std::map<int, std::vector<int>> by_level;
    for (size_t i = 0; i < tips.size(); ++i) by_level[tips[i].level].push_back(static_cast<int>(i));

    RecoveryReport rep;
    rep.min_rejection_deviation = 1e300;
    std::vector<MatD> survivors;
    std::vector<int> choice(span_idx.size(), 0);

    // enumerate level-preserving images of the spanning tips
    std::function<void(size_t)> dfs = [&](size_t pos) {
        if (pos == span_idx.size()) {
            ++rep.candidates;
            MatD IMG(dim, dim);
            for (size_t j = 0; j < span_idx.size(); ++j) {
                const VecD& img = tips[choice[j]].point;
                for (int i = 0; i < dim; ++i) IMG.at(i, static_cast<int>(j)) = img[i];
            }
            // T S = IMG  =>  solve per column of S^{-1}: T = IMG * S^{-1}
            // compute via solving S^T T^T = IMG^T
            MatD St(dim, dim), IMGt(dim, dim);
            for (int i = 0; i < dim; ++i)
                for (int j = 0; j < dim; ++j) { St.at(i, j) = S.at(j, i); IMGt.at(i, j) = IMG.at(j, i); }
            MatD T(dim, dim);
            for (int col = 0; col < dim; ++col) {
                VecD rhs(dim);
                for (int i = 0; i < dim; ++i) rhs[i] = IMGt.at(i, col);
                auto x = solve(St, rhs);
                if (!x) return;
                for (int i = 0; i < dim; ++i) T.at(col, i) = (*x)[i];
            }
            // consistency on the rest of E: T must permute tips level-wise
            std::vector<bool> used(tips.size(), false);
            for (size_t i = 0; i < tips.size(); ++i) {
                VecD img = T.apply(tips[i].point);
                int m = -1;
                for (int cand : by_level[tips[i].level])
                    if (!used[cand] && dist2(img, tips[cand].point) <= 1e-6) { m = cand; break; }
                if (m < 0) return;
                used[m] = true;
            }
            for (const auto& s : survivors)
                if ([&] {
                        for (size_t q = 0; q < s.a.size(); ++q)
                            if (std::fabs(s.a[q] - T.a[q]) > 1e-7) return false;
                        return true;
                    }())
                    return;
            survivors.push_back(T);
            return;
        }
        int level = tips[span_idx[pos]].level;
        for (int cand : by_level[level]) {
            choice[pos] = cand;
            dfs(pos + 1);
        }
    };
    dfs(0);

    // certification
    Rng rng(seed);
    std::vector<VecD> sample;
    for (int i = 0; i < sample_count; ++i) sample.push_back(rng.sphere(dim));
    std::vector<MatD> members;
    for (const auto& T : survivors) {
        double best = 1e300;
        for (const auto& g : result.group.elements()) {
            double err = 0.0;
            for (size_t q = 0; q < g.a.size(); ++q) err = std::max(err, std::fabs(g.a[q] - T.a[q]));
            best = std::min(best, err);
        }
        if (best <= 1e-6) {
            members.push_back(T);
            rep.max_member_error = std::max(rep.max_member_error, best);
            continue;
        }
        double dev = 0.0;
        for (const auto& x : sample)
            dev = std::max(dev, std::fabs(result.space.norm(T.apply(x)) - result.space.norm(x)));
        if (dev > 10.0 * tol) {
            ++rep.nonmembers_rejected;
            rep.min_rejection_deviation = std::min(rep.min_rejection_deviation, dev);
        } else {
            rep.anomalies.push_back("candidate outside the group passed the norm-deviation test");
        }
    }
    rep.recovered = MatrixGroupD::from_elements(std::move(members), tol);
    rep.equals_input = rep.recovered.same_elements(result.group);
    return rep;
}

EmbeddingResult central_involution_embedding(const graphs::PermGroup& h, const graphs::Perm& s, int r) {
    using graphs::Perm;
    int deg = h.degree();
    if (static_cast<int>(s.size()) != deg || !h.contains(s))
        throw std::invalid_argument("central_involution_embedding: s not in the group");
    if (s == graphs::identity_perm(deg))
        throw std::invalid_argument("central_involution_embedding: s is the identity");
    if (graphs::compose(s, s) != graphs::identity_perm(deg))
        throw std::invalid_argument("central_involution_embedding: s is not an involution");
    for (const auto& g : h.elements())
        if (graphs::compose(g, s) != graphs::compose(s, g))
            throw std::invalid_argument("central_involution_embedding: s is not central");
    if (r < 0) throw std::invalid_argument("central_involution_embedding: negative depth");

    std::vector<int> moved;
    for (int i = 0; i < deg; ++i)
        if (s[i] != i) moved.push_back(i);
    if (moved.empty()) throw std::invalid_argument("central_involution_embedding: moved set empty");
    if (!h.faithful_on(moved))
        throw std::invalid_argument("central_involution_embedding: group not faithful on the moved set");

    // points of B x {0..r}, ordered lexicographically (the linear order)
    struct Pt { int n, j; };
    std::vector<Pt> pts;
    for (int n : moved)
        for (int j = 0; j <= r; ++j) pts.push_back({n, j});
    auto pt_index = [&](int n, int j) {
        for (size_t i = 0; i < pts.size(); ++i)
            if (pts[i].n == n && pts[i].j == j) return static_cast<int>(i);
        throw std::logic_error("central_involution_embedding: point lookup failed");
    };

    // s-orbits: {p, s p}; record (min, max) by the order
    std::vector<std::pair<int, int>> orbits;
    std::vector<int> orbit_of(pts.size(), -1);
    for (size_t i = 0; i < pts.size(); ++i) {
        if (orbit_of[i] >= 0) continue;
        int partner = pt_index(s[pts[i].n], pts[i].j);
        orbit_of[i] = orbit_of[partner] = static_cast<int>(orbits.size());
        orbits.emplace_back(static_cast<int>(i), partner);  // i < partner by lex construction
    }
    int dim = static_cast<int>(orbits.size());

    EmbeddingResult res;
    res.dim = dim;
    std::vector<MatD> mats;
    for (const auto& g : h.elements()) {
        MatD M(dim, dim);
        for (int oi = 0; oi < dim; ++oi) {
            auto [lo, hi] = orbits[oi];
            int img_lo = pt_index(g[pts[lo].n], pts[lo].j);
            int img_hi = pt_index(g[pts[hi].n], pts[hi].j);
            int target = orbit_of[img_lo];
            if (orbit_of[img_hi] != target)
                throw std::logic_error("central_involution_embedding: orbit not preserved");
            double sign = img_lo == orbits[target].first ? 1.0 : -1.0;  // preserves vs reverses the order
            M.at(target, oi) = sign;
        }
        mats.push_back(std::move(M));
        res.element_of.push_back(static_cast<int>(mats.size()) - 1);
    }

    // homomorphism law and the image of s
    const auto& elems = h.elements();
    for (size_t i = 0; i < elems.size(); ++i)
        for (size_t j = 0; j < elems.size(); ++j) {
            Perm gf = graphs::compose(elems[i], elems[j]);
            size_t k = std::find(elems.begin(), elems.end(), gf) - elems.begin();
            MatD prod = mats[i] * mats[j];
            if (!(prod == mats[k]))
                throw std::logic_error("central_involution_embedding: homomorphism law failed");
        }
    {
        size_t si = std::find(elems.begin(), elems.end(), s) - elems.begin();
        MatD minus = MatD::identity(dim);
        for (auto& v : minus.a) v = -v;
        if (!(mats[si] == minus))
            throw std::logic_error("central_involution_embedding: s does not map to -Id");
    }

    res.group = MatrixGroupD::from_elements(std::move(mats));
    return res;
}

DisplayResult power_display(const NormedSpace& base, const MatrixGroupD& G,
                            const std::vector<VecD>& witnesses, double alpha,
                            int samples, uint64_t seed) {
    if (base.kind() != SpaceKind::Euclidean)
        throw std::invalid_argument("power_display: base must be euclidean");
    if (witnesses.empty()) throw std::invalid_argument("power_display: empty witness family");
    int d = base.dim();
    int r = static_cast<int>(witnesses.size());
    for (const auto& w : witnesses)
        if (static_cast<int>(w.size()) != d) throw std::invalid_argument("power_display: witness dimension mismatch");

    for (size_t gi = 0; gi < G.order(); ++gi) {
        if (static_cast<int>(gi) == G.identity_index()) continue;
        double disp = 0.0;
        for (const auto& w : witnesses)
            disp = std::max(disp, dist2(G.element(gi).apply(w), w));
        if (disp < alpha - 1e-12)
            throw std::invalid_argument("power_display: no finite witness family at the gap alpha");
    }

    NormedSpace product = NormedSpace::euclidean(d * r);
    std::vector<MatD> lifted;
    for (const auto& g : G.elements()) {
        MatD M(d * r, d * r);
        for (int b = 0; b < r; ++b)
            for (int i = 0; i < d; ++i)
                for (int j = 0; j < d; ++j) M.at(b * d + i, b * d + j) = g.at(i, j);
        lifted.push_back(std::move(M));
    }
    MatrixGroupD Gp = MatrixGroupD::from_elements(std::move(lifted), G.tolerance());

    VecD x0(d * r);
    for (int b = 0; b < r; ++b)
        for (int i = 0; i < d; ++i) x0[b * d + i] = witnesses[b][i];
    double n0 = norm2(x0);
    if (n0 <= 0) throw std::invalid_argument("power_display: zero witness point");
    x0 = (1.0 / n0) * x0;

    // the concatenated point is distinguished with gap >= alpha / ||concat||
    for (size_t gi = 0; gi < Gp.order(); ++gi) {
        if (static_cast<int>(gi) == Gp.identity_index()) continue;
        if (dist2(Gp.element(gi).apply(x0), x0) < alpha / n0 - 1e-9)
            throw std::logic_error("power_display: concatenated point not distinguished at the claimed gap");
    }

    std::vector<VecD> seq{x0};
    for (int i = 0; i < d * r; ++i) {
        VecD e(d * r, 0.0);
        e[i] = 1.0;
        seq.push_back(e);
    }
    return display_renorm(product, Gp, seq, samples, seed);
}

}  // namespace isodisplay::pimple
