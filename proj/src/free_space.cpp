#include "isodisplay/free_space.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

#include "isodisplay/lp.hpp"
#include "isodisplay/rng.hpp"

namespace isodisplay::freespace {

void FiniteMetricSpace::validate(double tol) const {
    int n = size();
    if (n == 0) throw std::invalid_argument("metric: empty point set");
    if (d.cols != n) throw std::invalid_argument("metric: matrix not square");
    if (!points.empty() && static_cast<int>(points.size()) != n)
        throw std::invalid_argument("metric: label count mismatch");
    for (int i = 0; i < n; ++i) {
        if (std::fabs(d.at(i, i)) > tol) throw std::invalid_argument("metric: nonzero diagonal");
        for (int j = 0; j < n; ++j) {
            if (std::fabs(d.at(i, j) - d.at(j, i)) > tol) throw std::invalid_argument("metric: not symmetric");
            if (i != j && d.at(i, j) <= tol) throw std::invalid_argument("metric: non-positive distance");
            for (int k = 0; k < n; ++k)
                if (d.at(i, j) > d.at(i, k) + d.at(k, j) + tol)
                    throw std::invalid_argument("metric: triangle inequality fails");
        }
    }
}

double FiniteMetricSpace::diameter() const {
    double diam = 0.0;
    for (int i = 0; i < size(); ++i)
        for (int j = 0; j < size(); ++j) diam = std::max(diam, d.at(i, j));
    return diam;
}

ConcavityReport FiniteMetricSpace::concavity(double tol) const {
    ConcavityReport rep;
    rep.diameter = diameter();
    rep.min_margin = 1e300;
    int n = size();
    if (n < 3) rep.min_margin = rep.diameter;  // no distinct triples to constrain
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y)
            for (int z = 0; z < n; ++z) {
                if (x == y || y == z || x == z) continue;
                rep.min_margin = std::min(rep.min_margin, d.at(x, y) + d.at(y, z) - d.at(x, z));
            }
    rep.concave = rep.min_margin > tol && rep.diameter < 1.0;
    return rep;
}

FiniteMetricSpace transform_bounded(const FiniteMetricSpace& m) {
    m.validate();
    FiniteMetricSpace out = m;
    for (auto& v : out.d.a) v = v / (1.0 + v);
    return out;
}

FiniteMetricSpace transform_concave(const FiniteMetricSpace& m, ConcavityReport* report) {
    m.validate();
    if (m.diameter() >= 1.0) throw std::invalid_argument("transform_concave: diameter must be < 1");
    FiniteMetricSpace out = m;
    for (auto& v : out.d.a) v = std::sqrt(v);
    ConcavityReport rep = out.concavity();
    if (report) *report = rep;
    return out;
}

graphs::PermGroup metric_isometry_group(const FiniteMetricSpace& m, int cap, double tol) {
    m.validate(tol);
    int n = m.size();
    if (n > cap) throw std::runtime_error("metric_isometry_group: point cap exceeded");

    // distance profiles prune candidate images
    auto profile = [&](int v) {
        VecD row(n);
        for (int j = 0; j < n; ++j) row[j] = m.d.at(v, j);
        std::sort(row.begin(), row.end());
        return row;
    };
    std::vector<VecD> profiles(n);
    for (int v = 0; v < n; ++v) profiles[v] = profile(v);
    auto profile_eq = [&](int a, int b) {
        for (int j = 0; j < n; ++j)
            if (std::fabs(profiles[a][j] - profiles[b][j]) > tol) return false;
        return true;
    };

    std::vector<graphs::Perm> found;
    graphs::Perm map(n, -1);
    std::vector<bool> used(n, false);
    std::function<void(int)> dfs = [&](int v) {
        if (v == n) {
            found.push_back(map);
            return;
        }
        for (int u = 0; u < n; ++u) {
            if (used[u] || !profile_eq(v, u)) continue;
            bool ok = true;
            for (int w = 0; w < v && ok; ++w)
                if (std::fabs(m.d.at(v, w) - m.d.at(u, map[w])) > tol) ok = false;
            if (!ok) continue;
            map[v] = u;
            used[u] = true;
            dfs(v + 1);
            used[u] = false;
        }
        map[v] = -1;
    };
    dfs(0);
    return graphs::PermGroup::from_elements(n, std::move(found));
}

bool admits_dilation(const FiniteMetricSpace& m, double lambda, double tol) {
    // a surjective lambda-dilation scales the (finite, positive) diameter by
    // lambda while mapping the space onto itself
    if (m.size() < 2) return std::fabs(lambda - 1.0) <= tol;
    return std::fabs(lambda - 1.0) <= tol / m.diameter();
}

void Molecule::validate(double tol) const {
    double s = 0.0;
    for (double v : mass) s += v;
    if (std::fabs(s) > tol) throw std::invalid_argument("molecule: masses do not sum to zero");
}

Molecule Molecule::atom(int n, int x, int y) {
    if (x == y) throw std::invalid_argument("molecule: degenerate atom");
    Molecule mol;
    mol.mass.assign(n, 0.0);
    mol.mass[x] = 1.0;
    mol.mass[y] = -1.0;
    return mol;
}

DualResult ae_norm_dual(const FiniteMetricSpace& m, const Molecule& mol) {
    mol.validate();
    if (static_cast<int>(mol.mass.size()) != m.size())
        throw std::invalid_argument("ae_norm_dual: molecule size mismatch");
    int n = m.size();
    DualResult res;
    res.witness.assign(n, 0.0);
    if (n == 1) return res;

    // variables x_v = f(v) + d(v, y0) >= 0 for v != y0 (f(y0) = 0 pinned);
    // constraints f(a) - f(b) <= d(a,b) become x_a - x_b <= d(a,b) + D_a - D_b
    // with nonnegative rhs by the triangle inequality.
    VecD D(n);
    for (int v = 0; v < n; ++v) D[v] = m.d.at(v, 0);
    int nv = n - 1;  // variable index v-1 for point v
    std::vector<VecD> rows;
    VecD rhs;
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            if (a == b) continue;
            VecD row(nv, 0.0);
            if (a != 0) row[a - 1] += 1.0;
            if (b != 0) row[b - 1] -= 1.0;
            rows.push_back(std::move(row));
            rhs.push_back(m.d.at(a, b) + D[a] - D[b]);
        }
    MatD A(static_cast<int>(rows.size()), nv);
    for (size_t i = 0; i < rows.size(); ++i)
        for (int j = 0; j < nv; ++j) A.at(static_cast<int>(i), j) = rows[i][j];
    VecD c(nv);
    for (int v = 1; v < n; ++v) c[v - 1] = mol.mass[v];
    LpResult lp = lp_solve_max_leq(A, rhs, c);
    if (lp.status != LpResult::Status::Optimal)
        throw std::runtime_error("ae_norm_dual: LP did not reach an optimum");
    double shift = 0.0;
    for (int v = 0; v < n; ++v) shift += mol.mass[v] * D[v];
    res.value = lp.value - shift + mol.mass[0] * 0.0;
    for (int v = 1; v < n; ++v) res.witness[v] = lp.x[v - 1] - D[v];
    // certify the witness is 1-Lipschitz
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            if (std::fabs(res.witness[a] - res.witness[b]) > m.d.at(a, b) + 1e-7)
                throw std::logic_error("ae_norm_dual: witness not 1-Lipschitz");
    return res;
}

ExtremeAtomReport free_extreme_atoms(const FiniteMetricSpace& m, double tol) {
    ExtremeAtomReport rep;
    ConcavityReport conc = m.concavity(tol);
    rep.concave_verified = conc.concave;
    int n = m.size();

    std::vector<VecD> atom_vecs;  // mass coordinates of all normalized atoms
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y) {
            if (x == y) continue;
            rep.atoms.push_back(Atom{x, y, 1.0 / m.d.at(x, y)});
            VecD v(n, 0.0);
            v[x] = 1.0 / m.d.at(x, y);
            v[y] = -1.0 / m.d.at(x, y);
            atom_vecs.push_back(std::move(v));
        }
    rep.extreme.assign(rep.atoms.size(), false);
    for (size_t i = 0; i < rep.atoms.size(); ++i) {
        std::vector<VecD> others;
        for (size_t j = 0; j < atom_vecs.size(); ++j)
            if (j != i) others.push_back(atom_vecs[j]);
        rep.extreme[i] = !in_convex_hull(atom_vecs[i], others, 1e-8);
    }
    rep.all_extreme = std::all_of(rep.extreme.begin(), rep.extreme.end(), [](bool b) { return b; });
    return rep;
}

FreeIsometryReport ae_isometry_group(const FiniteMetricSpace& m, int sample_molecules, uint64_t seed,
                                     double tol) {
    FreeIsometryReport rep;
    int n = m.size();
    if (n < 3) throw std::invalid_argument("ae_isometry_group: at least 3 points required");
    ConcavityReport conc = m.concavity(tol);
    if (!conc.concave)
        throw std::invalid_argument("ae_isometry_group: metric not concave (extremality may fail)");

    graphs::PermGroup isom = metric_isometry_group(m, std::max(10, n), tol);
    rep.metric_isometries = isom.order();

    // candidates sigma * P_g on mass coordinates
    std::vector<MatD> cands;
    for (const auto& g : isom.elements())
        for (int sigma : {1, -1}) {
            MatD M(n, n);
            for (int v = 0; v < n; ++v) M.at(g[v], v) = sigma;
            cands.push_back(std::move(M));
        }

    // certification: exact on atoms, sampled on random molecules via both
    // the primal and dual route
    Rng rng(seed);
    std::vector<Molecule> sample;
    for (int s = 0; s < sample_molecules; ++s) {
        Molecule mol;
        mol.mass.assign(n, 0.0);
        double total = 0.0;
        for (int v = 0; v < n; ++v) { mol.mass[v] = rng.gauss(); total += mol.mass[v]; }
        for (int v = 0; v < n; ++v) mol.mass[v] -= total / n;
        sample.push_back(std::move(mol));
    }
    for (const auto& T : cands) {
        for (int x = 0; x < n; ++x)
            for (int y = 0; y < n; ++y) {
                if (x == y) continue;
                Molecule a = Molecule::atom(n, x, y);
                Molecule ta;
                ta.mass = T.apply(a.mass);
                double na = ae_norm_primal(m, a).value;
                double nta = ae_norm_primal(m, ta).value;
                if (std::fabs(na - nta) > 1e-9)
                    throw std::logic_error("ae_isometry_group: candidate fails on an atom");
            }
        for (const auto& mol : sample) {
            Molecule tm;
            tm.mass = T.apply(mol.mass);
            if (std::fabs(ae_norm_primal(m, mol).value - ae_norm_primal(m, tm).value) > 1e-8 ||
                std::fabs(ae_norm_dual(m, mol).value - ae_norm_dual(m, tm).value) > 1e-7)
                throw std::logic_error("ae_isometry_group: candidate fails on a sampled molecule");
        }
    }

    // completeness: enumerate every linear map permuting the normalized
    // atoms (basis coordinates b_i = 1_{y_i} - 1_{y_0}, i = 1..n-1)
    int dim = n - 1;
    std::vector<VecD> atoms;      // in basis coordinates
    std::vector<VecD> atoms_mass; // in mass coordinates (for matching)
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y) {
            if (x == y) continue;
            VecD b(dim, 0.0);
            double w = 1.0 / m.d.at(x, y);
            if (x != 0) b[x - 1] += w;
            if (y != 0) b[y - 1] -= w;
            atoms.push_back(b);
            VecD mm(n, 0.0);
            mm[x] = w;
            mm[y] = -w;
            atoms_mass.push_back(mm);
        }

    // invariant bilinear form Q = sum a a^T over atoms; any map with
    // T(A) = A preserves B(x,y) = x^T Q^{-1} y
    MatD Q(dim, dim);
    for (const auto& a : atoms)
        for (int i = 0; i < dim; ++i)
            for (int j = 0; j < dim; ++j) Q.at(i, j) += a[i] * a[j];
    MatD Qinv(dim, dim);
    {
        for (int col = 0; col < dim; ++col) {
            VecD e(dim, 0.0);
            e[col] = 1.0;
            auto x = solve(Q, e);
            if (!x) throw std::logic_error("ae_isometry_group: atom Gram matrix singular");
            for (int i = 0; i < dim; ++i) Qinv.at(i, col) = (*x)[i];
        }
    }
    auto bform = [&](const VecD& u, const VecD& v) {
        double s = 0.0;
        for (int i = 0; i < dim; ++i) {
            double qi = 0.0;
            for (int j = 0; j < dim; ++j) qi += Qinv.at(i, j) * v[j];
            s += u[i] * qi;
        }
        return s;
    };
    size_t na = atoms.size();
    std::vector<std::vector<double>> gram(na, std::vector<double>(na));
    for (size_t i = 0; i < na; ++i)
        for (size_t j = 0; j < na; ++j) gram[i][j] = bform(atoms[i], atoms[j]);

    // basis atoms u_i = (1_{y_i} - 1_{y_0})/d(y_i,y_0) are atoms themselves;
    // locate their indices
    std::vector<int> basis_idx(dim, -1);
    {
        size_t k = 0;
        for (int x = 0; x < n; ++x)
            for (int y = 0; y < n; ++y) {
                if (x == y) continue;
                if (y == 0 && x >= 1) basis_idx[x - 1] = static_cast<int>(k);
                ++k;
            }
    }

    std::vector<MatD> found;
    std::vector<int> img(dim, -1);
    std::function<void(int)> dfs = [&](int pos) {
        if (pos == dim) {
            // T U = V with U, V the basis/image atoms as columns:
            // row k of T solves U^T (row k)^T = row k of V
            MatD Ut(dim, dim);
            for (int j = 0; j < dim; ++j)
                for (int i = 0; i < dim; ++i) Ut.at(i, j) = atoms[basis_idx[i]][j];
            MatD T(dim, dim);
            for (int row = 0; row < dim; ++row) {
                VecD rhs(dim);
                for (int j = 0; j < dim; ++j) rhs[j] = atoms[img[j]][row];
                auto xx = solve(Ut, rhs);
                if (!xx) return;
                for (int i = 0; i < dim; ++i) T.at(row, i) = (*xx)[i];
            }
            std::vector<bool> used(na, false);
            for (size_t i = 0; i < na; ++i) {
                VecD t = T.apply(atoms[i]);
                int match = -1;
                for (size_t j = 0; j < na; ++j) {
                    if (used[j]) continue;
                    if (dist2(t, atoms[j]) <= 1e-7) { match = static_cast<int>(j); break; }
                }
                if (match < 0) return;
                used[match] = true;
            }
            for (const auto& f : found) {
                double diff = 0.0;
                for (size_t q = 0; q < f.a.size(); ++q) diff = std::max(diff, std::fabs(f.a[q] - T.a[q]));
                if (diff <= 1e-7) return;
            }
            found.push_back(T);
            return;
        }
        for (size_t cand = 0; cand < na; ++cand) {
            bool ok = std::fabs(gram[basis_idx[pos]][basis_idx[pos]] - gram[cand][cand]) <= 1e-7;
            for (int q = 0; q < pos && ok; ++q)
                ok = std::fabs(gram[basis_idx[pos]][basis_idx[q]] - gram[cand][img[q]]) <= 1e-7;
            if (!ok) continue;
            img[pos] = static_cast<int>(cand);
            dfs(pos + 1);
            img[pos] = -1;
        }
    };
    dfs(0);

    // match the enumerated maps against the candidates sigma * P_g
    // (expressed in basis coordinates)
    auto to_basis = [&](const MatD& mass_op) {
        MatD B(dim, dim);
        for (int j = 0; j < dim; ++j) {
            VecD bj(n, 0.0);
            bj[j + 1] = 1.0;
            bj[0] = -1.0;
            VecD img_m = mass_op.apply(bj);
            // mass vector sums to zero -> basis coords are entries 1..n-1
            for (int i = 0; i < dim; ++i) B.at(i, j) = img_m[i + 1];
        }
        return B;
    };
    std::vector<MatD> cand_basis;
    for (const auto& c : cands) cand_basis.push_back(to_basis(c));

    rep.extra_candidates = 0;
    for (const auto& f : found) {
        bool matched = false;
        for (const auto& cb : cand_basis) {
            double diff = 0.0;
            for (size_t q = 0; q < cb.a.size(); ++q) diff = std::max(diff, std::fabs(cb.a[q] - f.a[q]));
            if (diff <= 1e-6) { matched = true; break; }
        }
        if (!matched) ++rep.extra_candidates;
    }
    rep.no_extra_isometries = rep.extra_candidates == 0 && found.size() == cands.size();
    rep.group = MatrixGroupD::from_elements(std::move(cands), tol);
    rep.order_matches = rep.group.order() == 2 * rep.metric_isometries;
    rep.note = rep.no_extra_isometries ? "isometry group is {-1,1} x Isom(Y,d)"
                                       : "extreme-atom enumeration found unmatched maps";
    return rep;
}

}  // namespace isodisplay::freespace
