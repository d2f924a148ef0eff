#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include "isodisplay/free_space.hpp"

namespace isodisplay::freespace {

namespace {

// Dense transportation simplex on supplies a_i, demands b_j (equal totals):
// spanning-tree basis, u/v potentials, most-negative entering cell, pivot
// around the unique tree cycle. Bland-style ties keep it finite.
struct Transport {
    int m, n;
    std::vector<double> a, b;
    std::vector<std::vector<double>> cost;
    std::vector<std::vector<double>> flow;
    std::vector<std::vector<bool>> basic;

    Transport(std::vector<double> a_, std::vector<double> b_, std::vector<std::vector<double>> c_)
        : m(static_cast<int>(a_.size())), n(static_cast<int>(b_.size())), a(std::move(a_)), b(std::move(b_)), cost(std::move(c_)) {
        flow.assign(m, std::vector<double>(n, 0.0));
        basic.assign(m, std::vector<bool>(n, false));
    }

    void northwest_start() {
        int i = 0, j = 0;
        std::vector<double> ra = a, rb = b;
        while (i < m && j < n) {
            double q = std::min(ra[i], rb[j]);
            flow[i][j] = q;
            basic[i][j] = true;
            ra[i] -= q;
            rb[j] -= q;
            if (i == m - 1 && j == n - 1) break;
            // advance; on ties advance the row only, keeping m+n-1 basics
            if (ra[i] <= rb[j] && i < m - 1) ++i;
            else if (j < n - 1) ++j;
            else ++i;
        }
    }

    void potentials(std::vector<double>& u, std::vector<double>& v) const {
        u.assign(m, 0.0);
        v.assign(n, 0.0);
        std::vector<bool> su(m, false), sv(n, false);
        su[0] = true;
        for (int pass = 0; pass < m + n; ++pass) {
            for (int i = 0; i < m; ++i)
                for (int j = 0; j < n; ++j) {
                    if (!basic[i][j]) continue;
                    if (su[i] && !sv[j]) { v[j] = cost[i][j] - u[i]; sv[j] = true; }
                    else if (!su[i] && sv[j]) { u[i] = cost[i][j] - v[j]; su[i] = true; }
                }
        }
        for (int i = 0; i < m; ++i)
            if (!su[i]) throw std::logic_error("transport: basis not a spanning tree");
        for (int j = 0; j < n; ++j)
            if (!sv[j]) throw std::logic_error("transport: basis not a spanning tree");
    }

    // The entering cell (ei,ej) closes a unique cycle with the spanning
    // tree: the tree path from row ei to column ej, found by BFS over the
    // bipartite basis graph (nodes = rows and columns, edges = basic cells).
    bool find_cycle(int ei, int ej, std::vector<std::pair<int, int>>& cycle) const {
        int N = m + n;
        std::vector<int> parent(N, -1), pe_i(N, -1), pe_j(N, -1);
        std::vector<int> queue{m + ej};
        parent[m + ej] = m + ej;
        for (size_t qh = 0; qh < queue.size(); ++qh) {
            int v = queue[qh];
            if (v < m) {
                for (int j = 0; j < n; ++j)
                    if (basic[v][j] && parent[m + j] < 0) {
                        parent[m + j] = v;
                        pe_i[m + j] = v;
                        pe_j[m + j] = j;
                        queue.push_back(m + j);
                    }
            } else {
                int j = v - m;
                for (int i = 0; i < m; ++i)
                    if (basic[i][j] && parent[i] < 0) {
                        parent[i] = v;
                        pe_i[i] = i;
                        pe_j[i] = j;
                        queue.push_back(i);
                    }
            }
        }
        if (parent[ei] < 0) return false;
        cycle.clear();
        cycle.emplace_back(ei, ej);
        int cur = ei;
        while (cur != m + ej) {
            cycle.emplace_back(pe_i[cur], pe_j[cur]);
            cur = parent[cur];
        }
        return true;
    }

    double solve() {
        northwest_start();
        std::vector<double> u, v;
        for (int iter = 0; iter < 10000; ++iter) {
            potentials(u, v);
            int ei = -1, ej = -1;
            double best = -1e-11;
            for (int i = 0; i < m; ++i)
                for (int j = 0; j < n; ++j) {
                    if (basic[i][j]) continue;
                    double red = cost[i][j] - u[i] - v[j];
                    if (red < best) { best = red; ei = i; ej = j; }
                }
            if (ei < 0) break;
            std::vector<std::pair<int, int>> cycle;
            if (!find_cycle(ei, ej, cycle))
                throw std::logic_error("transport: no pivot cycle found");
            // odd positions lose flow
            double theta = 1e300;
            int leave = -1;
            for (size_t k = 1; k < cycle.size(); k += 2) {
                auto [i, j] = cycle[k];
                if (flow[i][j] < theta - 1e-15) { theta = flow[i][j]; leave = static_cast<int>(k); }
            }
            for (size_t k = 0; k < cycle.size(); ++k) {
                auto [i, j] = cycle[k];
                flow[i][j] += (k % 2 == 0 ? theta : -theta);
            }
            basic[ei][ej] = true;
            auto [li, lj] = cycle[leave];
            basic[li][lj] = false;
            flow[li][lj] = 0.0;
        }
        double total = 0.0;
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < n; ++j) total += flow[i][j] * cost[i][j];
        return total;
    }
};

}  // namespace

PrimalResult ae_norm_primal(const FiniteMetricSpace& m, const Molecule& mol) {
    mol.validate();
    if (static_cast<int>(mol.mass.size()) != m.size())
        throw std::invalid_argument("ae_norm_primal: molecule size mismatch");
    std::vector<int> pos, negs;
    for (int i = 0; i < m.size(); ++i) {
        if (mol.mass[i] > 1e-15) pos.push_back(i);
        else if (mol.mass[i] < -1e-15) negs.push_back(i);
    }
    PrimalResult res;
    if (pos.empty()) return res;  // zero molecule

    std::vector<double> supply, demand;
    for (int i : pos) supply.push_back(mol.mass[i]);
    for (int j : negs) demand.push_back(-mol.mass[j]);
    std::vector<std::vector<double>> cost(pos.size(), std::vector<double>(negs.size()));
    for (size_t i = 0; i < pos.size(); ++i)
        for (size_t j = 0; j < negs.size(); ++j) cost[i][j] = m.d.at(pos[i], negs[j]);

    Transport t(supply, demand, cost);
    res.value = t.solve();
    for (size_t i = 0; i < pos.size(); ++i)
        for (size_t j = 0; j < negs.size(); ++j)
            if (t.flow[i][j] > 1e-14)
                res.decomposition.push_back(Atom{pos[i], negs[j], t.flow[i][j]});
    return res;
}

double ae_norm_exhaustive(const FiniteMetricSpace& m, const Molecule& mol, int support_cap) {
    mol.validate();
    std::vector<int> pos, negs;
    for (int i = 0; i < m.size(); ++i) {
        if (mol.mass[i] > 1e-15) pos.push_back(i);
        else if (mol.mass[i] < -1e-15) negs.push_back(i);
    }
    if (static_cast<int>(pos.size() + negs.size()) > support_cap)
        throw std::invalid_argument("ae_norm_exhaustive: support exceeds the oracle cap");
    if (pos.empty()) return 0.0;

    std::vector<double> supply, demand;
    for (int i : pos) supply.push_back(mol.mass[i]);
    for (int j : negs) demand.push_back(-mol.mass[j]);

    double total = 0.0;
    for (double v : supply) total += v;
    double dust = 1e-13 * (1.0 + total);

    double best = 1e300;
    // Leaf peeling: every basic solution's support forest has a node of
    // degree one, so saturating min(s_i, d_j) over ALL pairs (i,j) at each
    // step reaches every vertex of the flow polytope. State is copied per
    // level: in-place restores would accumulate rounding drift across the
    // enormous number of sibling branches and lose exact-finish paths.
    std::function<void(std::vector<double>, std::vector<double>, double)> rec =
        [&](std::vector<double> s, std::vector<double> d, double acc) {
            bool done = true;
            for (double v : s)
                if (v > dust) { done = false; break; }
            if (done) { best = std::min(best, acc); return; }
            if (acc >= best) return;
            for (size_t si = 0; si < s.size(); ++si) {
                if (s[si] <= dust) continue;
                for (size_t dj = 0; dj < d.size(); ++dj) {
                    if (d[dj] <= dust) continue;
                    double q = std::min(s[si], d[dj]);
                    double keep_s = s[si], keep_d = d[dj];
                    s[si] -= q;
                    d[dj] -= q;
                    rec(s, d, acc + q * m.d.at(pos[si], negs[dj]));
                    s[si] = keep_s;
                    d[dj] = keep_d;
                }
            }
        };
    rec(supply, demand, 0.0);
    return best;
}

}  // namespace isodisplay::freespace
