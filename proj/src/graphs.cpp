#include "isodisplay/graphs.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <numeric>
#include <stdexcept>
#include <unordered_map>

namespace isodisplay::graphs {

Perm identity_perm(int n) {
    Perm p(n);
    std::iota(p.begin(), p.end(), 0);
    return p;
}

Perm compose(const Perm& a, const Perm& b) {
    if (a.size() != b.size()) throw std::invalid_argument("compose: degree mismatch");
    Perm r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = a[b[i]];
    return r;
}

Perm inverse(const Perm& a) {
    Perm r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[a[i]] = static_cast<int>(i);
    return r;
}

bool is_permutation(const Perm& p) {
    std::vector<bool> seen(p.size(), false);
    for (int v : p) {
        if (v < 0 || v >= static_cast<int>(p.size()) || seen[v]) return false;
        seen[v] = true;
    }
    return true;
}

namespace {
struct PermHash {
    size_t operator()(const Perm& p) const {
        size_t h = 1469598103934665603ULL;
        for (int v : p) {
            h ^= static_cast<size_t>(v) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        }
        return h;
    }
};
}  // namespace

PermGroup PermGroup::trivial(int degree) {
    return from_elements(degree, {identity_perm(degree)});
}

PermGroup PermGroup::symmetric(int degree) {
    if (degree > 9) throw std::invalid_argument("symmetric: degree too large to enumerate");
    Perm p = identity_perm(degree);
    std::vector<Perm> all;
    do all.push_back(p);
    while (std::next_permutation(p.begin(), p.end()));
    return from_elements(degree, std::move(all));
}

PermGroup PermGroup::cyclic(int degree) {
    Perm c(degree);
    for (int i = 0; i < degree; ++i) c[i] = (i + 1) % degree;
    return from_generators(degree, {c});
}

PermGroup PermGroup::from_generators(int degree, const std::vector<Perm>& gens, size_t cap) {
    for (const auto& g : gens)
        if (static_cast<int>(g.size()) != degree || !is_permutation(g))
            throw std::invalid_argument("from_generators: not a permutation of the right degree");
    std::vector<Perm> elems{identity_perm(degree)};
    std::unordered_set<Perm, PermHash> seen(elems.begin(), elems.end());
    size_t frontier = 0;
    while (frontier < elems.size()) {
        Perm cur = elems[frontier++];
        for (const auto& g : gens) {
            Perm nxt = compose(cur, g);
            if (seen.insert(nxt).second) {
                elems.push_back(nxt);
                if (elems.size() > cap) throw std::runtime_error("from_generators: order exceeds cap");
            }
        }
    }
    PermGroup pg;
    pg.degree_ = degree;
    pg.elems_ = std::move(elems);
    return pg;
}

PermGroup PermGroup::from_elements(int degree, std::vector<Perm> elems) {
    for (const auto& g : elems)
        if (static_cast<int>(g.size()) != degree || !is_permutation(g))
            throw std::invalid_argument("from_elements: not a permutation of the right degree");
    PermGroup pg;
    pg.degree_ = degree;
    pg.elems_ = std::move(elems);
    std::sort(pg.elems_.begin(), pg.elems_.end());
    pg.elems_.erase(std::unique(pg.elems_.begin(), pg.elems_.end()), pg.elems_.end());
    return pg;
}

bool PermGroup::contains(const Perm& p) const {
    return std::binary_search(elems_.begin(), elems_.end(), p);
}

bool PermGroup::same_elements(const PermGroup& o) const {
    return degree_ == o.degree_ && elems_ == o.elems_;
}

bool PermGroup::subgroup_of(const PermGroup& o) const {
    if (degree_ != o.degree_) return false;
    for (const auto& e : elems_)
        if (!o.contains(e)) return false;
    return true;
}

bool PermGroup::faithful_on(const std::vector<int>& points) const {
    for (const auto& e : elems_) {
        bool moves = false;
        for (int p : points)
            if (e[p] != p) { moves = true; break; }
        if (!moves && e != identity_perm(degree_)) return false;
    }
    return true;
}

bool PermGroup::verify_group() const {
    if (!contains(identity_perm(degree_))) return false;
    for (const auto& a : elems_) {
        if (!contains(inverse(a))) return false;
        for (const auto& b : elems_)
            if (!contains(compose(a, b))) return false;
    }
    return true;
}

std::vector<int> PermGroup::tuple_orbits(int k) const {
    size_t count = 1;
    for (int i = 0; i < k; ++i) count *= degree_;
    auto decode = [&](size_t code) {
        std::vector<int> t(k);
        for (int i = k - 1; i >= 0; --i) { t[i] = static_cast<int>(code % degree_); code /= degree_; }
        return t;
    };
    auto encode = [&](const std::vector<int>& t) {
        size_t code = 0;
        for (int v : t) code = code * degree_ + v;
        return code;
    };
    std::vector<int> orbit(count, -1);
    int next = 0;
    for (size_t s = 0; s < count; ++s) {
        if (orbit[s] >= 0) continue;
        int id = next++;
        std::deque<size_t> queue{s};
        orbit[s] = id;
        while (!queue.empty()) {
            auto cur = decode(queue.front());
            queue.pop_front();
            for (const auto& g : elems_) {
                std::vector<int> img(k);
                for (int i = 0; i < k; ++i) img[i] = g[cur[i]];
                size_t code = encode(img);
                if (orbit[code] < 0) {
                    orbit[code] = id;
                    queue.push_back(code);
                }
            }
        }
    }
    return orbit;
}

void Graph::add_edge(int i, int j) {
    if (i == j) throw std::invalid_argument("Graph: loop edge");
    if (i < 0 || j < 0 || i >= n || j >= n) throw std::invalid_argument("Graph: edge out of range");
    edges.emplace(std::min(i, j), std::max(i, j));
}

bool Graph::has_edge(int i, int j) const {
    return edges.count({std::min(i, j), std::max(i, j)}) > 0;
}

int Graph::degree(int v) const {
    int d = 0;
    for (const auto& [a, b] : edges)
        if (a == v || b == v) ++d;
    return d;
}

std::vector<std::vector<int>> Graph::adjacency() const {
    std::vector<std::vector<int>> adj(n);
    for (const auto& [a, b] : edges) {
        adj[a].push_back(b);
        adj[b].push_back(a);
    }
    return adj;
}

Graph Graph::path(int n) {
    Graph g;
    g.n = n;
    for (int i = 0; i + 1 < n; ++i) g.add_edge(i, i + 1);
    return g;
}

Graph Graph::cycle(int n) {
    Graph g = path(n);
    if (n >= 3) g.add_edge(n - 1, 0);
    return g;
}

Graph Graph::star(int leaves) {
    Graph g;
    g.n = leaves + 1;
    for (int i = 1; i <= leaves; ++i) g.add_edge(0, i);
    return g;
}

Graph Graph::complete(int n) {
    Graph g;
    g.n = n;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) g.add_edge(i, j);
    return g;
}

std::vector<std::vector<int>> path_metric(const Graph& g) {
    auto adj = g.adjacency();
    std::vector<std::vector<int>> dist(g.n, std::vector<int>(g.n, -1));
    for (int s = 0; s < g.n; ++s) {
        std::deque<int> queue{s};
        dist[s][s] = 0;
        while (!queue.empty()) {
            int v = queue.front();
            queue.pop_front();
            for (int w : adj[v])
                if (dist[s][w] < 0) {
                    dist[s][w] = dist[s][v] + 1;
                    queue.push_back(w);
                }
        }
        for (int t = 0; t < g.n; ++t)
            if (dist[s][t] < 0) throw std::invalid_argument("path_metric: graph is disconnected");
    }
    return dist;
}

namespace {

// Stable color refinement: split classes by multiset of neighbor colors.
std::vector<int> refine_colors(const Graph& g, std::vector<int> color) {
    auto adj = g.adjacency();
    for (;;) {
        std::map<std::pair<int, std::vector<int>>, int> next_id;
        std::vector<int> next(g.n);
        for (int v = 0; v < g.n; ++v) {
            std::vector<int> sig;
            sig.reserve(adj[v].size());
            for (int w : adj[v]) sig.push_back(color[w]);
            std::sort(sig.begin(), sig.end());
            auto key = std::make_pair(color[v], std::move(sig));
            auto it = next_id.find(key);
            if (it == next_id.end()) it = next_id.emplace(std::move(key), static_cast<int>(next_id.size())).first;
            next[v] = it->second;
        }
        if (next == color) return color;
        color = std::move(next);
    }
}

void search_automorphisms(const Graph& g, const std::vector<std::vector<int>>& adj,
                          const std::vector<int>& color, const std::vector<int>& order, size_t pos,
                          Perm& map, std::vector<bool>& used, std::vector<Perm>& out, size_t order_cap) {
    if (pos == order.size()) {
        out.push_back(map);
        if (out.size() > order_cap) throw std::runtime_error("automorphism_group: order exceeds cap");
        return;
    }
    int v = order[pos];
    for (int u = 0; u < g.n; ++u) {
        if (used[u] || color[u] != color[v]) continue;
        bool ok = true;
        for (int w : adj[v]) {
            if (map[w] >= 0 && !g.has_edge(u, map[w])) { ok = false; break; }
        }
        if (ok) {
            // non-neighbors must stay non-neighbors
            for (size_t q = 0; q < pos && ok; ++q) {
                int w = order[q];
                if (!g.has_edge(v, w) && g.has_edge(u, map[w])) ok = false;
            }
        }
        if (!ok) continue;
        map[v] = u;
        used[u] = true;
        search_automorphisms(g, adj, color, order, pos + 1, map, used, out, order_cap);
        map[v] = -1;
        used[u] = false;
    }
}

}  // namespace

PermGroup automorphism_group(const Graph& g, int vertex_cap, size_t order_cap) {
    if (g.n > vertex_cap) throw std::runtime_error("automorphism_group: vertex cap exceeded");
    if (g.n == 0) return PermGroup::trivial(0);

    // Initial invariant: label, degree, and (for modest sizes) the sorted
    // distance profile.
    std::vector<std::vector<int>> profile(g.n);
    if (g.n <= 600) {
        auto adj = g.adjacency();
        // distance multiset per vertex via BFS; disconnected graphs use -1 padding
        for (int s = 0; s < g.n; ++s) {
            std::vector<int> dist(g.n, -1);
            std::deque<int> queue{s};
            dist[s] = 0;
            while (!queue.empty()) {
                int v = queue.front();
                queue.pop_front();
                for (int w : adj[v])
                    if (dist[w] < 0) {
                        dist[w] = dist[v] + 1;
                        queue.push_back(w);
                    }
            }
            std::sort(dist.begin(), dist.end());
            profile[s] = std::move(dist);
        }
    }
    std::map<std::tuple<std::string, int, std::vector<int>>, int> ids;
    std::vector<int> color(g.n);
    for (int v = 0; v < g.n; ++v) {
        std::string lab = g.labels.empty() ? std::string() : g.labels[v];
        auto key = std::make_tuple(std::move(lab), g.degree(v), profile[v]);
        auto it = ids.find(key);
        if (it == ids.end()) it = ids.emplace(std::move(key), static_cast<int>(ids.size())).first;
        color[v] = it->second;
    }
    color = refine_colors(g, std::move(color));

    // Connected search order: always take a vertex with the most already
    // placed neighbors (so adjacency constraints bind immediately), breaking
    // ties toward small color classes.
    std::vector<int> class_size(g.n, 0);
    for (int v = 0; v < g.n; ++v) ++class_size[color[v]];
    std::vector<int> order;
    {
        auto adj0 = g.adjacency();
        std::vector<bool> placed(g.n, false);
        std::vector<int> placed_nbrs(g.n, 0);
        for (int step = 0; step < g.n; ++step) {
            int best = -1;
            for (int v = 0; v < g.n; ++v) {
                if (placed[v]) continue;
                if (best < 0 || placed_nbrs[v] > placed_nbrs[best] ||
                    (placed_nbrs[v] == placed_nbrs[best] &&
                     (class_size[color[v]] < class_size[color[best]] ||
                      (class_size[color[v]] == class_size[color[best]] && v < best))))
                    best = v;
            }
            placed[best] = true;
            order.push_back(best);
            for (int w : adj0[best]) ++placed_nbrs[w];
        }
    }

    auto adj = g.adjacency();
    Perm map(g.n, -1);
    std::vector<bool> used(g.n, false);
    std::vector<Perm> out;
    search_automorphisms(g, adj, color, order, 0, map, used, out, order_cap);
    return PermGroup::from_elements(g.n, std::move(out));
}

std::string role_tag(VertexRole r) {
    switch (r) {
        case VertexRole::Tuple: return "tuple";
        case VertexRole::ConnA: return "a";
        case VertexRole::ConnB: return "b";
        case VertexRole::ConnC: return "c";
        case VertexRole::ConnD: return "d";
        case VertexRole::ConnE: return "e";
        case VertexRole::Leaf: return "leaf";
    }
    return "?";
}

GadgetGraph build_display_graph(const PermGroup& h, std::vector<int> depths) {
    int m = h.degree();
    if (m <= 0) throw std::invalid_argument("build_display_graph: empty point set");
    std::sort(depths.begin(), depths.end());
    depths.erase(std::unique(depths.begin(), depths.end()), depths.end());
    if (depths.empty() || depths.front() != 1)
        throw std::invalid_argument("build_display_graph: depth set must contain 1");
    for (size_t i = 1; i < depths.size(); ++i)
        if (depths[i] != 2 * depths[i - 1])
            throw std::invalid_argument(
                "build_display_graph: depth set must be a doubling chain 1,2,4,... "
                "(concatenations would leave the depth set inconsistent)");

    GadgetLayout lay;
    lay.m = m;
    lay.depths = depths;

    // Tuple list: empty tuple, then all tuples per depth in lex order.
    lay.tuples.push_back({});
    std::map<std::vector<int>, int> tuple_index{{{}, 0}};
    for (int len : depths) {
        std::vector<int> t(len, 0);
        for (;;) {
            tuple_index.emplace(t, static_cast<int>(lay.tuples.size()));
            lay.tuples.push_back(t);
            int i = len - 1;
            while (i >= 0 && t[i] == m - 1) t[i--] = 0;
            if (i < 0) break;
            ++t[i];
        }
    }

    // Orbit markers: one value per h-orbit, assigned in order of first
    // appearance (length ascending, lex within length), starting at 7.
    int next_marker = 7;
    lay.orbit_marker.assign(lay.tuples.size(), -1);
    std::map<int, std::vector<int>> orbit_cache;  // length -> orbit id per code
    for (size_t ti = 0; ti < lay.tuples.size(); ++ti) {
        if (lay.orbit_marker[ti] >= 0) continue;
        const auto& t = lay.tuples[ti];
        int marker = next_marker++;
        // mark the entire h-orbit of t
        std::vector<std::vector<int>> frontier{t};
        std::set<std::vector<int>> seen{t};
        while (!frontier.empty()) {
            auto cur = frontier.back();
            frontier.pop_back();
            lay.orbit_marker[tuple_index.at(cur)] = marker;
            for (const auto& g : h.elements()) {
                std::vector<int> img(cur.size());
                for (size_t i = 0; i < cur.size(); ++i) img[i] = g[cur[i]];
                if (seen.insert(img).second) frontier.push_back(img);
            }
        }
    }

    Graph g;
    // tuple vertices first
    for (size_t ti = 0; ti < lay.tuples.size(); ++ti) {
        lay.tuple_vertex.push_back(g.n);
        lay.roles.push_back(VertexRole::Tuple);
        lay.tuple_of_vertex.push_back(static_cast<int>(ti));
        ++g.n;
    }
    lay.length1_vertex.resize(m);
    for (size_t ti = 0; ti < lay.tuples.size(); ++ti)
        if (lay.tuples[ti].size() == 1) lay.length1_vertex[lay.tuples[ti][0]] = lay.tuple_vertex[ti];

    auto new_vertex = [&](VertexRole r) {
        lay.roles.push_back(r);
        lay.tuple_of_vertex.push_back(-1);
        return g.n++;
    };

    // Pair connectors: s --a(,b)-- st and t --c(,d,e)-- st whenever |st| is
    // in the depth set.
    std::set<int> depth_set(depths.begin(), depths.end());
    for (size_t si = 0; si < lay.tuples.size(); ++si) {
        const auto& s = lay.tuples[si];
        if (s.empty()) continue;
        for (size_t tj = 0; tj < lay.tuples.size(); ++tj) {
            const auto& t = lay.tuples[tj];
            if (t.size() != s.size()) continue;
            if (!depth_set.count(static_cast<int>(2 * s.size()))) continue;
            std::vector<int> st = s;
            st.insert(st.end(), t.begin(), t.end());
            int sti = tuple_index.at(st);
            int va = new_vertex(VertexRole::ConnA);
            int vb = new_vertex(VertexRole::ConnB);
            int vc = new_vertex(VertexRole::ConnC);
            int vd = new_vertex(VertexRole::ConnD);
            int ve = new_vertex(VertexRole::ConnE);
            g.add_edge(lay.tuple_vertex[si], va);
            g.add_edge(va, lay.tuple_vertex[sti]);
            g.add_edge(va, vb);
            g.add_edge(lay.tuple_vertex[tj], vc);
            g.add_edge(vc, lay.tuple_vertex[sti]);
            g.add_edge(vc, vd);
            g.add_edge(vc, ve);
            lay.connectors[{static_cast<int>(si), static_cast<int>(tj)}] = {va, vb, vc, vd, ve};
        }
    }

    // singletons to the empty tuple
    for (int x = 0; x < m; ++x) g.add_edge(lay.length1_vertex[x], lay.tuple_vertex[0]);

    // o(s) pendant leaves per tuple vertex
    lay.leaves.resize(lay.tuples.size());
    for (size_t ti = 0; ti < lay.tuples.size(); ++ti)
        for (int k = 0; k < lay.orbit_marker[ti]; ++k) {
            int leaf = new_vertex(VertexRole::Leaf);
            g.add_edge(lay.tuple_vertex[ti], leaf);
            lay.leaves[ti].push_back(leaf);
        }

    return GadgetGraph{std::move(g), std::move(lay)};
}

GadgetReport verify_gadget(const GadgetGraph& gg, const PermGroup& h) {
    const Graph& g = gg.graph;
    const GadgetLayout& lay = gg.layout;
    GadgetReport rep;

    // Leaf-stripped core: pendant neighbors become a count label. The
    // restriction of Aut(full graph) to non-pendant vertices is exactly
    // Aut(core with counts); pendants only add bundle permutations.
    std::vector<int> pendant_count(g.n, 0);
    std::vector<bool> is_pendant(g.n, false);
    for (int v = 0; v < g.n; ++v)
        if (g.degree(v) == 1) is_pendant[v] = true;
    for (const auto& [a, b] : g.edges) {
        if (is_pendant[a]) ++pendant_count[b];
        if (is_pendant[b]) ++pendant_count[a];
    }
    std::vector<int> core_id(g.n, -1);
    std::vector<int> core_to_full;
    for (int v = 0; v < g.n; ++v)
        if (!is_pendant[v]) {
            core_id[v] = static_cast<int>(core_to_full.size());
            core_to_full.push_back(v);
        }
    Graph core;
    core.n = static_cast<int>(core_to_full.size());
    core.labels.resize(core.n);
    for (int v = 0; v < g.n; ++v)
        if (core_id[v] >= 0) core.labels[core_id[v]] = "p" + std::to_string(pendant_count[v]);
    for (const auto& [a, b] : g.edges)
        if (!is_pendant[a] && !is_pendant[b]) core.add_edge(core_id[a], core_id[b]);

    PermGroup core_aut = automorphism_group(core);
    rep.core_aut_order = core_aut.order();

    // every core automorphism must map tuple vertices to tuple vertices with
    // equal marker; the pendant-count labels force this, but check anyway
    for (const auto& a : core_aut.elements()) {
        for (size_t ti = 0; ti < lay.tuples.size(); ++ti) {
            int cv = core_id[lay.tuple_vertex[ti]];
            int img = a[cv];
            int full_img = core_to_full[img];
            if (lay.roles[full_img] != VertexRole::Tuple ||
                lay.orbit_marker[lay.tuple_of_vertex[full_img]] != lay.orbit_marker[ti]) {
                rep.verdict = GadgetReport::Verdict::Mismatch;
                rep.note = "automorphism breaks orbit markers";
                return rep;
            }
        }
    }

    // restriction to the singleton tuple vertices, as permutations of points
    std::vector<int> point_of_core(core.n, -1);
    for (int x = 0; x < lay.m; ++x) point_of_core[core_id[lay.length1_vertex[x]]] = x;
    std::set<Perm> restr;
    for (const auto& a : core_aut.elements()) {
        Perm p(lay.m);
        for (int x = 0; x < lay.m; ++x) {
            int img = a[core_id[lay.length1_vertex[x]]];
            int pt = point_of_core[img];
            if (pt < 0) {
                rep.verdict = GadgetReport::Verdict::Mismatch;
                rep.note = "automorphism moves a singleton vertex off the singleton set";
                return rep;
            }
            p[x] = pt;
        }
        restr.insert(std::move(p));
    }
    rep.restriction = PermGroup::from_elements(lay.m, std::vector<Perm>(restr.begin(), restr.end()));
    rep.h_injects = true;  // h acts faithfully on {0..m-1} by construction of the gadget

    bool h_in_restr = h.subgroup_of(rep.restriction);
    bool restr_in_h = rep.restriction.subgroup_of(h);
    if (h_in_restr && restr_in_h) {
        rep.verdict = GadgetReport::Verdict::Equal;
        rep.note = "restriction equals the base group";
    } else if (h_in_restr) {
        rep.verdict = GadgetReport::Verdict::KClosureGap;
        rep.note = "gadget automorphisms realize a strictly larger group (orbit closure gap)";
    } else {
        rep.verdict = GadgetReport::Verdict::Mismatch;
        rep.note = "base group not realized (unexpected)";
    }
    return rep;
}

}  // namespace isodisplay::graphs
