#pragma once

#include <array>
#include <map>
#include <set>
#include <string>
#include <unordered_set>
#include <vector>

namespace isodisplay::graphs {

using Perm = std::vector<int>;

Perm identity_perm(int n);
Perm compose(const Perm& a, const Perm& b);  // (a*b)(i) = a[b[i]]
Perm inverse(const Perm& a);
bool is_permutation(const Perm& p);

// A finite permutation group stored as an explicit element list.
class PermGroup {
public:
    PermGroup() = default;

    static PermGroup trivial(int degree);
    static PermGroup symmetric(int degree);
    static PermGroup cyclic(int degree);  // generated by the full cycle
    static PermGroup from_generators(int degree, const std::vector<Perm>& gens, size_t cap = 2'000'000);
    static PermGroup from_elements(int degree, std::vector<Perm> elems);

    int degree() const { return degree_; }
    size_t order() const { return elems_.size(); }
    const std::vector<Perm>& elements() const { return elems_; }
    bool contains(const Perm& p) const;
    bool same_elements(const PermGroup& o) const;
    bool subgroup_of(const PermGroup& o) const;
    bool faithful_on(const std::vector<int>& points) const;

    // Closed under composition and inverse, contains identity.
    bool verify_group() const;

    // Orbits of the coordinatewise action on length-k tuples over
    // {0..degree-1}; returns orbit index per tuple (tuples in lex order).
    std::vector<int> tuple_orbits(int k) const;

private:
    int degree_ = 0;
    std::vector<Perm> elems_;
};

struct Graph {
    int n = 0;
    std::set<std::pair<int, int>> edges;  // i < j
    std::vector<std::string> labels;      // optional; empty or size n

    void add_edge(int i, int j);
    bool has_edge(int i, int j) const;
    int degree(int v) const;
    std::vector<std::vector<int>> adjacency() const;

    static Graph path(int n);
    static Graph cycle(int n);
    static Graph star(int leaves);  // K_{1,leaves}; center is vertex 0
    static Graph complete(int n);
};

// BFS all-pairs shortest-path distances; throws on a disconnected graph.
std::vector<std::vector<int>> path_metric(const Graph& g);

// All vertex permutations preserving edges (and labels when present),
// found by color refinement plus backtracking.
PermGroup automorphism_group(const Graph& g, int vertex_cap = 5000, size_t order_cap = 2'000'000);

enum class VertexRole { Tuple, ConnA, ConnB, ConnC, ConnD, ConnE, Leaf };

std::string role_tag(VertexRole r);  // {"tuple","a","b","c","d","e","leaf"}

struct GadgetLayout {
    int m = 0;                              // points of the base action
    std::vector<int> depths;                // D, ascending
    std::vector<std::vector<int>> tuples;   // tuple contents per tuple index (index 0 = empty tuple)
    std::vector<int> tuple_vertex;          // graph vertex per tuple index
    std::vector<int> orbit_marker;          // o(s) per tuple index, >= 7
    std::vector<VertexRole> roles;          // per graph vertex
    std::vector<int> tuple_of_vertex;       // tuple index per vertex, -1 otherwise
    std::vector<int> length1_vertex;        // vertex of the singleton tuple (x), per point x
    // per connected pair (tuple idx s, tuple idx t): the a,b,c,d,e vertices
    std::map<std::pair<int, int>, std::array<int, 5>> connectors;
    std::vector<std::vector<int>> leaves;   // pendant leaf vertices per tuple index, in order
};

struct GadgetGraph {
    Graph graph;
    GadgetLayout layout;
};

// The gadget graph for a permutation group h on m points and a depth set D
// (a prefix chain 1,2,4,...): tuple vertices for each length in D plus the
// empty tuple, asymmetric pair connectors from s and t to the concatenation
// st, edges from singletons to the empty tuple, and o(s) pendant leaves per
// tuple vertex where o labels the h-orbit of s (values from 7 up).
GadgetGraph build_display_graph(const PermGroup& h, std::vector<int> depths);

struct GadgetReport {
    enum class Verdict { Equal, KClosureGap, Mismatch };
    Verdict verdict = Verdict::Mismatch;
    PermGroup restriction;           // Aut(gadget) restricted to the singleton vertices
    bool h_injects = false;          // h -> restriction injective (h faithful)
    size_t core_aut_order = 0;       // |Aut| of the leaf-stripped labeled core
    std::string note;
};

// Computes Aut of the gadget (via its leaf-stripped labeled core), restricts
// to the length-1 tuple vertices and compares with h. A strictly larger
// restriction is reported as K-CLOSURE-GAP, never raised.
GadgetReport verify_gadget(const GadgetGraph& gg, const PermGroup& h);

}  // namespace isodisplay::graphs
