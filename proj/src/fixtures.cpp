#include "isodisplay/fixtures.hpp"

#include <cmath>
#include <map>
#include <stdexcept>

#include "isodisplay/rng.hpp"

namespace isodisplay::fixtures {

using io::Json;
using graphs::Graph;
using graphs::PermGroup;

namespace {

Graph rigid_tree7() {
    // spider with legs of lengths 1, 2 and 3 hanging off vertex 0
    Graph g;
    g.n = 7;
    g.add_edge(0, 1);
    g.add_edge(0, 2);
    g.add_edge(2, 3);
    g.add_edge(0, 4);
    g.add_edge(4, 5);
    g.add_edge(5, 6);
    return g;
}

MatrixGroupD pm_id(int dim) {
    MatD minus = MatD::identity(dim);
    for (auto& v : minus.a) v = -v;
    return MatrixGroupD::closure({minus}, 4);
}

MatrixGroupD signed_swap4() {
    MatD minus = MatD::identity(2);
    for (auto& v : minus.a) v = -v;
    MatD swap(2, 2);
    swap.at(0, 1) = 1.0;
    swap.at(1, 0) = 1.0;
    return MatrixGroupD::closure({minus, swap}, 8);
}

MatrixGroupD pm1_s3() {
    MatD minus = MatD::identity(3);
    for (auto& v : minus.a) v = -v;
    MatD cyc(3, 3);
    cyc.at(1, 0) = 1.0;
    cyc.at(2, 1) = 1.0;
    cyc.at(0, 2) = 1.0;
    MatD tr(3, 3);
    tr.at(1, 0) = 1.0;
    tr.at(0, 1) = 1.0;
    tr.at(2, 2) = 1.0;
    return MatrixGroupD::closure({minus, cyc, tr}, 16);
}

MatrixGroupD signed_permutations2() {
    MatD minus = MatD::identity(2);
    for (auto& v : minus.a) v = -v;
    MatD swap(2, 2);
    swap.at(0, 1) = 1.0;
    swap.at(1, 0) = 1.0;
    MatD refl = MatD::identity(2);
    refl.at(1, 1) = -1.0;
    return MatrixGroupD::closure({minus, swap, refl}, 16);
}

Json equilateral3() {
    Json j;
    j["points"] = {"a", "b", "c"};
    j["d"] = Json::array({Json::array({0.0, 1.0, 1.0}), Json::array({1.0, 0.0, 1.0}),
                          Json::array({1.0, 1.0, 0.0})});
    j["_provenance"] = "unit-distance metric on three points";
    return j;
}

Json path3_metric() {
    Json j;
    j["points"] = {"a", "b", "c"};
    j["d"] = Json::array({Json::array({0.0, 1.0, 2.0}), Json::array({1.0, 0.0, 1.0}),
                          Json::array({2.0, 1.0, 0.0})});
    j["_provenance"] = "colinear three-point metric (1,1,2)";
    return j;
}

Json rand_metric(int n, uint64_t seed) {
    Rng rng(seed);
    Json rows = Json::array();
    MatD d(n, n);
    for (int i = 0; i < n; ++i)
        for (int k = i + 1; k < n; ++k) d.at(i, k) = d.at(k, i) = rng.uniform(1.0, 2.0);
    std::vector<std::string> pts;
    for (int i = 0; i < n; ++i) pts.push_back("p" + std::to_string(i));
    for (int i = 0; i < n; ++i) {
        Json row = Json::array();
        for (int k = 0; k < n; ++k) row.push_back(d.at(i, k));
        rows.push_back(std::move(row));
    }
    Json j;
    j["points"] = pts;
    j["d"] = std::move(rows);
    j["_provenance"] = "seeded random metric, entries in [1,2], seed " + std::to_string(seed);
    return j;
}

Json with_provenance(Json j, const std::string& note) {
    j["_provenance"] = note;
    return j;
}

std::map<std::string, Json> build_catalog() {
    std::map<std::string, Json> cat;
    cat["path3"] = with_provenance(io::graph_to_json(Graph::path(3)), "path graph on 3 vertices");
    cat["path5"] = with_provenance(io::graph_to_json(Graph::path(5)), "path graph on 5 vertices");
    cat["cycle4"] = with_provenance(io::graph_to_json(Graph::cycle(4)), "cycle on 4 vertices");
    cat["cycle5"] = with_provenance(io::graph_to_json(Graph::cycle(5)), "cycle on 5 vertices");
    cat["star_k13"] = with_provenance(io::graph_to_json(Graph::star(3)), "star K_{1,3}");
    cat["tree7_rigid"] =
        with_provenance(io::graph_to_json(rigid_tree7()), "asymmetric spider tree, legs 1,2,3");

    cat["equilateral3"] = equilateral3();
    cat["path3_metric"] = path3_metric();
    cat["rand_metric5"] = rand_metric(5, 51);

    cat["pm-id-1"] = with_provenance(io::group_to_json(pm_id(1)), "closure of {-Id} in dim 1");
    cat["pm-id-2"] = with_provenance(io::group_to_json(pm_id(2)), "closure of {-Id} in dim 2");
    cat["pm-id-3"] = with_provenance(io::group_to_json(pm_id(3)), "closure of {-Id} in dim 3");
    cat["pm-id-4"] = with_provenance(io::group_to_json(pm_id(4)), "closure of {-Id} in dim 4");
    cat["signed-swap-4"] =
        with_provenance(io::group_to_json(signed_swap4()), "closure of {-Id, swap} in dim 2");
    cat["pm1-s3"] = with_provenance(io::group_to_json(pm1_s3()),
                                    "signed permutation image of {-1,1} x S3 in dim 3");
    cat["signed-perms-2"] = with_provenance(io::group_to_json(signed_permutations2()),
                                            "all signed permutations of dim 2 (order 8)");

    cat["s2-on-2"] = with_provenance(io::perm_group_to_json(PermGroup::symmetric(2)), "S2 on 2 points");
    cat["trivial-1"] = with_provenance(io::perm_group_to_json(PermGroup::trivial(1)), "trivial group on 1 point");
    cat["trivial-3"] = with_provenance(io::perm_group_to_json(PermGroup::trivial(3)), "trivial group on 3 points");
    cat["c4-on-4"] = with_provenance(io::perm_group_to_json(PermGroup::cyclic(4)), "cyclic C4, regular on 4 points");

    cat["euclid2"] = with_provenance(io::space_to_json(NormedSpace::euclidean(2)), "euclidean plane");
    cat["euclid3"] = with_provenance(io::space_to_json(NormedSpace::euclidean(3)), "euclidean 3-space");
    {
        std::vector<VecQ> facets = {{Rat(1), Rat(0)}, {Rat(0), Rat(1)}, {Rat(-1), Rat(0)}, {Rat(0), Rat(-1)}};
        cat["linf2"] = with_provenance(io::space_to_json(NormedSpace::polyhedral(2, facets)),
                                       "sup-norm square");
    }

    {
        Json mol;
        mol["masses"] = Json{{"a", 1.0}, {"b", 1.0}, {"c", -2.0}};
        mol["_provenance"] = "two unit sources and a double sink on the colinear metric";
        cat["path3_molecule"] = std::move(mol);
    }
    return cat;
}

const std::map<std::string, Json>& catalog() {
    static const std::map<std::string, Json> cat = build_catalog();
    return cat;
}

}  // namespace

std::vector<std::string> names() {
    std::vector<std::string> out;
    for (const auto& [k, v] : catalog()) out.push_back(k);
    return out;
}

Json get(const std::string& name) {
    auto it = catalog().find(name);
    if (it == catalog().end()) throw std::invalid_argument("unknown fixture '" + name + "'");
    return it->second;
}

Json load(const std::string& path_or_fixture) {
    if (path_or_fixture.rfind("fixture:", 0) == 0) return get(path_or_fixture.substr(8));
    return io::load_json_file(path_or_fixture);
}

}  // namespace isodisplay::fixtures
