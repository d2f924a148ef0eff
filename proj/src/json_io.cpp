#include "isodisplay/json_io.hpp"

#include <fstream>
#include <stdexcept>

namespace isodisplay::io {

namespace {

[[noreturn]] void bad(const std::string& what) { throw std::invalid_argument("json: " + what); }

}  // namespace

Json rat_to_json(const Rat& r) { return r.str(); }

Rat rat_from_json(const Json& j) {
    if (j.is_string()) return Rat::parse(j.get<std::string>());
    if (j.is_number_integer()) return Rat(j.get<long long>());
    bad("expected a rational as \"p/q\" or an integer");
}

Json vecq_to_json(const VecQ& v) {
    Json a = Json::array();
    for (const auto& c : v) a.push_back(rat_to_json(c));
    return a;
}

VecQ vecq_from_json(const Json& j) {
    if (!j.is_array()) bad("expected an array of rationals");
    VecQ v;
    for (const auto& c : j) v.push_back(rat_from_json(c));
    return v;
}

Json vecd_to_json(const VecD& v) {
    Json a = Json::array();
    for (double c : v) a.push_back(c);
    return a;
}

VecD vecd_from_json(const Json& j) {
    if (!j.is_array()) bad("expected an array of numbers");
    VecD v;
    for (const auto& c : j) v.push_back(c.get<double>());
    return v;
}

Json matq_to_json(const MatQ& m) {
    Json rows = Json::array();
    for (int i = 0; i < m.rows; ++i) {
        Json row = Json::array();
        for (int j = 0; j < m.cols; ++j) row.push_back(rat_to_json(m.at(i, j)));
        rows.push_back(std::move(row));
    }
    return Json{{"matrix", rows}};
}

MatQ matq_from_json(const Json& j) {
    const Json& rows = j.at("matrix");
    int r = static_cast<int>(rows.size());
    if (r == 0) bad("empty matrix");
    int c = static_cast<int>(rows[0].size());
    MatQ m(r, c);
    for (int i = 0; i < r; ++i) {
        if (static_cast<int>(rows[i].size()) != c) bad("ragged matrix");
        for (int k = 0; k < c; ++k) m.at(i, k) = rat_from_json(rows[i][k]);
    }
    return m;
}

Json matd_to_json(const MatD& m) {
    Json rows = Json::array();
    for (int i = 0; i < m.rows; ++i) {
        Json row = Json::array();
        for (int j = 0; j < m.cols; ++j) row.push_back(m.at(i, j));
        rows.push_back(std::move(row));
    }
    return Json{{"matrix", rows}};
}

MatD matd_from_json(const Json& j) {
    const Json& rows = j.at("matrix");
    int r = static_cast<int>(rows.size());
    if (r == 0) bad("empty matrix");
    int c = static_cast<int>(rows[0].size());
    MatD m(r, c);
    for (int i = 0; i < r; ++i) {
        if (static_cast<int>(rows[i].size()) != c) bad("ragged matrix");
        for (int k = 0; k < c; ++k) {
            const Json& cell = rows[i][k];
            m.at(i, k) = cell.is_string() ? Rat::parse(cell.get<std::string>()).to_double()
                                          : cell.get<double>();
        }
    }
    return m;
}

Json group_to_json(const MatrixGroupQ& g) {
    Json elems = Json::array();
    for (const auto& e : g.elements()) elems.push_back(matq_to_json(e));
    return Json{{"elements", elems}};
}

Json group_to_json(const MatrixGroupD& g) {
    Json elems = Json::array();
    for (const auto& e : g.elements()) elems.push_back(matd_to_json(e));
    return Json{{"elements", elems}};
}

MatrixGroupQ groupq_from_json(const Json& j, double tol) {
    std::vector<MatQ> elems;
    for (const auto& e : j.at("elements")) elems.push_back(matq_from_json(e));
    return MatrixGroupQ::from_elements(std::move(elems), tol);
}

MatrixGroupD groupd_from_json(const Json& j, double tol) {
    std::vector<MatD> elems;
    for (const auto& e : j.at("elements")) elems.push_back(matd_from_json(e));
    return MatrixGroupD::from_elements(std::move(elems), tol);
}

Json space_to_json(const NormedSpace& s) {
    Json j;
    j["dim"] = s.dim();
    switch (s.kind()) {
        case SpaceKind::Euclidean:
            j["kind"] = "euclidean";
            break;
        case SpaceKind::Polyhedral: {
            j["kind"] = "polyhedral";
            Json fs = Json::array();
            for (const auto& f : s.facets()) fs.push_back(vecq_to_json(f));
            j["facets"] = std::move(fs);
            break;
        }
        case SpaceKind::GraphNorm: {
            j["kind"] = "graph_norm";
            Json m = Json::array();
            for (const auto& row : s.metric()) m.push_back(row);
            j["metric"] = std::move(m);
            break;
        }
        case SpaceKind::Pimple: {
            j["kind"] = "pimple";
            j["base"] = space_to_json(s.base());
            Json spikes = Json::array();
            for (const auto& sp : s.spikes()) {
                Json e;
                e["dir"] = vecd_to_json(sp.dir);
                e["lambda"] = sp.lambda();  // informational; collapses at tiny depths
                e["depth"] = sp.depth;      // authoritative
                e["level"] = sp.level;
                spikes.push_back(std::move(e));
            }
            j["spikes"] = std::move(spikes);
            break;
        }
    }
    return j;
}

NormedSpace space_from_json(const Json& j) {
    std::string kind = j.at("kind").get<std::string>();
    if (kind == "euclidean") return NormedSpace::euclidean(j.at("dim").get<int>());
    if (kind == "polyhedral") {
        std::vector<VecQ> facets;
        for (const auto& f : j.at("facets")) facets.push_back(vecq_from_json(f));
        return NormedSpace::polyhedral(j.at("dim").get<int>(), std::move(facets));
    }
    if (kind == "graph_norm") {
        std::vector<std::vector<int>> metric;
        for (const auto& row : j.at("metric")) metric.push_back(row.get<std::vector<int>>());
        return NormedSpace::graph_norm(std::move(metric));
    }
    if (kind == "pimple") {
        NormedSpace base = space_from_json(j.at("base"));
        std::vector<Spike> spikes;
        for (const auto& e : j.at("spikes")) {
            Spike sp;
            sp.dir = vecd_from_json(e.at("dir"));
            if (e.contains("depth")) sp.depth = e.at("depth").get<double>();
            else sp.depth = 1.0 - e.at("lambda").get<double>();
            sp.level = e.value("level", 0);
            spikes.push_back(std::move(sp));
        }
        return NormedSpace::pimple(std::move(base), std::move(spikes));
    }
    bad("unknown space kind '" + kind + "'");
}

Json graph_to_json(const graphs::Graph& g) {
    Json j;
    j["n"] = g.n;
    Json edges = Json::array();
    for (const auto& [a, b] : g.edges) edges.push_back(Json::array({a, b}));
    j["edges"] = std::move(edges);
    j["labels"] = g.labels;
    return j;
}

graphs::Graph graph_from_json(const Json& j) {
    graphs::Graph g;
    g.n = j.at("n").get<int>();
    for (const auto& e : j.at("edges")) {
        if (e.size() != 2) bad("edge must be a pair");
        g.add_edge(e[0].get<int>(), e[1].get<int>());
    }
    if (j.contains("labels") && !j.at("labels").empty())
        g.labels = j.at("labels").get<std::vector<std::string>>();
    return g;
}

Json perm_group_to_json(const graphs::PermGroup& g) {
    Json j;
    j["m"] = g.degree();
    Json elems = Json::array();
    for (const auto& p : g.elements()) elems.push_back(p);
    j["elements"] = std::move(elems);
    return j;
}

graphs::PermGroup perm_group_from_json(const Json& j) {
    int m = j.at("m").get<int>();
    if (j.contains("elements")) {
        std::vector<graphs::Perm> elems;
        for (const auto& p : j.at("elements")) elems.push_back(p.get<graphs::Perm>());
        auto g = graphs::PermGroup::from_elements(m, std::move(elems));
        if (!g.verify_group()) bad("permutation element list is not a group");
        return g;
    }
    if (j.contains("generators")) {
        std::vector<graphs::Perm> gens;
        for (const auto& p : j.at("generators")) gens.push_back(p.get<graphs::Perm>());
        return graphs::PermGroup::from_generators(m, gens);
    }
    bad("permutation group needs \"elements\" or \"generators\"");
}

Json gadget_to_json(const graphs::GadgetGraph& gg) {
    Json j;
    j["graph"] = graph_to_json(gg.graph);
    j["m"] = gg.layout.m;
    j["depths"] = gg.layout.depths;
    Json roles = Json::array();
    for (auto r : gg.layout.roles) roles.push_back(graphs::role_tag(r));
    j["roles"] = std::move(roles);
    Json tuples = Json::array();
    for (size_t ti = 0; ti < gg.layout.tuples.size(); ++ti) {
        Json t;
        t["tuple"] = gg.layout.tuples[ti];
        t["vertex"] = gg.layout.tuple_vertex[ti];
        t["marker"] = gg.layout.orbit_marker[ti];
        tuples.push_back(std::move(t));
    }
    j["tuples"] = std::move(tuples);
    return j;
}

Json metric_to_json(const freespace::FiniteMetricSpace& m) {
    Json j;
    j["points"] = m.points;
    Json rows = Json::array();
    for (int i = 0; i < m.size(); ++i) {
        Json row = Json::array();
        for (int k = 0; k < m.size(); ++k) row.push_back(m.d.at(i, k));
        rows.push_back(std::move(row));
    }
    j["d"] = std::move(rows);
    return j;
}

freespace::FiniteMetricSpace metric_from_json(const Json& j) {
    freespace::FiniteMetricSpace m;
    const Json& rows = j.at("d");
    int n = static_cast<int>(rows.size());
    m.d = MatD(n, n);
    for (int i = 0; i < n; ++i) {
        if (static_cast<int>(rows[i].size()) != n) bad("metric matrix not square");
        for (int k = 0; k < n; ++k) m.d.at(i, k) = rows[i][k].get<double>();
    }
    if (j.contains("points")) m.points = j.at("points").get<std::vector<std::string>>();
    else
        for (int i = 0; i < n; ++i) m.points.push_back("p" + std::to_string(i));
    m.validate();
    return m;
}

Json molecule_to_json(const freespace::Molecule& mol, const freespace::FiniteMetricSpace& m) {
    Json masses;
    for (int i = 0; i < m.size(); ++i)
        if (mol.mass[i] != 0.0) masses[m.points[i]] = mol.mass[i];
    return Json{{"masses", masses}};
}

freespace::Molecule molecule_from_json(const Json& j, const freespace::FiniteMetricSpace& m) {
    freespace::Molecule mol;
    mol.mass.assign(m.size(), 0.0);
    for (const auto& [label, value] : j.at("masses").items()) {
        int idx = -1;
        for (int i = 0; i < m.size(); ++i)
            if (m.points[i] == label) { idx = i; break; }
        if (idx < 0) bad("molecule references unknown point '" + label + "'");
        mol.mass[idx] = value.get<double>();
    }
    mol.validate();
    return mol;
}

Json display_result_to_json(const pimple::DisplayResult& r) {
    Json j;
    j["space"] = space_to_json(r.space);
    j["group"] = group_to_json(r.group);
    Json tips = Json::array();
    for (const auto& t : r.tips)
        tips.push_back(Json{{"point", vecd_to_json(t.point)}, {"level", t.level}});
    j["E"] = std::move(tips);
    Json sched;
    sched["m"] = r.schedule.m;
    sched["epsilon"] = r.schedule.epsilon;
    sched["alpha"] = vecd_to_json(r.schedule.alpha);
    sched["dist"] = vecd_to_json(r.schedule.dist);
    sched["mu"] = vecd_to_json(r.schedule.mu);
    sched["c"] = vecd_to_json(r.schedule.c);
    sched["eps_k"] = vecd_to_json(r.schedule.eps_k);
    sched["delta"] = vecd_to_json(r.schedule.delta);
    sched["b"] = vecd_to_json(r.schedule.b);
    sched["depth"] = vecd_to_json(r.schedule.depth);
    sched["lambda"] = vecd_to_json(r.schedule.lambda);
    j["schedule"] = std::move(sched);
    Json levels = Json::array();
    for (const auto& lv : r.levels) {
        Json l;
        l["rep"] = vecd_to_json(lv.rep);
        Json pts = Json::array();
        for (const auto& p : lv.points) pts.push_back(vecd_to_json(p));
        l["points"] = std::move(pts);
        l["c"] = lv.c;
        levels.push_back(std::move(l));
    }
    j["levels"] = std::move(levels);
    Json xs = Json::array();
    for (const auto& x : r.xs) xs.push_back(vecd_to_json(x));
    j["xs"] = std::move(xs);
    Json ys = Json::array();
    for (const auto& y : r.ys) ys.push_back(vecd_to_json(y));
    j["ys"] = std::move(ys);
    Json verdicts;
    verdicts["lambda_ok"] = r.lambda_report.ok;
    verdicts["properties_pass"] = r.properties.pass;
    verdicts["min_decomposition_gap"] = r.properties.max_min_decomposition_gap;
    j["verdicts"] = std::move(verdicts);
    return j;
}

pimple::DisplayResult display_result_from_json(const Json& j) {
    pimple::DisplayResult r{space_from_json(j.at("space")), groupd_from_json(j.at("group")),
                            {},  {}, {}, {}, {}, {}, {}};
    for (const auto& t : j.at("E"))
        r.tips.push_back(pimple::Tip{vecd_from_json(t.at("point")), t.at("level").get<int>()});
    const Json& sched = j.at("schedule");
    r.schedule.m = sched.at("m").get<double>();
    r.schedule.epsilon = sched.at("epsilon").get<double>();
    r.schedule.alpha = vecd_from_json(sched.at("alpha"));
    r.schedule.dist = vecd_from_json(sched.at("dist"));
    r.schedule.mu = vecd_from_json(sched.at("mu"));
    r.schedule.c = vecd_from_json(sched.at("c"));
    r.schedule.eps_k = vecd_from_json(sched.at("eps_k"));
    r.schedule.delta = vecd_from_json(sched.at("delta"));
    r.schedule.b = vecd_from_json(sched.at("b"));
    r.schedule.depth = vecd_from_json(sched.at("depth"));
    r.schedule.lambda = vecd_from_json(sched.at("lambda"));
    for (const auto& l : j.at("levels")) {
        pimple::LevelOrbit lv;
        lv.rep = vecd_from_json(l.at("rep"));
        for (const auto& p : l.at("points")) lv.points.push_back(vecd_from_json(p));
        lv.c = l.at("c").get<double>();
        r.levels.push_back(std::move(lv));
    }
    for (const auto& x : j.at("xs")) r.xs.push_back(vecd_from_json(x));
    for (const auto& y : j.at("ys")) r.ys.push_back(vecd_from_json(y));
    r.lambda_report.ok = j.at("verdicts").at("lambda_ok").get<bool>();
    r.lambda_report.depth = r.schedule.depth;
    r.lambda_report.lambda = r.schedule.lambda;
    r.properties.pass = j.at("verdicts").at("properties_pass").get<bool>();
    return r;
}

Json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open file '" + path + "'");
    Json j;
    in >> j;
    return j;
}

void write_json_file(const std::string& path, const Json& j) {
    std::ofstream out(path);
    if (!out) throw std::invalid_argument("cannot write file '" + path + "'");
    out << j.dump(2) << "\n";
}

}  // namespace isodisplay::io
