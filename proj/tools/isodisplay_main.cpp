// isodisplay: construct and verify finite-dimensional norms whose isometry
// group realizes a prescribed finite group, and the diagnostics around them.

#include <CLI11.hpp>
#include <chrono>
#include <cstdio>
#include <string>

#include "isodisplay/acceptance.hpp"
#include "isodisplay/diagnostics.hpp"
#include "isodisplay/fixtures.hpp"
#include "isodisplay/free_space.hpp"
#include "isodisplay/graph_norm.hpp"
#include "isodisplay/json_io.hpp"
#include "isodisplay/parallel.hpp"
#include "isodisplay/pimple.hpp"

using namespace isodisplay;
using io::Json;

namespace {

struct RunConfig {
    uint64_t seed = 12345;
    double tolerance = kDefaultTolerance;
    int threads = 1;
    std::string out;
    bool fail_on_verdict = true;
    bool timing = false;
};

struct Outcome {
    Json report;
    bool verdict_failed = false;
};

void add_verdict(Json& report, const std::string& name, bool pass, const Json& extra = Json::object()) {
    Json v;
    v["name"] = name;
    v["status"] = pass ? "PASS" : "FAIL";
    for (const auto& [k, val] : extra.items()) v[k] = val;
    report["verdicts"].push_back(v);
}

VecQ parse_rational_vector(const Json& j) {
    if (j.is_array()) return io::vecq_from_json(j);
    if (j.is_object() && j.contains("vector")) return io::vecq_from_json(j.at("vector"));
    throw std::invalid_argument("expected a vector (array of rationals)");
}

VecD parse_float_vector(const Json& j) {
    if (j.is_array()) return io::vecd_from_json(j);
    if (j.is_object() && j.contains("vector")) return io::vecd_from_json(j.at("vector"));
    throw std::invalid_argument("expected a vector (array of numbers)");
}

Outcome run_graph_norm(const std::string& op, const std::string& graph_ref,
                       const std::string& vector_ref, const RunConfig& cfg) {
    Outcome out;
    graphnorm::GammaSpace sp(io::graph_from_json(fixtures::load(graph_ref)));
    out.report["space"] = Json{{"dim", sp.dim()}, {"kind", "graph_norm"}};
    if (op == "eval") {
        if (vector_ref.empty()) throw std::invalid_argument("graph-norm eval needs --vector");
        VecQ a = parse_rational_vector(fixtures::load(vector_ref));
        out.report["values"]["norm"] = sp.norm(a).str();
        VecQ phi = sp.space().support_functional_exact(a);
        out.report["values"]["support_functional"] = io::vecq_to_json(phi);
    } else if (op == "extremes") {
        graphnorm::ExtremePointReport rep = graphnorm::extreme_points(sp);
        Json verts = Json::array();
        for (const auto& v : rep.vertices) verts.push_back(io::vecq_to_json(v));
        out.report["values"]["vertices"] = verts;
        out.report["values"]["vertex_count"] = rep.vertices.size();
        out.report["values"]["extra_count"] = rep.extras.size();
        add_verdict(out.report, "extreme points are exactly the signed units", rep.only_signed_units,
                    Json{{"extras", rep.extras.size()}});
        out.verdict_failed |= !rep.only_signed_units;
    } else if (op == "isom") {
        graphnorm::IsometryGroupReport rep = graphnorm::gamma_isometry_group(sp);
        out.report["values"]["order"] = rep.group.order();
        out.report["values"]["graph_aut_order"] = rep.graph_aut_order;
        out.report["values"]["completeness"] = rep.verdict;
        add_verdict(out.report, "group equals {-1,1} x Aut(graph)", rep.matches_signed_automorphisms);
        out.verdict_failed |= !rep.matches_signed_automorphisms;
        out.report["group"] = io::group_to_json(rep.group);
    } else {
        throw std::invalid_argument("unknown graph-norm operation '" + op + "'");
    }
    (void)cfg;
    return out;
}

Outcome run_gadget(const std::string& op, const std::string& group_ref, std::vector<int> depths,
                   const RunConfig& cfg) {
    Outcome out;
    graphs::PermGroup h = io::perm_group_from_json(fixtures::load(group_ref));
    graphs::GadgetGraph gg = graphs::build_display_graph(h, depths);
    out.report["values"]["vertices"] = gg.graph.n;
    out.report["values"]["base_group_order"] = h.order();
    if (op == "build") {
        out.report["gadget"] = io::gadget_to_json(gg);
    } else if (op == "verify") {
        graphs::GadgetReport rep = graphs::verify_gadget(gg, h);
        std::string verdict = rep.verdict == graphs::GadgetReport::Verdict::Equal ? "EQUAL"
                              : rep.verdict == graphs::GadgetReport::Verdict::KClosureGap
                                  ? "K-CLOSURE-GAP"
                                  : "MISMATCH";
        out.report["values"]["verdict"] = verdict;
        out.report["values"]["restriction_order"] = rep.restriction.order();
        out.report["values"]["core_aut_order"] = rep.core_aut_order;
        out.report["values"]["note"] = rep.note;
        add_verdict(out.report, "gadget restriction equals the base group",
                    rep.verdict == graphs::GadgetReport::Verdict::Equal, Json{{"verdict", verdict}});
        out.verdict_failed |= rep.verdict == graphs::GadgetReport::Verdict::Mismatch;
        // pipeline shadow on the graph norm
        graphnorm::DisplayOnC0Report shadow = graphnorm::display_on_c0(h, depths);
        out.report["values"]["isometry_shadow_order"] = shadow.isometry_order;
        add_verdict(out.report, "isometry shadow is {-1,1} x h", shadow.isomorphic_to_pm1_times_h);
    } else {
        throw std::invalid_argument("unknown gadget operation '" + op + "'");
    }
    (void)cfg;
    return out;
}

Outcome run_display(const std::string& op, const std::string& group_ref, const std::string& result_ref,
                    int dim, int samples, const RunConfig& cfg) {
    Outcome out;
    if (op == "build") {
        MatrixGroupD G = io::groupd_from_json(fixtures::load(group_ref), cfg.tolerance);
        if (dim <= 0) dim = G.dim();
        if (dim != G.dim()) throw std::invalid_argument("display: --dim must match the group dimension");
        std::vector<VecD> xs;
        for (int i = 0; i < dim; ++i) {
            VecD e(dim, 0.0);
            e[i] = 1.0;
            xs.push_back(e);
        }
        pimple::DisplayResult res =
            pimple::display_renorm(NormedSpace::euclidean(dim), G, xs, samples, cfg.seed, cfg.tolerance);
        out.report["result"] = io::display_result_to_json(res);
        add_verdict(out.report, "lambda selection", res.lambda_report.ok);
        add_verdict(out.report, "pimple properties", res.properties.pass,
                    Json{{"max_min_decomposition_gap", res.properties.max_min_decomposition_gap}});
        out.verdict_failed |= !res.lambda_report.ok || !res.properties.pass;
    } else if (op == "verify") {
        Json rj = fixtures::load(result_ref);
        if (rj.contains("result")) rj = rj.at("result");  // accept a full build report
        pimple::DisplayResult res = io::display_result_from_json(rj);
        pimple::RecoveryReport rec =
            pimple::isometry_group_from_extremes(res, 500, cfg.seed, cfg.tolerance);
        out.report["values"]["recovered_order"] = rec.recovered.order();
        out.report["values"]["input_order"] = res.group.order();
        out.report["values"]["candidates"] = rec.candidates;
        out.report["values"]["nonmembers_rejected"] = rec.nonmembers_rejected;
        if (rec.nonmembers_rejected > 0)
            out.report["values"]["min_rejection_deviation"] = rec.min_rejection_deviation;
        add_verdict(out.report, "recovered isometry group equals the input group", rec.equals_input);
        add_verdict(out.report, "no uncertified extra isometries", rec.anomalies.empty());
        out.verdict_failed |= !rec.equals_input || !rec.anomalies.empty();
    } else {
        throw std::invalid_argument("unknown display operation '" + op + "'");
    }
    return out;
}

Outcome run_free_space(const std::string& op, const std::string& metric_ref,
                       const std::string& molecule_ref, const std::string& transform,
                       const RunConfig& cfg) {
    Outcome out;
    freespace::FiniteMetricSpace m = io::metric_from_json(fixtures::load(metric_ref));
    if (transform == "bounded") {
        m = freespace::transform_bounded(m);
    } else if (transform == "concave") {
        freespace::ConcavityReport conc;
        m = freespace::transform_concave(freespace::transform_bounded(m), &conc);
        out.report["values"]["concave"] = conc.concave;
        out.report["values"]["concavity_margin"] = conc.min_margin;
    } else if (transform != "none") {
        throw std::invalid_argument("unknown transform '" + transform + "'");
    }
    out.report["metric"] = io::metric_to_json(m);
    if (op == "norm" || op == "dual") {
        if (molecule_ref.empty()) throw std::invalid_argument("free-space " + op + " needs --molecule");
        freespace::Molecule mol = io::molecule_from_json(fixtures::load(molecule_ref), m);
        if (op == "norm") {
            freespace::PrimalResult res = freespace::ae_norm_primal(m, mol);
            out.report["values"]["norm"] = res.value;
            Json dec = Json::array();
            for (const auto& a : res.decomposition)
                dec.push_back(Json{{"from", m.points[a.x]}, {"to", m.points[a.y]}, {"mass", a.coefficient}});
            out.report["values"]["decomposition"] = dec;
        } else {
            freespace::DualResult res = freespace::ae_norm_dual(m, mol);
            out.report["values"]["norm"] = res.value;
            Json f;
            for (int i = 0; i < m.size(); ++i) f[m.points[i]] = res.witness[i];
            out.report["values"]["lipschitz_witness"] = f;
        }
        // both routes agree within tolerance
        double primal = freespace::ae_norm_primal(m, mol).value;
        double dual = freespace::ae_norm_dual(m, mol).value;
        add_verdict(out.report, "primal-dual gap within 1e-9", std::fabs(primal - dual) <= 1e-9,
                    Json{{"gap", std::fabs(primal - dual)}});
        out.verdict_failed |= std::fabs(primal - dual) > 1e-9;
    } else if (op == "isom") {
        freespace::FreeIsometryReport rep = freespace::ae_isometry_group(m, 30, cfg.seed, cfg.tolerance);
        out.report["values"]["order"] = rep.group.order();
        out.report["values"]["metric_isometries"] = rep.metric_isometries;
        add_verdict(out.report, "order equals 2 x |Isom(Y,d)|", rep.order_matches);
        add_verdict(out.report, "no isometries beyond sign times isometry", rep.no_extra_isometries);
        out.verdict_failed |= !rep.order_matches || !rep.no_extra_isometries;
    } else {
        throw std::invalid_argument("unknown free-space operation '" + op + "'");
    }
    return out;
}

Outcome run_diag(const std::string& op, const std::string& space_ref, const std::string& group_ref,
                 const std::string& x_ref, const std::string& xstar_ref, const std::string& grid_csv,
                 int budget, const RunConfig& cfg) {
    Outcome out;
    NormedSpace space = io::space_from_json(fixtures::load(space_ref));
    if (op == "convex-transitive") {
        MatrixGroupD G = io::groupd_from_json(fixtures::load(group_ref), cfg.tolerance);
        VecD x = parse_float_vector(fixtures::load(x_ref));
        VecD xstar = parse_float_vector(fixtures::load(xstar_ref));
        auto v = diag::convex_transitivity_test(space, G, x, xstar, cfg.tolerance);
        out.report["values"]["sup"] = v.sup;
        out.report["values"]["exact"] = v.exact;
        add_verdict(out.report, "sup x*(Tx) reaches 1", !v.fails,
                    Json{{"sup", v.sup}, {"x", io::vecd_to_json(v.x)}, {"xstar", io::vecd_to_json(v.xstar)}});
        out.verdict_failed |= v.fails;
    } else if (op == "necessary") {
        MatrixGroupD G = io::groupd_from_json(fixtures::load(group_ref), cfg.tolerance);
        auto rep = diag::necessary_conditions(space, G, budget > 0 ? budget : 200, cfg.seed, cfg.tolerance);
        add_verdict(out.report, "(i) group contains -Id", rep.has_minus_id);
        add_verdict(out.report, "(ii) group is closed", rep.closed, Json{{"note", rep.note}});
        add_verdict(out.report, "(iii) separating pair found", rep.witness_found,
                    Json{{"sup", rep.witness_sup},
                         {"x", io::vecd_to_json(rep.witness_x)},
                         {"xstar", io::vecd_to_json(rep.witness_xstar)}});
        out.verdict_failed |= !rep.has_minus_id;
    } else if (op == "distinguished") {
        MatrixGroupD G = io::groupd_from_json(fixtures::load(group_ref), cfg.tolerance);
        VecD x = parse_float_vector(fixtures::load(x_ref));
        double sep = diag::distinguished_point_check(space, G, x);
        out.report["values"]["separation"] = sep;
        add_verdict(out.report, "point is distinguished", sep > cfg.tolerance, Json{{"separation", sep}});
        out.verdict_failed |= sep <= cfg.tolerance;
    } else if (op == "lur") {
        VecD x = parse_float_vector(fixtures::load(x_ref));
        VecD grid;
        if (grid_csv.empty()) grid = {0.1, 0.5, 1.0, 1.5, 1.9};
        else {
            std::string tok;
            for (char c : grid_csv + ",") {
                if (c == ',') {
                    if (!tok.empty()) grid.push_back(std::stod(tok));
                    tok.clear();
                } else
                    tok += c;
            }
        }
        diag::LurModulus mod = diag::lur_modulus(space, x, grid, budget > 0 ? budget : 4000, cfg.seed);
        Json table = Json::array();
        double min_delta = 1e300;
        for (auto [eps, delta] : mod.table) {
            table.push_back(Json{{"eps", eps}, {"delta", delta}});
            min_delta = std::min(min_delta, delta);
        }
        out.report["values"]["modulus"] = table;
        add_verdict(out.report, "positive rotundity gap on the grid", min_delta > cfg.tolerance,
                    Json{{"min_delta", min_delta}});
        out.verdict_failed |= min_delta <= cfg.tolerance;
    } else {
        throw std::invalid_argument("unknown diag operation '" + op + "'");
    }
    return out;
}

Outcome run_selftest(int criterion) {
    Outcome out;
    auto results = criterion > 0 ? std::vector<acceptance::CriterionResult>{acceptance::run_criterion(criterion)}
                                 : acceptance::run_all();
    for (const auto& r : results) {
        std::printf("CRITERION %2d: %s  [%6.2fs]  %s\n    %s\n", r.id, r.pass ? "PASS" : "FAIL",
                    r.seconds, r.name.c_str(), r.detail.c_str());
        add_verdict(out.report, "criterion " + std::to_string(r.id) + ": " + r.name, r.pass,
                    Json{{"detail", r.detail}});
        out.verdict_failed |= !r.pass;
    }
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"isometry-group displays on finite-dimensional normed spaces"};
    app.require_subcommand(1);
    app.fallthrough();  // global options may follow the subcommand

    RunConfig cfg;
    app.add_option("--seed", cfg.seed, "random seed for all sampled checks");
    app.add_option("--tolerance", cfg.tolerance, "float comparison tolerance");
    app.add_option("--threads", cfg.threads, "worker threads for batch evaluation");
    app.add_option("--out", cfg.out, "write the JSON report here");
    app.add_flag("--fail-on-verdict,!--no-fail-on-verdict", cfg.fail_on_verdict,
                 "exit 1 when a verdict fails (default on)");
    app.add_flag("--timing", cfg.timing, "include wall-clock timing in the report");

    std::string graph_ref, vector_ref, group_ref, result_ref, metric_ref, molecule_ref;
    std::string space_ref, x_ref, xstar_ref, grid_csv;
    std::string transform = "none";
    std::string depths_csv = "1,2";
    int dim = 0, samples = 2000, budget = 0, criterion = 0;

    auto* gn = app.add_subcommand("graph-norm", "polyhedral graph norm operations");
    gn->fallthrough();
    std::string gn_op;
    gn->add_option("op", gn_op, "eval | extremes | isom")->required();
    gn->add_option("--graph", graph_ref, "graph JSON or fixture:NAME")->required();
    gn->add_option("--vector", vector_ref, "rational vector JSON");

    auto* gadget = app.add_subcommand("gadget", "permutation-group gadget graphs");
    gadget->fallthrough();
    std::string gadget_op;
    gadget->add_option("op", gadget_op, "build | verify")->required();
    gadget->add_option("--group", group_ref, "permutation group JSON or fixture:NAME")->required();
    gadget->add_option("--depths", depths_csv, "tuple lengths, a doubling chain (default 1,2)");

    auto* disp = app.add_subcommand("display", "pimple renorming displays");
    disp->fallthrough();
    std::string disp_op;
    disp->add_option("op", disp_op, "build | verify")->required();
    disp->add_option("--group", group_ref, "matrix group JSON or fixture:NAME");
    disp->add_option("--result", result_ref, "display result JSON (for verify)");
    disp->add_option("--dim", dim, "space dimension (defaults to the group dimension)");
    disp->add_option("--samples", samples, "sampled checks per property");

    auto* fs = app.add_subcommand("free-space", "Arens-Eells space operations");
    fs->fallthrough();
    std::string fs_op;
    fs->add_option("op", fs_op, "norm | dual | isom")->required();
    fs->add_option("--metric", metric_ref, "metric JSON or fixture:NAME")->required();
    fs->add_option("--molecule", molecule_ref, "molecule JSON or fixture:NAME");
    fs->add_option("--transform", transform, "none | bounded | concave (both maps)");

    auto* dg = app.add_subcommand("diag", "transitivity and rotundity diagnostics");
    dg->fallthrough();
    std::string dg_op;
    dg->add_option("op", dg_op, "convex-transitive | necessary | distinguished | lur")->required();
    dg->add_option("--space", space_ref, "normed space JSON or fixture:NAME")->required();
    dg->add_option("--group", group_ref, "matrix group JSON or fixture:NAME");
    dg->add_option("--x", x_ref, "point JSON (array)");
    dg->add_option("--xstar", xstar_ref, "functional JSON (array)");
    dg->add_option("--eps-grid", grid_csv, "comma-separated epsilon grid for lur");
    dg->add_option("--budget", budget, "sample budget");

    auto* st = app.add_subcommand("selftest", "run the acceptance catalog");
    st->fallthrough();
    st->add_option("--criterion", criterion, "run a single criterion (1-11)");

    auto* fx = app.add_subcommand("fixtures", "list embedded fixtures");
    fx->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    set_worker_threads(cfg.threads);

    auto t0 = std::chrono::steady_clock::now();
    Outcome out;
    try {
        if (gn->parsed()) out = run_graph_norm(gn_op, graph_ref, vector_ref, cfg);
        else if (gadget->parsed()) {
            std::vector<int> depths;
            std::string tok;
            for (char c : depths_csv + ",") {
                if (c == ',') {
                    if (!tok.empty()) depths.push_back(std::stoi(tok));
                    tok.clear();
                } else
                    tok += c;
            }
            out = run_gadget(gadget_op, group_ref, depths, cfg);
        } else if (disp->parsed()) out = run_display(disp_op, group_ref, result_ref, dim, samples, cfg);
        else if (fs->parsed()) out = run_free_space(fs_op, metric_ref, molecule_ref, transform, cfg);
        else if (dg->parsed()) out = run_diag(dg_op, space_ref, group_ref, x_ref, xstar_ref, grid_csv, budget, cfg);
        else if (st->parsed()) out = run_selftest(criterion);
        else if (fx->parsed()) {
            for (const auto& n : fixtures::names()) out.report["values"]["fixtures"].push_back(n);
        }
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "input error: %s\n", e.what());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    }

    // command echo first, then verdicts and values
    Json report;
    Json cmd = Json::array();
    for (int i = 0; i < argc; ++i) cmd.push_back(argv[i]);
    report["command"] = cmd;
    for (const auto& [k, v] : out.report.items()) report[k] = v;
    if (!report.contains("verdicts")) report["verdicts"] = Json::array();
    if (cfg.timing)
        report["timing_seconds"] =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    if (!cfg.out.empty()) io::write_json_file(cfg.out, report);
    if (!st->parsed()) std::printf("%s\n", report.dump(2).c_str());

    bool any_fail = false;
    for (const auto& v : report["verdicts"])
        if (v.at("status") == "FAIL") any_fail = true;
    return any_fail && cfg.fail_on_verdict ? 1 : 0;
}
