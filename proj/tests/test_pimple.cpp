#include <doctest.h>

#include <cmath>

#include "isodisplay/pimple.hpp"
#include "isodisplay/rng.hpp"

using namespace isodisplay;
using namespace isodisplay::pimple;

namespace {

// independent 1-D oracle: coarse grid + golden-section polish
double oracle_single(const NormedSpace& base, const VecD& x0, double lambda, const VecD& y) {
    auto f = [&](double t) { return base.norm(y - t * x0) + lambda * std::fabs(t); };
    double bound = base.norm(y) / lambda + 1.0;
    double best_t = 0.0, best = f(0.0);
    for (int i = -4000; i <= 4000; ++i) {
        double t = bound * i / 4000.0;
        double v = f(t);
        if (v < best) { best = v; best_t = t; }
    }
    double lo = best_t - bound / 1000.0, hi = best_t + bound / 1000.0;
    for (int it = 0; it < 200; ++it) {
        double m1 = lo + (hi - lo) / 3.0, m2 = hi - (hi - lo) / 3.0;
        if (f(m1) < f(m2)) hi = m2;
        else lo = m1;
    }
    return std::min(best, f((lo + hi) / 2));
}

MatrixGroupD group_pm_id(int dim) {
    MatD minus = MatD::identity(dim);
    for (auto& v : minus.a) v = -v;
    return MatrixGroupD::closure({minus}, 4);
}

MatrixGroupD group_signed_swap() {
    MatD minus = MatD::identity(2);
    for (auto& v : minus.a) v = -v;
    MatD swap(2, 2);
    swap.at(0, 1) = 1.0;
    swap.at(1, 0) = 1.0;
    return MatrixGroupD::closure({minus, swap}, 8);
}

MatrixGroupD group_pm1_s3() {
    MatD minus = MatD::identity(3);
    for (auto& v : minus.a) v = -v;
    MatD cyc(3, 3);
    cyc.at(1, 0) = 1.0; cyc.at(2, 1) = 1.0; cyc.at(0, 2) = 1.0;
    MatD tr(3, 3);
    tr.at(1, 0) = 1.0; tr.at(0, 1) = 1.0; tr.at(2, 2) = 1.0;
    return MatrixGroupD::closure({minus, cyc, tr}, 16);
}

std::vector<VecD> basis(int dim) {
    std::vector<VecD> xs;
    for (int i = 0; i < dim; ++i) {
        VecD e(dim, 0.0);
        e[i] = 1.0;
        xs.push_back(e);
    }
    return xs;
}

}  // namespace

TEST_SUITE("pimple_norm") {
    TEST_CASE("single spike examples") {
        NormedSpace e2 = NormedSpace::euclidean(2);
        VecD x0{1.0, 0.0};
        CHECK(single_pimple_norm(e2, x0, 0.9, x0) == doctest::Approx(0.9));
        CHECK(single_pimple_norm(e2, x0, 0.9, {0.0, 1.0}) == doctest::Approx(1.0));
        VecD tip{1.0 / 0.9, 0.0};
        CHECK(single_pimple_norm(e2, x0, 0.9, tip) == doctest::Approx(1.0));
    }

    TEST_CASE("single spike against the 1-D oracle") {
        NormedSpace e3 = NormedSpace::euclidean(3);
        Rng rng(404);
        for (int i = 0; i < 60; ++i) {
            VecD x0 = rng.sphere(3);
            double lambda = rng.uniform(0.55, 0.95);
            VecD y = rng.uniform(0.1, 2.0) * rng.sphere(3);
            double got = single_pimple_norm(e3, x0, lambda, y);
            double want = oracle_single(e3, x0, lambda, y);
            CHECK(got == doctest::Approx(want).epsilon(1e-6));
            CHECK(got <= want + 1e-9);  // closed form is a true minimum
        }
    }

    TEST_CASE("multi-spike equals min single on well-separated spikes") {
        NormedSpace e3 = NormedSpace::euclidean(3);
        std::vector<Spike> spikes = {Spike::at({1.0, 0.0, 0.0}, 0.9, 0),
                                     Spike::at({0.0, 1.0, 0.0}, 0.9, 0),
                                     Spike::at({0.0, 0.0, 1.0}, 0.85, 1)};
        NormedSpace sp = NormedSpace::pimple(e3, spikes);
        Rng rng(99);
        for (int i = 0; i < 300; ++i) {
            VecD y = rng.sphere(3);
            double multi = sp.norm(y);
            double single = 1e300;
            for (const auto& s : spikes)
                single = std::min(single, single_pimple_norm(e3, s.dir, s.lambda(), y));
            CHECK(std::fabs(multi - single) <= 1e-7);
            CHECK(multi <= 1.0 + 1e-12);  // never above the base norm on the sphere
            CHECK(multi >= 0.5 - 1e-12);  // m-equivalence
        }
    }

    TEST_CASE("gauge duality certificate brackets the norm") {
        NormedSpace e3 = NormedSpace::euclidean(3);
        std::vector<Spike> spikes = {Spike::at({1.0, 0.0, 0.0}, 0.8, 0),
                                     Spike::at({0.0, 1.0, 0.0}, 0.8, 0)};
        NormedSpace sp = NormedSpace::pimple(e3, spikes);
        Rng rng(11);
        for (int i = 0; i < 200; ++i) {
            VecD y = rng.uniform(0.2, 2.0) * rng.sphere(3);
            GaugeCertificate cert = certify_pimple_norm(sp, y);
            if (!cert.available) continue;
            CHECK(cert.lower <= cert.upper + 1e-12);
            CHECK(cert.upper - cert.lower <= 1e-6 * (1.0 + cert.upper));
        }
    }

    TEST_CASE("cycle cap reached reports non-convergence") {
        NormedSpace e2 = NormedSpace::euclidean(2);
        std::vector<Spike> spikes = {Spike::at({1.0, 0.0}, 0.8, 0)};
        CHECK_THROWS_AS(multi_pimple_norm(e2, spikes, {1.0, 1.0}, 0), std::runtime_error);
    }

    TEST_CASE("deep drops survive the depth representation") {
        // a spike depth far below the representable gap under 1.0 still
        // produces a positive drop at its center
        VecD v{1.0, 0.0};
        double u = 1e-18;
        CHECK(single_pimple_drop(v, u, v) == doctest::Approx(u).epsilon(1e-6));
        CHECK(single_pimple_drop(v, u, {0.0, 1.0}) == 0.0);
    }
}

TEST_SUITE("schedules") {
    TEST_CASE("distinguished mu for +-Id in dim 2") {
        NormedSpace e2 = NormedSpace::euclidean(2);
        auto G = group_pm_id(2);
        PimpleSchedule s = distinguished_mu(basis(2), G, 0.5, e2);
        CHECK(s.mu[0] == 1.0);
        CHECK(s.alpha[0] == doctest::Approx(2.0));
        CHECK(s.dist[1] == doctest::Approx(1.0));
        CHECK(s.mu[1] <= s.alpha[0] * s.mu[0] / 32.0);
        // the mu are powers of 1/2
        double l = std::log2(s.mu[1]);
        CHECK(l == doctest::Approx(std::round(l)));
    }

    TEST_CASE("one-element sequence has only mu0") {
        NormedSpace e2 = NormedSpace::euclidean(2);
        auto G = group_pm_id(2);
        PimpleSchedule s = distinguished_mu({VecD{1.0, 0.0}}, G, 0.5, e2);
        CHECK(s.mu.size() == 1);
        CHECK(s.mu[0] == 1.0);
    }

    TEST_CASE("dependent sequences are rejected") {
        NormedSpace e2 = NormedSpace::euclidean(2);
        auto G = group_pm_id(2);
        CHECK_THROWS_AS(distinguished_mu({VecD{1.0, 0.0}, VecD{-1.0, 0.0}}, G, 0.5, e2),
                        std::invalid_argument);
    }

    TEST_CASE("y sequence: y0 = x0, separations verified exhaustively") {
        NormedSpace e2 = NormedSpace::euclidean(2);
        auto G = group_signed_swap();
        auto xs = basis(2);
        PimpleSchedule s = distinguished_mu(xs, G, 0.5, e2);
        YSequence seq = build_y_sequence(xs, s, G, e2);
        CHECK(seq.ys[0] == xs[0]);
        CHECK(seq.min_margin_same >= 0.0);
        CHECK(seq.min_margin_cross >= 0.0);
        // an element fixing all x fixes every y
        for (const auto& g : G.elements()) {
            bool fixes_all = true;
            for (const auto& x : xs)
                if (dist2(g.apply(x), x) > 1e-12) fixes_all = false;
            if (fixes_all)
                for (const auto& y : seq.ys) CHECK(dist2(g.apply(y), y) <= 1e-12);
        }
    }

    TEST_CASE("orbit separation for the signed permutations at a basis point") {
        // orbit of e0 is the four signed units; deduplicated up to sign it is
        // {e0, e1}, and the separation constant is the distance sqrt(2)
        NormedSpace e2 = NormedSpace::euclidean(2);
        MatD minus = MatD::identity(2);
        for (auto& v : minus.a) v = -v;
        MatD swap(2, 2);
        swap.at(0, 1) = 1.0;
        swap.at(1, 0) = 1.0;
        MatD refl = MatD::identity(2);
        refl.at(1, 1) = -1.0;
        auto G = MatrixGroupD::closure({minus, swap, refl}, 16);
        PimpleStage stage = build_pimple_stage(e2, G, {VecD{1.0, 0.0}}, 300, 5);
        CHECK(stage.levels.size() == 1);
        CHECK(stage.levels[0].points.size() == 2);
        CHECK(stage.levels[0].c == doctest::Approx(std::sqrt(2.0)));
    }

    TEST_CASE("select_lambda post-conditions") {
        NormedSpace e2 = NormedSpace::euclidean(2);
        auto G = group_pm_id(2);
        auto xs = basis(2);
        DisplayResult res = display_renorm(e2, G, xs, 500, 7);
        REQUIRE(res.lambda_report.ok);
        for (size_t k = 0; k < res.schedule.depth.size(); ++k) {
            double u = res.schedule.depth[k];
            CHECK(u / (1.0 - u) <= res.schedule.delta[k] / 3.0 + 1e-15);
            CHECK(u > 0.0);
            if (k > 0) CHECK(res.schedule.b[k] <= 0.5 * res.schedule.b[k - 1] + 1e-15);
        }
        // orbit separation example: +-e0 collapses to one spike point per level 0
        CHECK(res.levels[0].points.size() == 1);
    }
}

TEST_SUITE("display") {
    TEST_CASE("display and recovery: signed swap group in dim 2") {
        NormedSpace e2 = NormedSpace::euclidean(2);
        auto G = group_signed_swap();
        DisplayResult res = display_renorm(e2, G, basis(2), 800, 21);
        CHECK(res.properties.pass);
        CHECK(res.tips.size() == 8);  // levels {e0,e1} and the two mixed points, both signs
        RecoveryReport rec = isometry_group_from_extremes(res);
        CHECK(rec.equals_input);
        CHECK(rec.recovered.order() == 4);
        CHECK(rec.anomalies.empty());
        if (rec.nonmembers_rejected > 0) CHECK(rec.min_rejection_deviation > 10 * kDefaultTolerance);
    }

    TEST_CASE("display and recovery: +-Id in dims 1 through 3") {
        for (int dim = 1; dim <= 3; ++dim) {
            NormedSpace base = NormedSpace::euclidean(dim);
            auto G = group_pm_id(dim);
            DisplayResult res = display_renorm(base, G, basis(dim), 400, 31);
            RecoveryReport rec = isometry_group_from_extremes(res);
            CHECK(rec.equals_input);
            CHECK(rec.recovered.order() == 2);
            CHECK(rec.anomalies.empty());
        }
    }

    TEST_CASE("group without -Id is rejected") {
        NormedSpace e2 = NormedSpace::euclidean(2);
        MatD swap(2, 2);
        swap.at(0, 1) = 1.0;
        swap.at(1, 0) = 1.0;
        auto G = MatrixGroupD::closure({swap}, 4);
        CHECK_THROWS_AS(display_renorm(e2, G, basis(2)), std::invalid_argument);
    }

    TEST_CASE("members accepted exactly; outside maps are kept out") {
        NormedSpace e2 = NormedSpace::euclidean(2);
        auto G = group_signed_swap();
        DisplayResult res = display_renorm(e2, G, basis(2), 800, 77);
        // every g in G is an isometry of the renormed space
        Rng rng(55);
        for (const auto& g : res.group.elements()) {
            double dev = 0.0;
            for (int i = 0; i < 100; ++i) {
                VecD x = rng.sphere(2);
                dev = std::max(dev, std::fabs(res.space.norm(g.apply(x)) - res.space.norm(x)));
            }
            CHECK(dev <= 1e-9);
        }
        // diag(1,-1) lies outside G: it breaks the mixed-level tips and must
        // not appear among the recovered isometries
        RecoveryReport rec = isometry_group_from_extremes(res);
        MatD bad = MatD::identity(2);
        bad.at(1, 1) = -1.0;
        CHECK(!rec.recovered.contains(bad));
        CHECK(rec.equals_input);
        // candidates that do survive the tip matching but distort the ball
        // are rejected with macroscopic deviation
        if (rec.nonmembers_rejected > 0) CHECK(rec.min_rejection_deviation > 10 * kDefaultTolerance);
    }
}

TEST_SUITE("embeddings") {
    TEST_CASE("C2 with the swap involution lands on -Id in dim 1") {
        auto h = graphs::PermGroup::symmetric(2);
        graphs::Perm s{1, 0};
        EmbeddingResult emb = central_involution_embedding(h, s, 0);
        CHECK(emb.dim == 1);
        CHECK(emb.group.order() == 2);
        CHECK(emb.group.contains_minus_id());
    }

    TEST_CASE("the double transposition maps to -Id with all signs flipped") {
        graphs::Perm s{1, 0, 3, 2};
        auto h = graphs::PermGroup::from_generators(4, {s});
        EmbeddingResult emb = central_involution_embedding(h, s, 0);
        CHECK(emb.dim == 2);
        MatD minus = MatD::identity(2);
        for (auto& v : minus.a) v = -v;
        bool found = false;
        for (const auto& e : emb.group.elements())
            if (emb.group.equal(e, minus)) found = true;
        CHECK(found);
    }

    TEST_CASE("C2 x C2 with the all-moving involution embeds faithfully") {
        graphs::Perm a{1, 0, 2, 3}, b{0, 1, 3, 2};
        auto h = graphs::PermGroup::from_generators(4, {a, b});
        CHECK(h.order() == 4);
        graphs::Perm s = graphs::compose(a, b);
        EmbeddingResult emb = central_involution_embedding(h, s, 0);
        CHECK(emb.dim == 2);
        CHECK(emb.group.order() == 4);
        CHECK(emb.group.contains_minus_id());
    }

    TEST_CASE("non-central or non-involutive elements are rejected") {
        auto s3 = graphs::PermGroup::symmetric(3);
        CHECK_THROWS_AS(central_involution_embedding(s3, graphs::Perm{1, 0, 2}, 0),
                        std::invalid_argument);  // transposition is not central in S3
        CHECK_THROWS_AS(central_involution_embedding(s3, graphs::Perm{1, 2, 0}, 0),
                        std::invalid_argument);  // 3-cycle is not an involution
    }
}

TEST_SUITE("power_display") {
    TEST_CASE("witness gap verification") {
        NormedSpace e2 = NormedSpace::euclidean(2);
        auto G = group_signed_swap();
        // e0 alone separates the signed swap group at sqrt(2)
        double alpha = std::sqrt(2.0);
        DisplayResult res = power_display(e2, G, {VecD{1.0, 0.0}}, alpha, 400, 5);
        CHECK(res.space.dim() == 2);
        RecoveryReport rec = isometry_group_from_extremes(res);
        CHECK(rec.equals_input);
        // a gap that is too optimistic is rejected
        CHECK_THROWS_AS(power_display(e2, G, {VecD{1.0, 0.0}}, 3.0), std::invalid_argument);
    }

    TEST_CASE("diagonal group with a fixed vector needs two witnesses") {
        NormedSpace e2 = NormedSpace::euclidean(2);
        MatD refl = MatD::identity(2);
        refl.at(1, 1) = -1.0;
        MatD minus = MatD::identity(2);
        for (auto& v : minus.a) v = -v;
        auto G = MatrixGroupD::closure({refl, minus}, 8);
        // e0 is fixed by the reflection, so it cannot witness alone
        CHECK_THROWS_AS(power_display(e2, G, {VecD{1.0, 0.0}}, 0.5), std::invalid_argument);
        DisplayResult res = power_display(e2, G, {VecD{1.0, 0.0}, VecD{0.0, 1.0}}, 2.0, 300, 3);
        CHECK(res.space.dim() == 4);
        RecoveryReport rec = isometry_group_from_extremes(res);
        CHECK(rec.equals_input);
    }
}
