#include <doctest.h>

#include <cmath>

#include "isodisplay/diagnostics.hpp"
#include "isodisplay/pimple.hpp"
#include "isodisplay/rng.hpp"

using namespace isodisplay;
using namespace isodisplay::diag;

namespace {

NormedSpace linf2() {
    std::vector<VecQ> facets = {{Rat(1), Rat(0)}, {Rat(0), Rat(1)}, {Rat(-1), Rat(0)}, {Rat(0), Rat(-1)}};
    return NormedSpace::polyhedral(2, facets);
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

MatrixGroupD pm_id(int dim) {
    MatD minus = MatD::identity(dim);
    for (auto& v : minus.a) v = -v;
    return MatrixGroupD::closure({minus}, 4);
}

}  // namespace

TEST_SUITE("convex transitivity") {
    TEST_CASE("rotations act transitively on the euclidean circle") {
        NormedSpace e2 = NormedSpace::euclidean(2);
        RotationSampler rot;
        Rng rng(3);
        for (int i = 0; i < 5; ++i) {
            VecD x = rng.sphere(2);
            VecD xstar = rng.sphere(2);
            auto v = convex_transitivity_test(e2, rot, x, xstar);
            CHECK(v.sup >= 1.0 - 1e-3);
        }
    }

    TEST_CASE("sup-norm square fails with the half-half functional") {
        NormedSpace li = linf2();
        auto G = signed_permutations2();
        CHECK(G.order() == 8);
        auto v = convex_transitivity_test(li, G, {1.0, 0.0}, {0.5, 0.5});
        CHECK(v.exact);
        CHECK(v.sup == doctest::Approx(0.5));
        CHECK(v.fails);
    }

    TEST_CASE("identity attains sup = 1 with the support functional") {
        NormedSpace e2 = NormedSpace::euclidean(2);
        auto G = signed_permutations2();
        VecD x{0.6, 0.8};
        VecD xstar = e2.support_functional(x);
        auto v = convex_transitivity_test(e2, G, x, xstar);
        CHECK(v.sup == doctest::Approx(1.0));
        CHECK(!v.fails);
    }

    TEST_CASE("monotone in the group: enlarging G never decreases the sup") {
        NormedSpace li = linf2();
        auto big = signed_permutations2();
        auto small = pm_id(2);
        Rng rng(17);
        for (int i = 0; i < 20; ++i) {
            VecD x = rng.sphere(2);
            x = (1.0 / li.norm(x)) * x;
            VecD phi = rng.sphere(2);
            phi = (1.0 / li.dual_norm(phi)) * phi;
            auto vs = convex_transitivity_test(li, small, x, phi);
            auto vb = convex_transitivity_test(li, big, x, phi);
            CHECK(vb.sup >= vs.sup - 1e-12);
        }
    }
}

TEST_SUITE("necessary conditions") {
    TEST_CASE("pm Id on the euclidean plane: witness pair found") {
        NormedSpace e2 = NormedSpace::euclidean(2);
        auto G = pm_id(2);
        auto rep = necessary_conditions(e2, G, 300, 11);
        CHECK(rep.has_minus_id);
        CHECK(rep.closed);
        CHECK(rep.witness_found);
        CHECK(rep.witness_sup < 1.0 - 1e-3);
        // exhaustive re-check of the reported witness
        double sup = -1e300;
        for (const auto& g : G.elements())
            sup = std::max(sup, dot(rep.witness_xstar, g.apply(rep.witness_x)));
        CHECK(sup == doctest::Approx(rep.witness_sup));
    }

    TEST_CASE("a dense rotation subgroup leaves no witness") {
        // finite stand-in for the full isometry group of the euclidean plane
        NormedSpace e2 = NormedSpace::euclidean(2);
        double th = 2.0 * 3.14159265358979323846 / 720.0;
        MatD rot(2, 2);
        rot.at(0, 0) = std::cos(th); rot.at(0, 1) = -std::sin(th);
        rot.at(1, 0) = std::sin(th); rot.at(1, 1) = std::cos(th);
        auto G = MatrixGroupD::closure({rot}, 1000, 1e-7);
        auto rep = necessary_conditions(e2, G, 60, 7, 1e-4);
        CHECK(!rep.witness_found);  // sampled sup always ~ 1 at this resolution
    }

    TEST_CASE("missing -Id is reported") {
        NormedSpace e2 = NormedSpace::euclidean(2);
        MatD swap(2, 2);
        swap.at(0, 1) = 1.0;
        swap.at(1, 0) = 1.0;
        auto G = MatrixGroupD::closure({swap}, 4);
        auto rep = necessary_conditions(e2, G, 50, 3);
        CHECK(!rep.has_minus_id);
    }
}

TEST_SUITE("distinguished points") {
    TEST_CASE("examples") {
        NormedSpace e2 = NormedSpace::euclidean(2);
        CHECK(distinguished_point_check(e2, pm_id(2), {1.0, 0.0}) == doctest::Approx(2.0));

        MatD minus = MatD::identity(2);
        for (auto& v : minus.a) v = -v;
        MatD swap(2, 2);
        swap.at(0, 1) = 1.0;
        swap.at(1, 0) = 1.0;
        auto G = MatrixGroupD::closure({minus, swap}, 8);
        double r = 1.0 / std::sqrt(2.0);
        CHECK(distinguished_point_check(e2, G, {r, r}) == doctest::Approx(0.0));  // swap fixes it
        double s = 1.0 / std::sqrt(5.0);
        double v = distinguished_point_check(e2, G, {2 * s, s});
        CHECK(v == doctest::Approx(std::sqrt(2.0) * s));  // swap displacement
        CHECK(v > 0.0);
    }
}

TEST_SUITE("lur modulus") {
    TEST_CASE("euclidean closed form within 1e-6 on the grid") {
        NormedSpace e2 = NormedSpace::euclidean(2);
        VecD grid;
        for (double e = 0.1; e < 1.95; e += 0.2) grid.push_back(e);
        LurModulus mod = lur_modulus(e2, {1.0, 0.0}, grid, 4000, 17);
        for (auto [eps, delta] : mod.table) {
            double want = 2.0 - std::sqrt(4.0 - eps * eps);
            CHECK(std::fabs(delta - want) <= 1e-6);
        }
        NormedSpace e3 = NormedSpace::euclidean(3);
        Rng rng(5);
        LurModulus mod3 = lur_modulus(e3, rng.sphere(3), {0.5, 1.0, 1.5}, 4000, 23);
        for (auto [eps, delta] : mod3.table)
            CHECK(std::fabs(delta - (2.0 - std::sqrt(4.0 - eps * eps))) <= 1e-6);
    }

    TEST_CASE("flat faces have zero modulus") {
        NormedSpace li = linf2();
        LurModulus mod = lur_modulus(li, {1.0, 0.0}, {0.25, 0.5, 1.0}, 2000, 31);
        for (auto [eps, delta] : mod.table) CHECK(delta <= 1e-9);
    }

    TEST_CASE("eps = 0 gives delta = 0, and the table is monotone") {
        NormedSpace e2 = NormedSpace::euclidean(2);
        LurModulus mod = lur_modulus(e2, {0.0, 1.0}, {0.0, 0.4, 0.8, 1.2}, 1500, 7);
        CHECK(mod.table.front().second == doctest::Approx(0.0));
        for (size_t i = 1; i < mod.table.size(); ++i)
            CHECK(mod.table[i].second >= mod.table[i - 1].second - 1e-12);
    }

    TEST_CASE("dimension one: only the antipode qualifies") {
        NormedSpace e1 = NormedSpace::euclidean(1);
        LurModulus mod = lur_modulus(e1, {1.0}, {0.5, 1.0, 2.0}, 200, 3);
        for (auto [eps, delta] : mod.table) CHECK(delta == doctest::Approx(2.0));
    }
}

TEST_SUITE("separation witness") {
    TEST_CASE("pm Id at a basis point") {
        NormedSpace e2 = NormedSpace::euclidean(2);
        auto G = pm_id(2);
        SeparationWitness w = separation_witness(e2, G, {1.0, 0.0});
        CHECK(w.verified);
        CHECK(w.beta > 0.0);
        // exhaustive confirmation
        double sup = -1e300;
        for (const auto& g : G.elements())
            sup = std::max(sup, dot(w.xstar, g.apply(w.x)));
        CHECK(sup == doctest::Approx(w.bound));
        CHECK(sup <= 1.0 - w.beta + 1e-12);
    }

    TEST_CASE("signed swap group at a generic point") {
        NormedSpace e2 = NormedSpace::euclidean(2);
        MatD minus = MatD::identity(2);
        for (auto& v : minus.a) v = -v;
        MatD swap(2, 2);
        swap.at(0, 1) = 1.0;
        swap.at(1, 0) = 1.0;
        auto G = MatrixGroupD::closure({minus, swap}, 8);
        double s = 1.0 / std::sqrt(5.0);
        SeparationWitness w = separation_witness(e2, G, {2 * s, s});
        CHECK(w.verified);
        CHECK(w.beta > 0.0);
    }

    TEST_CASE("a group fixing y still yields a strict bound") {
        NormedSpace e2 = NormedSpace::euclidean(2);
        MatD refl = MatD::identity(2);
        refl.at(1, 1) = -1.0;
        auto G = MatrixGroupD::closure({refl}, 4);  // fixes (1,0)
        SeparationWitness w = separation_witness(e2, G, {1.0, 0.0});
        CHECK(w.verified);
        CHECK(w.beta > 0.0);
    }

    TEST_CASE("display output admits a verified witness") {
        NormedSpace e2 = NormedSpace::euclidean(2);
        MatD minus = MatD::identity(2);
        for (auto& v : minus.a) v = -v;
        MatD swap(2, 2);
        swap.at(0, 1) = 1.0;
        swap.at(1, 0) = 1.0;
        auto G = MatrixGroupD::closure({minus, swap}, 8);
        std::vector<VecD> xs{{1.0, 0.0}, {0.0, 1.0}};
        pimple::DisplayResult res = pimple::display_renorm(e2, G, xs, 500, 13);
        // pick a generic sphere point away from the spikes
        Rng rng(37);
        for (int i = 0; i < 50; ++i) {
            VecD y = rng.sphere(2);
            if (std::fabs(res.space.norm(y) - norm2(y)) > 1e-12) continue;
            if (distinguished_point_check(res.space, G, y) <= 1e-6) continue;
            SeparationWitness w = separation_witness(res.space, G, y);
            CHECK(w.verified);
            CHECK(w.beta > 0.0);
            break;
        }
        // necessary conditions on the display group: -Id holds and a witness exists
        auto rep = necessary_conditions(res.space, G, 150, 5);
        CHECK(rep.has_minus_id);
        CHECK(rep.witness_found);
    }
}

TEST_SUITE("uniform convexity") {
    TEST_CASE("euclidean: uniform modulus matches the pointwise closed form") {
        NormedSpace e2 = NormedSpace::euclidean(2);
        auto table = uniform_convexity_modulus(e2, {0.5, 1.0, 1.5}, 4000, 3);
        for (auto [eps, delta] : table)
            CHECK(std::fabs(delta - (2.0 - std::sqrt(4.0 - eps * eps))) <= 1e-5);
    }

    TEST_CASE("sup norm: modulus identically zero") {
        NormedSpace li = linf2();
        auto table = uniform_convexity_modulus(li, {0.5, 1.0}, 2000, 9);
        for (auto [eps, delta] : table) CHECK(delta <= 1e-9);
    }
}
