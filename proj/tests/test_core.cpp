#include <doctest.h>

#include <cmath>

#include "isodisplay/matrix_group.hpp"
#include "isodisplay/normed_space.hpp"
#include "isodisplay/rng.hpp"

using namespace isodisplay;

namespace {

NormedSpace linf2() {
    std::vector<VecQ> facets = {{Rat(1), Rat(0)}, {Rat(0), Rat(1)}, {Rat(-1), Rat(0)}, {Rat(0), Rat(-1)}};
    return NormedSpace::polyhedral(2, facets);
}

std::vector<std::vector<int>> path3_metric() {
    return {{0, 1, 2}, {1, 0, 1}, {2, 1, 0}};
}

}  // namespace

TEST_SUITE("rational") {
    TEST_CASE("arithmetic and normalization") {
        CHECK(Rat(2, 4) == Rat(1, 2));
        CHECK(Rat(1, 3) + Rat(1, 6) == Rat(1, 2));
        CHECK(Rat(3, 4) * Rat(2, 3) == Rat(1, 2));
        CHECK(Rat(-10, -20) == Rat(1, 2));
        CHECK(Rat(1, -2) == Rat(-1, 2));
        CHECK(Rat(7, 3) / Rat(7, 3) == Rat(1));
        CHECK(Rat(1, 2) < Rat(2, 3));
        CHECK_THROWS_AS(Rat(1, 0), std::invalid_argument);
        CHECK_THROWS_AS(Rat(1) / Rat(0), std::domain_error);
    }

    TEST_CASE("parse and format round-trip") {
        Rng rng(5);
        for (int i = 0; i < 2000; ++i) {
            long long p = static_cast<long long>(rng.below(2000001)) - 1000000;
            long long q = static_cast<long long>(rng.below(999)) + 1;
            Rat r(p, q);
            CHECK(Rat::parse(r.str()) == r);
        }
        CHECK(Rat::parse("3") == Rat(3));
        CHECK(Rat::parse("-6/8") == Rat(-3, 4));
    }

    TEST_CASE("overflow is detected, not wrapped") {
        Rat big(INT64_MAX / 2, 1);
        CHECK_THROWS_AS(big * big, std::overflow_error);
    }
}

TEST_SUITE("scalar") {
    TEST_CASE("modes and mixing rejection") {
        Scalar e(Rat(1, 3)), f(0.5);
        CHECK(e.exact());
        CHECK(!f.exact());
        CHECK_THROWS_AS(e + f, std::invalid_argument);
        CHECK((e + Scalar(Rat(2, 3))).rat() == Rat(1));
        CHECK(Scalar(0.1).eq(Scalar(0.1 + 1e-12)));
        CHECK(!Scalar(Rat(1, 3)).eq(Scalar(Rat(1, 3) + Rat(1, 1000000000))));
    }
}

TEST_SUITE("norm_eval") {
    TEST_CASE("euclidean examples") {
        NormedSpace e2 = NormedSpace::euclidean(2);
        CHECK(e2.norm({3.0, 4.0}) == doctest::Approx(5.0));
        CHECK(e2.norm({0.0, 0.0}) == 0.0);
        std::vector<Scalar> x{Scalar(3.0), Scalar(4.0)};
        CHECK(norm_eval(e2, x).value() == doctest::Approx(5.0));
        std::vector<Scalar> bad{Scalar(Rat(3)), Scalar(4.0)};
        CHECK_THROWS_AS(norm_eval(e2, bad), std::invalid_argument);
    }

    TEST_CASE("graph norm on the 3-path: ||e0+e1|| = 4/3") {
        NormedSpace g = NormedSpace::graph_norm(path3_metric());
        CHECK(g.norm_exact({Rat(1), Rat(1), Rat(0)}) == Rat(4, 3));
        CHECK(g.norm_exact({Rat(0), Rat(0), Rat(0)}) == Rat(0));
        CHECK(g.norm_exact({Rat(1), Rat(0), Rat(1)}) == Rat(6, 5));
        CHECK(g.norm_exact({Rat(1), Rat(-1), Rat(0)}) == Rat(5, 4));
        std::vector<Scalar> x{Scalar(Rat(1)), Scalar(Rat(1)), Scalar(Rat(0))};
        CHECK(norm_eval(g, x).rat() == Rat(4, 3));
    }

    TEST_CASE("norm axioms on random pairs, per kind") {
        Rng rng(99);
        NormedSpace spaces[] = {NormedSpace::euclidean(3), linf2(), NormedSpace::graph_norm(path3_metric())};
        for (const auto& sp : spaces) {
            for (int i = 0; i < 10000; ++i) {
                VecD a(sp.dim()), b(sp.dim());
                for (auto& v : a) v = rng.uniform(-2, 2);
                for (auto& v : b) v = rng.uniform(-2, 2);
                double na = sp.norm(a), nb = sp.norm(b), nab = sp.norm(a + b);
                CHECK(nab <= na + nb + 1e-9);
                double t = rng.uniform(-3, 3);
                CHECK(sp.norm(t * a) == doctest::Approx(std::fabs(t) * na).epsilon(1e-9));
            }
        }
    }

    TEST_CASE("exact homogeneity and triangle inequality on rational vectors") {
        NormedSpace g = NormedSpace::graph_norm(path3_metric());
        Rng rng(7);
        for (int i = 0; i < 500; ++i) {
            VecQ a(3), b(3);
            for (auto& v : a) v = Rat(static_cast<long long>(rng.below(21)) - 10, 1 + rng.below(6));
            for (auto& v : b) v = Rat(static_cast<long long>(rng.below(21)) - 10, 1 + rng.below(6));
            VecQ ab(3);
            for (int j = 0; j < 3; ++j) ab[j] = a[j] + b[j];
            CHECK(g.norm_exact(ab) <= g.norm_exact(a) + g.norm_exact(b));
            Rat t(static_cast<long long>(rng.below(9)) - 4, 1 + rng.below(4));
            VecQ ta(3);
            for (int j = 0; j < 3; ++j) ta[j] = t * a[j];
            CHECK(g.norm_exact(ta) == t.abs() * g.norm_exact(a));
        }
    }
}

TEST_SUITE("dual_norm") {
    TEST_CASE("examples") {
        NormedSpace e2 = NormedSpace::euclidean(2);
        CHECK(e2.dual_norm({0.0, 1.0}) == doctest::Approx(1.0));
        NormedSpace li = linf2();
        CHECK(li.dual_norm_exact({Rat(1), Rat(1)}) == Rat(2));
        NormedSpace g = NormedSpace::graph_norm(path3_metric());
        CHECK(g.dual_norm_exact({Rat(1), Rat(0), Rat(0)}) == Rat(1));
        NormedSpace pim = NormedSpace::pimple(NormedSpace::euclidean(2),
                                              {Spike::at({1.0, 0.0}, 0.8, 0)});
        CHECK_THROWS(pim.dual_norm_exact({Rat(1), Rat(0)}));
    }

    TEST_CASE("support functional attains the norm with dual norm one") {
        Rng rng(3);
        NormedSpace spaces[] = {linf2(), NormedSpace::graph_norm(path3_metric())};
        for (const auto& sp : spaces) {
            for (int i = 0; i < 200; ++i) {
                VecQ x(sp.dim());
                bool zero = true;
                for (auto& v : x) {
                    v = Rat(static_cast<long long>(rng.below(11)) - 5, 1 + rng.below(4));
                    if (!v.is_zero()) zero = false;
                }
                if (zero) continue;
                VecQ phi = sp.support_functional_exact(x);
                CHECK(dot(phi, x) == sp.norm_exact(x));
                CHECK(sp.dual_norm_exact(phi) == Rat(1));
            }
        }
    }

    TEST_CASE("support functional tie-break: lowest facet index") {
        NormedSpace li = linf2();
        VecQ phi = li.support_functional_exact({Rat(1), Rat(1)});
        CHECK(phi == VecQ{Rat(1), Rat(0)});
        NormedSpace e2 = NormedSpace::euclidean(2);
        VecD s = e2.support_functional({0.0, 2.0});
        CHECK(s[0] == doctest::Approx(0.0));
        CHECK(s[1] == doctest::Approx(1.0));
    }

    TEST_CASE("graph support functional example: e0* + e1*/3") {
        NormedSpace g = NormedSpace::graph_norm(path3_metric());
        VecQ phi = g.support_functional_exact({Rat(1), Rat(1), Rat(0)});
        CHECK(phi == VecQ{Rat(1), Rat(1, 3), Rat(0)});
        CHECK(dot(phi, VecQ{Rat(1), Rat(1), Rat(0)}) == Rat(4, 3));
    }
}

TEST_SUITE("matrix_group") {
    TEST_CASE("closure examples") {
        MatQ minus = MatQ::identity(2);
        for (auto& v : minus.a) v = -v;
        auto g1 = MatrixGroupQ::closure({minus}, 10);
        CHECK(g1.order() == 2);

        MatQ swap(2, 2);
        swap.at(0, 1) = Rat(1);
        swap.at(1, 0) = Rat(1);
        auto g2 = MatrixGroupQ::closure({minus, swap}, 10);
        CHECK(g2.order() == 4);

        double c = std::cos(2.0 * 3.14159265358979323846 / 3.0);
        double s = std::sin(2.0 * 3.14159265358979323846 / 3.0);
        MatD rot(2, 2);
        rot.at(0, 0) = c; rot.at(0, 1) = -s; rot.at(1, 0) = s; rot.at(1, 1) = c;
        auto g3 = MatrixGroupD::closure({rot}, 10);
        CHECK(g3.order() == 3);
    }

    TEST_CASE("closure cap throws") {
        double c = std::cos(0.1), s = std::sin(0.1);
        MatD rot(2, 2);
        rot.at(0, 0) = c; rot.at(0, 1) = -s; rot.at(1, 0) = s; rot.at(1, 1) = c;
        CHECK_THROWS_AS(MatrixGroupD::closure({rot}, 10), std::runtime_error);
    }

    TEST_CASE("composition table indexes elements and inverses exist") {
        MatQ minus = MatQ::identity(2);
        for (auto& v : minus.a) v = -v;
        MatQ swap(2, 2);
        swap.at(0, 1) = Rat(1);
        swap.at(1, 0) = Rat(1);
        auto g = MatrixGroupQ::closure({minus, swap}, 16);
        for (size_t i = 0; i < g.order(); ++i) {
            CHECK(g.inverse_index(static_cast<int>(i)) >= 0);
            for (size_t j = 0; j < g.order(); ++j) {
                int k = g.table(static_cast<int>(i), static_cast<int>(j));
                CHECK(k >= 0);
                CHECK(g.equal(g.element(i) * g.element(j), g.element(k)));
            }
        }
    }

    TEST_CASE("symmetric_required flag") {
        MatQ swap(2, 2);
        swap.at(0, 1) = Rat(1);
        swap.at(1, 0) = Rat(1);
        CHECK_THROWS_AS(MatrixGroupQ::closure({swap}, 10, kDefaultTolerance, true), std::invalid_argument);
    }

    TEST_CASE("isometry flag verification on a sample") {
        NormedSpace g = NormedSpace::graph_norm(path3_metric());
        // signed reversal of the path is an isometry; a transposition of
        // adjacent-only vertices is not
        MatQ rev(3, 3);
        rev.at(2, 0) = Rat(1); rev.at(1, 1) = Rat(1); rev.at(0, 2) = Rat(1);
        MatQ bad(3, 3);
        bad.at(1, 0) = Rat(1); bad.at(0, 1) = Rat(1); bad.at(2, 2) = Rat(1);
        Rng rng(123);
        std::vector<VecD> sample;
        for (int i = 0; i < 100; ++i) sample.push_back(rng.sphere(3));
        auto good_group = MatrixGroupQ::closure({rev}, 4);
        CHECK(verify_isometry_group(g, good_group, sample));
        auto bad_group = MatrixGroupQ::closure({bad}, 4);
        CHECK(!verify_isometry_group(g, bad_group, sample));
    }
}

TEST_SUITE("space validation") {
    TEST_CASE("polyhedral rejects asymmetric or rank-deficient facets") {
        CHECK_THROWS_AS(NormedSpace::polyhedral(2, {{Rat(1), Rat(0)}, {Rat(0), Rat(1)}}),
                        std::invalid_argument);
        CHECK_THROWS_AS(NormedSpace::polyhedral(2, {{Rat(1), Rat(0)}, {Rat(-1), Rat(0)}}),
                        std::invalid_argument);
    }

    TEST_CASE("pimple validates spike data") {
        NormedSpace e2 = NormedSpace::euclidean(2);
        CHECK_THROWS_AS(NormedSpace::pimple(e2, {Spike::at({2.0, 0.0}, 0.8, 0)}), std::invalid_argument);
        CHECK_THROWS_AS(NormedSpace::pimple(e2, {Spike::at({1.0, 0.0}, 0.4, 0)}), std::invalid_argument);
    }

    TEST_CASE("metric validation") {
        CHECK_THROWS_AS(NormedSpace::graph_norm({{0, 0}, {0, 0}}), std::invalid_argument);
        CHECK_THROWS_AS(NormedSpace::graph_norm({{0, 1}, {2, 0}}), std::invalid_argument);
        CHECK_THROWS_AS(NormedSpace::graph_norm({{0, 1, 5}, {1, 0, 1}, {5, 1, 0}}), std::invalid_argument);
    }
}
