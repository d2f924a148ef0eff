#include <doctest.h>

#include <cmath>

#include "isodisplay/free_space.hpp"
#include "isodisplay/rng.hpp"

using namespace isodisplay;
using namespace isodisplay::freespace;

namespace {

FiniteMetricSpace equilateral3() {
    FiniteMetricSpace m;
    m.points = {"a", "b", "c"};
    m.d = MatD(3, 3);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) m.d.at(i, j) = i == j ? 0.0 : 1.0;
    return m;
}

FiniteMetricSpace path3() {
    // d(a,b) = d(b,c) = 1, d(a,c) = 2
    FiniteMetricSpace m;
    m.points = {"a", "b", "c"};
    m.d = MatD(3, 3);
    m.d.at(0, 1) = m.d.at(1, 0) = 1.0;
    m.d.at(1, 2) = m.d.at(2, 1) = 1.0;
    m.d.at(0, 2) = m.d.at(2, 0) = 2.0;
    return m;
}

FiniteMetricSpace random_metric(int n, Rng& rng) {
    // entries in [1,2] always satisfy the triangle inequality
    FiniteMetricSpace m;
    m.d = MatD(n, n);
    for (int i = 0; i < n; ++i) {
        m.points.push_back("p" + std::to_string(i));
        for (int j = i + 1; j < n; ++j) m.d.at(i, j) = m.d.at(j, i) = rng.uniform(1.0, 2.0);
    }
    return m;
}

Molecule random_molecule(int n, Rng& rng) {
    Molecule mol;
    mol.mass.assign(n, 0.0);
    double total = 0.0;
    for (int i = 0; i < n; ++i) { mol.mass[i] = rng.gauss(); total += mol.mass[i]; }
    for (int i = 0; i < n; ++i) mol.mass[i] -= total / n;
    return mol;
}

}  // namespace

TEST_SUITE("metric transforms") {
    TEST_CASE("bounded transform formula") {
        FiniteMetricSpace m = path3();
        FiniteMetricSpace b = transform_bounded(m);
        CHECK(b.d.at(0, 2) == doctest::Approx(2.0 / 3.0));
        CHECK(b.d.at(0, 1) == doctest::Approx(0.5));
        CHECK(b.diameter() < 1.0);
        FiniteMetricSpace one;
        one.points = {"x", "y"};
        one.d = MatD(2, 2);
        one.d.at(0, 1) = one.d.at(1, 0) = 3.0;
        CHECK(transform_bounded(one).d.at(0, 1) == doctest::Approx(0.75));
    }

    TEST_CASE("concave transform formula and margins") {
        FiniteMetricSpace m = path3();
        FiniteMetricSpace b = transform_bounded(m);
        ConcavityReport rep;
        FiniteMetricSpace c = transform_concave(b, &rep);
        CHECK(c.d.at(0, 1) == doctest::Approx(0.7071067812).epsilon(1e-9));
        CHECK(c.d.at(0, 2) == doctest::Approx(0.8164965809).epsilon(1e-9));
        CHECK(rep.concave);
        CHECK(rep.min_margin == doctest::Approx(2 * 0.7071067812 - 0.8164965809).epsilon(1e-6));
        // diameter >= 1 is rejected
        CHECK_THROWS_AS(transform_concave(m), std::invalid_argument);
    }

    TEST_CASE("transforms preserve the isometry group exactly") {
        Rng rng(808);
        for (int trial = 0; trial < 10; ++trial) {
            int n = 3 + static_cast<int>(rng.below(5));  // up to 7
            FiniteMetricSpace m = random_metric(n, rng);
            auto g1 = metric_isometry_group(m);
            auto g2 = metric_isometry_group(transform_bounded(m));
            auto g3 = metric_isometry_group(transform_concave(transform_bounded(m)));
            CHECK(g1.same_elements(g2));
            CHECK(g2.same_elements(g3));
        }
    }

    TEST_CASE("no surjective dilation with lambda != 1") {
        FiniteMetricSpace m = path3();
        CHECK(admits_dilation(m, 1.0));
        CHECK(!admits_dilation(m, 0.5));
        CHECK(!admits_dilation(m, 2.0));
        CHECK(!admits_dilation(m, 1.0 + 1e-6));
    }
}

TEST_SUITE("metric isometries") {
    TEST_CASE("examples") {
        CHECK(metric_isometry_group(equilateral3()).order() == 6);
        CHECK(metric_isometry_group(path3()).order() == 2);
        Rng rng(5150);
        FiniteMetricSpace m = random_metric(5, rng);
        CHECK(metric_isometry_group(m).order() == 1);
    }

    TEST_CASE("cap is enforced") {
        Rng rng(2);
        FiniteMetricSpace m = random_metric(5, rng);
        CHECK_THROWS_AS(metric_isometry_group(m, 4), std::runtime_error);
    }
}

TEST_SUITE("ae_norm") {
    TEST_CASE("atoms evaluate to their distance") {
        FiniteMetricSpace m = path3();
        CHECK(ae_norm_primal(m, Molecule::atom(3, 0, 1)).value == doctest::Approx(1.0));
        CHECK(ae_norm_primal(m, Molecule::atom(3, 0, 2)).value == doctest::Approx(2.0));
        CHECK(ae_norm_dual(m, Molecule::atom(3, 0, 2)).value == doctest::Approx(2.0));
    }

    TEST_CASE("3-point example: 1a + 1b - 2c routes for 3") {
        FiniteMetricSpace m = path3();
        Molecule mol;
        mol.mass = {1.0, 1.0, -2.0};
        CHECK(ae_norm_primal(m, mol).value == doctest::Approx(3.0));
        CHECK(ae_norm_dual(m, mol).value == doctest::Approx(3.0));
        CHECK(ae_norm_exhaustive(m, mol) == doctest::Approx(3.0));
    }

    TEST_CASE("zero molecule") {
        FiniteMetricSpace m = path3();
        Molecule zero;
        zero.mass = {0.0, 0.0, 0.0};
        CHECK(ae_norm_primal(m, zero).value == 0.0);
        CHECK(ae_norm_dual(m, zero).value == doctest::Approx(0.0));
    }

    TEST_CASE("non-sum-zero input is rejected") {
        FiniteMetricSpace m = path3();
        Molecule bad;
        bad.mass = {1.0, 0.0, 0.0};
        CHECK_THROWS_AS(ae_norm_primal(m, bad), std::invalid_argument);
    }

    TEST_CASE("strong duality and the exhaustive oracle on random molecules") {
        Rng rng(31337);
        for (int trial = 0; trial < 60; ++trial) {
            int n = 3 + static_cast<int>(rng.below(6));  // up to 8 points
            FiniteMetricSpace m = random_metric(n, rng);
            Molecule mol = random_molecule(n, rng);
            double primal = ae_norm_primal(m, mol).value;
            double dual = ae_norm_dual(m, mol).value;
            double oracle = ae_norm_exhaustive(m, mol);
            CHECK(std::fabs(primal - dual) <= 1e-9 * (1.0 + std::fabs(primal)));
            CHECK(std::fabs(primal - oracle) <= 1e-9 * (1.0 + std::fabs(primal)));
        }
    }

    TEST_CASE("decomposition certifies the primal value") {
        Rng rng(4242);
        FiniteMetricSpace m = random_metric(6, rng);
        Molecule mol = random_molecule(6, rng);
        PrimalResult res = ae_norm_primal(m, mol);
        double recost = 0.0;
        VecD mass(6, 0.0);
        for (const auto& a : res.decomposition) {
            recost += std::fabs(a.coefficient) * m.d.at(a.x, a.y);
            mass[a.x] += a.coefficient;
            mass[a.y] -= a.coefficient;
        }
        CHECK(recost == doctest::Approx(res.value));
        for (int i = 0; i < 6; ++i) CHECK(mass[i] == doctest::Approx(mol.mass[i]).epsilon(1e-9));
    }

    TEST_CASE("triangle inequality via decomposition concatenation") {
        Rng rng(515);
        FiniteMetricSpace m = random_metric(5, rng);
        for (int i = 0; i < 40; ++i) {
            Molecule a = random_molecule(5, rng), b = random_molecule(5, rng);
            Molecule ab;
            ab.mass.resize(5);
            for (int j = 0; j < 5; ++j) ab.mass[j] = a.mass[j] + b.mass[j];
            CHECK(ae_norm_primal(m, ab).value <=
                  ae_norm_primal(m, a).value + ae_norm_primal(m, b).value + 1e-9);
        }
    }
}

TEST_SUITE("extreme atoms") {
    TEST_CASE("all atoms extreme after the concave transform of the equilateral space") {
        FiniteMetricSpace c = transform_concave(transform_bounded(equilateral3()));
        ExtremeAtomReport rep = free_extreme_atoms(c);
        CHECK(rep.concave_verified);
        CHECK(rep.atoms.size() == 6);
        CHECK(rep.all_extreme);
    }

    TEST_CASE("two-point space: the whole sphere") {
        FiniteMetricSpace m;
        m.points = {"x", "y"};
        m.d = MatD(2, 2);
        m.d.at(0, 1) = m.d.at(1, 0) = 0.5;
        ExtremeAtomReport rep = free_extreme_atoms(m);
        CHECK(rep.atoms.size() == 2);
        CHECK(rep.all_extreme);
    }

    TEST_CASE("colinear metric without transforms loses an extreme atom") {
        ExtremeAtomReport rep = free_extreme_atoms(path3());
        CHECK(!rep.concave_verified);  // 1 + 1 = 2 with no slack
        bool long_atom_extreme = true;
        for (size_t i = 0; i < rep.atoms.size(); ++i)
            if (rep.atoms[i].x == 0 && rep.atoms[i].y == 2) long_atom_extreme = rep.extreme[i];
        CHECK(!long_atom_extreme);  // m_{a,c}/2 is the midpoint of routed atoms
        CHECK(!rep.all_extreme);
    }
}

TEST_SUITE("free isometries") {
    TEST_CASE("equilateral 3 points: order 12, hexagonal ball") {
        FiniteMetricSpace c = transform_concave(transform_bounded(equilateral3()));
        FreeIsometryReport rep = ae_isometry_group(c);
        CHECK(rep.metric_isometries == 6);
        CHECK(rep.group.order() == 12);
        CHECK(rep.order_matches);
        CHECK(rep.no_extra_isometries);
    }

    TEST_CASE("rigid 4-point metric: only +-Id") {
        Rng rng(99991);
        FiniteMetricSpace m = random_metric(4, rng);
        FiniteMetricSpace c = transform_concave(transform_bounded(m));
        FreeIsometryReport rep = ae_isometry_group(c);
        CHECK(rep.metric_isometries == 1);
        CHECK(rep.group.order() == 2);
        CHECK(rep.no_extra_isometries);
    }

    TEST_CASE("group law on atoms: T composes like (sigma, g)") {
        FiniteMetricSpace c = transform_concave(transform_bounded(equilateral3()));
        FreeIsometryReport rep = ae_isometry_group(c);
        // the matrix group is closed and its elements are signed permutations
        for (size_t i = 0; i < rep.group.order(); ++i)
            for (size_t j = 0; j < rep.group.order(); ++j) CHECK(rep.group.table(i, j) >= 0);
    }

    TEST_CASE("fewer than 3 points is rejected") {
        FiniteMetricSpace m;
        m.points = {"x", "y"};
        m.d = MatD(2, 2);
        m.d.at(0, 1) = m.d.at(1, 0) = 0.5;
        CHECK_THROWS_AS(ae_isometry_group(m), std::invalid_argument);
    }

    TEST_CASE("order law 2x|Isom| on random concave spaces") {
        Rng rng(777);
        for (int trial = 0; trial < 6; ++trial) {
            int n = 3 + static_cast<int>(rng.below(4));
            FiniteMetricSpace c = transform_concave(transform_bounded(random_metric(n, rng)));
            FreeIsometryReport rep = ae_isometry_group(c, 20, 1000 + trial);
            CHECK(rep.order_matches);
            CHECK(rep.no_extra_isometries);
        }
    }
}
