#include <doctest.h>

#include "isodisplay/normed_space.hpp"
#include "isodisplay/polytope.hpp"
#include "isodisplay/rng.hpp"

using namespace isodisplay;

namespace {

std::vector<VecQ> cross_polytope_facets(int n) {
    // l1 ball: all sign vectors
    std::vector<VecQ> fs;
    for (int mask = 0; mask < (1 << n); ++mask) {
        VecQ f(n);
        for (int j = 0; j < n; ++j) f[j] = (mask >> j & 1) ? Rat(1) : Rat(-1);
        fs.push_back(f);
    }
    return fs;
}

}  // namespace

TEST_SUITE("polytope") {
    TEST_CASE("cube vertices") {
        std::vector<VecQ> fs = {{Rat(1), Rat(0)}, {Rat(0), Rat(1)}, {Rat(-1), Rat(0)}, {Rat(0), Rat(-1)}};
        auto vs = enumerate_ball_vertices(fs, 2);
        CHECK(vs.size() == 4);
        CHECK(vs == enumerate_ball_vertices_bruteforce(fs, 2));
    }

    TEST_CASE("cross polytope, a degenerate vertex case") {
        for (int n : {2, 3, 4}) {
            auto fs = cross_polytope_facets(n);
            auto vs = enumerate_ball_vertices(fs, n);
            CHECK(vs.size() == static_cast<size_t>(2 * n));
            auto oracle = enumerate_ball_vertices_bruteforce(fs, n);
            CHECK(vs == oracle);
        }
    }

    TEST_CASE("random symmetric facet lists agree with the brute-force oracle") {
        Rng rng(2024);
        for (int trial = 0; trial < 12; ++trial) {
            int n = 2 + static_cast<int>(rng.below(2));  // dims 2-3
            std::vector<VecQ> fs;
            for (int i = 0; i < n; ++i) {
                VecQ e(n, Rat(0));
                e[i] = Rat(1);
                fs.push_back(e);
                fs.push_back(neg(e));
            }
            for (int extra = 0; extra < 4; ++extra) {
                VecQ f(n);
                for (auto& c : f) c = Rat(static_cast<long long>(rng.below(5)) - 2, 1 + rng.below(3));
                bool zero = true;
                for (auto& c : f) if (!c.is_zero()) zero = false;
                if (zero) continue;
                fs.push_back(f);
                fs.push_back(neg(f));
            }
            auto vs = enumerate_ball_vertices(fs, n);
            auto oracle = enumerate_ball_vertices_bruteforce(fs, n);
            CHECK(vs == oracle);
            // every vertex is on the unit sphere of the polyhedral norm
            NormedSpace sp = NormedSpace::polyhedral(n, fs);
            for (const auto& v : vs) CHECK(sp.norm_exact(v) == Rat(1));
        }
    }

    TEST_CASE("gamma ball of the 2-path against the oracle") {
        auto fs = gamma_facets({{0, 1}, {1, 0}});
        auto vs = enumerate_ball_vertices(fs, 2);
        auto oracle = enumerate_ball_vertices_bruteforce(fs, 2);
        CHECK(vs == oracle);
        // the finite-dimensional gamma ball picks up plateau vertices beyond
        // the signed units: for the single edge they are (3/4,3/4) and
        // (4/5,-4/5) up to signs
        CHECK(vs.size() == 8);
        bool has_plateau = false;
        for (const auto& v : vs)
            if (v == VecQ{Rat(3, 4), Rat(3, 4)}) has_plateau = true;
        CHECK(has_plateau);
    }
}
