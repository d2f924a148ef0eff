#pragma once

#include <vector>

#include "isodisplay/linalg.hpp"

namespace isodisplay {

// Exact vertex enumeration of the bounded polytope { x : <f, x> <= 1 for
// every row f } by incremental double description. The constraint rows must
// be negation-symmetric and of full rank (centrally symmetric bounded body
// with 0 interior); this is what norm-ball facet lists look like.
//
// Vertices come back sorted lexicographically. Every returned point is
// certified: feasible for all constraints and with active rows of rank dim.
std::vector<VecQ> enumerate_ball_vertices(const std::vector<VecQ>& facets, int dim);

// Brute-force oracle: intersect every dim-subset of constraint hyperplanes,
// keep feasible solutions. Exponential; only for small instances in tests.
std::vector<VecQ> enumerate_ball_vertices_bruteforce(const std::vector<VecQ>& facets, int dim);

}  // namespace isodisplay
