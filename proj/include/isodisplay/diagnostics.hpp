#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "isodisplay/matrix_group.hpp"
#include "isodisplay/normed_space.hpp"

namespace isodisplay::diag {

// Sampler for groups too large to enumerate; the only continuous group the
// diagnostics need is the planar rotation group.
struct RotationSampler {
    int budget = 10000;
    uint64_t seed = 7;
};

struct TransitivityVerdict {
    double sup = 0.0;
    bool fails = false;   // sup < 1 - tolerance, with the witness below
    bool exact = false;   // exact max over a finite group vs sampled estimate
    VecD x, xstar;
};

// sup over the group of x*(Tx) for normalized x, x*; exact over finite
// groups, sampled for the rotation group.
TransitivityVerdict convex_transitivity_test(const NormedSpace& space, const MatrixGroupD& G,
                                             const VecD& x, const VecD& xstar,
                                             double tol = kDefaultTolerance);
TransitivityVerdict convex_transitivity_test(const NormedSpace& space, const RotationSampler& G,
                                             const VecD& x, const VecD& xstar,
                                             double tol = kDefaultTolerance);

struct NecessaryReport {
    bool has_minus_id = false;
    bool closed = true;                  // finite groups are closed; reported as such
    bool witness_found = false;          // condition (iii)
    VecD witness_x, witness_xstar;
    double witness_sup = 1.0;
    std::string note;
};

// The three necessary conditions for a proper isometry subgroup: -Id
// membership (exact), closedness (vacuous at finite order), and a
// normalized pair with sup_T x*(Tx) < 1 found by sphere sampling.
NecessaryReport necessary_conditions(const NormedSpace& space, const MatrixGroupD& G,
                                     int sample_budget = 200, uint64_t seed = 11,
                                     double tol = kDefaultTolerance);

// min displacement over the non-identity elements; positive means the point
// is distinguished.
double distinguished_point_check(const NormedSpace& space, const MatrixGroupD& G, const VecD& x);

struct LurModulus {
    VecD x;
    std::vector<std::pair<double, double>> table;  // (eps, delta estimate)
    uint64_t seed = 0;
};

// delta(eps) = 2 - sup{ ||x+y|| : y on the sphere, ||x-y|| >= eps },
// estimated by seeded random search plus shrinking local refinement.
LurModulus lur_modulus(const NormedSpace& space, const VecD& x, const VecD& eps_grid,
                       int budget = 4000, uint64_t seed = 17);

struct SeparationWitness {
    VecD x, xstar;
    double bound = 1.0;   // verified sup over G of x*(Tx)
    double beta = 0.0;    // 1 - bound
    bool verified = false;
};

// The separating-functional construction at a point with discrete orbit on
// an LUR space: perturb y inside the LUR radius, take the support
// functional at y, and verify the strict bound exhaustively over G.
SeparationWitness separation_witness(const NormedSpace& space, const MatrixGroupD& G, const VecD& y,
                                     std::optional<double> alpha = std::nullopt,
                                     uint64_t seed = 23, double tol = kDefaultTolerance);

// inf over sampled sphere points of the pointwise LUR modulus.
std::vector<std::pair<double, double>> uniform_convexity_modulus(const NormedSpace& space,
                                                                 const VecD& eps_grid,
                                                                 int budget = 2000, uint64_t seed = 29);

}  // namespace isodisplay::diag
