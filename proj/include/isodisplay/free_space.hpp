#pragma once

#include <string>
#include <vector>

#include "isodisplay/graphs.hpp"
#include "isodisplay/linalg.hpp"
#include "isodisplay/matrix_group.hpp"
#include "isodisplay/scalar.hpp"

namespace isodisplay::freespace {

struct ConcavityReport {
    bool concave = false;       // strict triangle inequality on all distinct triples
    double min_margin = 0.0;    // min over triples of d(x,y)+d(y,z)-d(x,z)
    double diameter = 0.0;
};

// A finite metric space with labeled points.
struct FiniteMetricSpace {
    std::vector<std::string> points;
    MatD d;

    int size() const { return d.rows; }
    void validate(double tol = kDefaultTolerance) const;
    ConcavityReport concavity(double tol = kDefaultTolerance) const;
    double diameter() const;
};

// d -> d/(1+d): bounded metric, diameter < 1, same isometries.
FiniteMetricSpace transform_bounded(const FiniteMetricSpace& m);

// d -> sqrt(d) for diameter < 1: concave metric, same isometries.
FiniteMetricSpace transform_concave(const FiniteMetricSpace& m, ConcavityReport* report = nullptr);

// All distance-preserving point permutations, by backtracking over distance
// profiles.
graphs::PermGroup metric_isometry_group(const FiniteMetricSpace& m, int cap = 10,
                                        double tol = kDefaultTolerance);

// No surjective lambda-dilation with lambda != 1 exists on a finite metric
// space of positive diameter (diameter scaling); reported as a predicate.
bool admits_dilation(const FiniteMetricSpace& m, double lambda, double tol = kDefaultTolerance);

// Finitely supported sum-zero mass vector, aligned with the point list.
struct Molecule {
    VecD mass;

    void validate(double tol = kDefaultTolerance) const;
    static Molecule atom(int n, int x, int y);  // 1_x - 1_y
};

struct Atom {
    int x = 0, y = 0;
    double coefficient = 0.0;
};

struct PrimalResult {
    double value = 0.0;
    std::vector<Atom> decomposition;  // m = sum coefficient * m_{x,y}
};

// Transportation problem between the positive and negative parts of the
// molecule with metric costs (network-simplex on the dense bipartite flow).
PrimalResult ae_norm_primal(const FiniteMetricSpace& m, const Molecule& mol);

struct DualResult {
    double value = 0.0;
    VecD witness;  // 1-Lipschitz potential, f(first point) = 0
};

// LP over potentials with pairwise Lipschitz constraints.
DualResult ae_norm_dual(const FiniteMetricSpace& m, const Molecule& mol);

// Complete enumeration of basic routings; exponential oracle for small
// supports.
double ae_norm_exhaustive(const FiniteMetricSpace& m, const Molecule& mol, int support_cap = 8);

struct ExtremeAtomReport {
    std::vector<Atom> atoms;          // normalized atoms m_{x,y}/d(x,y), ordered pairs x != y
    std::vector<bool> extreme;        // LP certificate per atom
    bool all_extreme = false;
    bool concave_verified = false;
};

// Certifies each normalized atom extreme in the free-space ball by convex
// hull membership against the remaining atoms.
ExtremeAtomReport free_extreme_atoms(const FiniteMetricSpace& m, double tol = kDefaultTolerance);

struct FreeIsometryReport {
    MatrixGroupD group;                // on molecule mass coordinates (size n), maps sigma * P_g
    size_t metric_isometries = 0;      // |Isom(Y,d)|
    bool order_matches = false;        // |group| == 2 * metric isometries
    bool no_extra_isometries = false;  // extreme-atom bijection enumeration found nothing else
    int extra_candidates = 0;
    std::string note;
};

// Candidates sigma * P_g certified on atoms and sampled molecules, then the
// completeness sweep: every linear map permuting the extreme-atom set is
// enumerated (Gram-pruned backtracking) and matched against the candidates.
FreeIsometryReport ae_isometry_group(const FiniteMetricSpace& m, int sample_molecules = 50,
                                     uint64_t seed = 4242, double tol = kDefaultTolerance);

}  // namespace isodisplay::freespace
