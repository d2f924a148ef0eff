#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "isodisplay/graphs.hpp"
#include "isodisplay/matrix_group.hpp"
#include "isodisplay/normed_space.hpp"

namespace isodisplay::pimple {

// ---- norm evaluation --------------------------------------------------

// min over t of ||y - t*x0|| + lambda*|t|; closed form on euclidean bases,
// bracketed ternary search otherwise.
double single_pimple_norm(const NormedSpace& base, const VecD& x0, double lambda, const VecD& y);

// base(y) minus the single-spike norm, computed in cancellation-free form;
// resolves spike depths far below the representable gap under 1.0.
// Euclidean bases only.
double single_pimple_drop(const VecD& x0, double depth, const VecD& y);

struct MultiNormResult {
    double value = 0.0;
    VecD coeffs;     // per spike
    VecD residual;   // y - sum t_j v_j
    int cycles = 0;
    bool converged = false;
};

// min over t of ||y - sum_j t_j v_j|| + sum_j lambda_j |t_j| by cyclic exact
// line search; throws after the cycle cap without convergence.
MultiNormResult multi_pimple_norm(const NormedSpace& base, const std::vector<Spike>& spikes,
                                  const VecD& y, int max_cycles = 50000, double step_tol = 1e-14);

// Dual certificate from the minimizer's residual direction: the returned
// pair brackets the true gauge, upper from the decomposition and lower from
// the support-function value of the subgradient functional.
struct GaugeCertificate {
    bool available = false;  // residual too small to normalize
    double lower = 0.0;
    double upper = 0.0;
};
GaugeCertificate certify_pimple_norm(const NormedSpace& pimple_space, const VecD& y);

// ---- schedules ----------------------------------------------------------

struct PimpleSchedule {
    double m = 0.5;        // global norm-equivalence constant
    double epsilon = 0.5;  // slack in the separation bounds
    VecD alpha;            // stabilizer-orbit separation per index
    VecD dist;             // distance of x_n to the span of its predecessors (dist[0] = 1)
    VecD mu;               // coefficient sequence, mu[0] = 1
    VecD c;                // orbit separation per level
    VecD eps_k;            // strict-convexity radius per level
    VecD delta;            // per level, decreasing
    VecD b;                // segment-length bound per level (the achieved maximal length)
    VecD depth;            // selected 1 - lambda_k per level (authoritative)
    VecD lambda;           // 1 - depth, informational (collapses to 1.0 at tiny depths)
};

// The mu-schedule: alpha_n from exhaustive stabilizer orbits, d_n by
// Gram-Schmidt distance, mu_{k+1} the largest power of 1/2 meeting the
// separation inequalities with a 1/2 safety factor.
PimpleSchedule distinguished_mu(const std::vector<VecD>& xs, const MatrixGroupD& G, double epsilon,
                                const NormedSpace& base, double tol = kDefaultTolerance);

struct YSequence {
    std::vector<VecD> ys;
    double min_margin_same = 0.0;   // slack in the n = m bound
    double min_margin_cross = 0.0;  // slack in the n > m bound
};

// Normalized partial sums y_n = sum mu_k x_k / ||.||, with the two
// separation bounds checked exhaustively over G; throws on a violation.
YSequence build_y_sequence(const std::vector<VecD>& xs, const PimpleSchedule& sched,
                           const MatrixGroupD& G, const NormedSpace& base);

// ---- lambda selection ---------------------------------------------------

struct LevelOrbit {
    VecD rep;                    // y_k
    std::vector<VecD> points;    // orbit of y_k, deduplicated up to sign
    double c = 0.0;              // separation constant for this level
};

// Orbits and separation constants per level. Point equality is decided
// against the schedule's guaranteed separation floor (1-eps) mu_k d_k, not
// a fixed tolerance: deep levels sit closer together than any fixed cutoff.
std::vector<LevelOrbit> level_orbits(const std::vector<VecD>& ys, const MatrixGroupD& G,
                                     const NormedSpace& base, const PimpleSchedule& sched);

struct LambdaReport {
    bool ok = false;
    std::string failing_check;  // smallest failing check when !ok
    VecD depth;                 // selected 1 - lambda_k
    VecD lambda;                // 1 - depth, informational
};

// Per-level upward search on lambda until the sampled property checks pass:
// norm drops only delta-close to spikes, segment-length bounds, the
// lambda^-1 - 1 <= delta/3 margin and the min-decomposition identity.
LambdaReport select_lambda(const NormedSpace& base, const std::vector<LevelOrbit>& levels,
                           PimpleSchedule& sched, int samples = 2000, uint64_t seed = 12345);

struct PropertyReport {
    bool pass = false;
    int checked = 0;
    double max_min_decomposition_gap = 0.0;  // (i)
    double max_spike_distance = 0.0;         // (ii) worst distance to nearest spike on norm drop
    double min_cross_separation = 0.0;       // (iii)
    std::vector<std::string> failures;
};

PropertyReport check_pimple_properties(const NormedSpace& space, const PimpleSchedule& sched,
                                       int N, uint64_t seed);

// ---- the display pipeline ----------------------------------------------

struct Tip {
    VecD point;  // lambda_k^{-1} g y_k
    int level = 0;
};

struct DisplayResult {
    NormedSpace space;            // the renormed (pimple) space
    MatrixGroupD group;           // the input group G
    std::vector<VecD> xs;         // pruned input sequence
    std::vector<VecD> ys;         // distinguished sequence
    std::vector<LevelOrbit> levels;
    PimpleSchedule schedule;
    std::vector<Tip> tips;        // E, the isolated extreme points
    LambdaReport lambda_report;
    PropertyReport properties;
};

// The renorming stage shared by the display pipeline and the spike-norm
// property checks: mu-schedule -> y-sequence -> orbits/separations ->
// lambda selection -> pimple space over the orbit spikes. Does not require
// the sequence to span.
struct PimpleStage {
    NormedSpace space;
    PimpleSchedule schedule;
    std::vector<LevelOrbit> levels;
    std::vector<VecD> xs;
    std::vector<VecD> ys;
    LambdaReport lambda_report;
};
PimpleStage build_pimple_stage(const NormedSpace& base, const MatrixGroupD& G, std::vector<VecD> xs,
                               int samples = 2000, uint64_t seed = 12345,
                               double tol = kDefaultTolerance);

// Full pipeline: the stage above on a spanning sequence, E = the spike tips.
DisplayResult display_renorm(const NormedSpace& base, const MatrixGroupD& G, std::vector<VecD> xs,
                             int samples = 2000, uint64_t seed = 12345, double tol = kDefaultTolerance);

struct RecoveryReport {
    MatrixGroupD recovered;
    bool equals_input = false;
    int candidates = 0;            // level-preserving systems solved
    int nonmembers_rejected = 0;
    double min_rejection_deviation = 0.0;
    double max_member_error = 0.0;  // entrywise distance of accepted members to G
    std::vector<std::string> anomalies;
};

// Enumerates level-preserving bijections of E through a spanning subset,
// solves for the linear map, keeps maps preserving E, then certifies:
// members of G by matrix comparison, everything else by a sampled
// norm-deviation rejection at 10x tolerance.
RecoveryReport isometry_group_from_extremes(const DisplayResult& result, int sample_count = 500,
                                            uint64_t seed = 999, double tol = kDefaultTolerance);

// ---- group embeddings -----------------------------------------------

struct EmbeddingResult {
    MatrixGroupD group;                 // signed-permutation image
    std::vector<int> element_of;        // image index per h element index
    int dim = 0;                        // number of s-orbits on B x {0..r}
};

// Signed-permutation representation of h sending the central involution s
// to -Id: orbits of s on (moved set) x {0..r} carry the permutation part,
// order reversal the sign part. Requires h faithful on the moved set.
EmbeddingResult central_involution_embedding(const graphs::PermGroup& h, const graphs::Perm& s, int r = 0);

// Diagonal action on the l2-power of the base space: verifies the witness
// family separates G at gap alpha, then runs the display on the product
// with the concatenated witness point leading a spanning sequence.
DisplayResult power_display(const NormedSpace& base, const MatrixGroupD& G,
                            const std::vector<VecD>& witnesses, double alpha,
                            int samples = 2000, uint64_t seed = 12345);

}  // namespace isodisplay::pimple
