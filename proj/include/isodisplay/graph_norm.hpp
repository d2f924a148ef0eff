#pragma once

#include <string>
#include <vector>

#include "isodisplay/graphs.hpp"
#include "isodisplay/matrix_group.hpp"
#include "isodisplay/normed_space.hpp"

namespace isodisplay::graphnorm {

// A signed vertex map e_n -> eps_n e_{phi(n)}; the norm forces eps uniform,
// which is what the isometry search certifies.
struct SignedPermutation {
    graphs::Perm phi;
    std::vector<int> signs;  // per-coordinate, +1/-1

    MatQ matrix() const;
};

// The polyhedral graph norm over a connected graph's vertex set, with exact
// rational evaluation throughout.
class GammaSpace {
public:
    explicit GammaSpace(const graphs::Graph& g);
    explicit GammaSpace(std::vector<std::vector<int>> metric);

    int dim() const { return space_.dim(); }
    const NormedSpace& space() const { return space_; }
    const std::vector<std::vector<int>>& metric() const { return space_.metric(); }
    const std::vector<VecQ>& facets() const { return space_.facets(); }

    Rat norm(const VecQ& a) const { return space_.norm_exact(a); }

private:
    NormedSpace space_;
};

struct ExtremePointReport {
    std::vector<VecQ> vertices;       // all ball vertices, lex sorted
    bool only_signed_units = false;   // vertices == {±e_p}
    std::vector<VecQ> extras;         // vertices that are not ±e_p
};

// Exact vertex enumeration of the unit ball, with the signed-unit-vector
// comparison the downstream isometry search depends on.
ExtremePointReport extreme_points(const GammaSpace& space, int dim_cap = 8);

struct IsometryGroupReport {
    MatrixGroupQ group;                 // all signed vertex maps preserving the facet set
    std::vector<SignedPermutation> maps;
    bool extremes_verified = false;     // extreme points were exactly {±e_p}
    bool complete = false;              // search certified complete (requires extremes_verified)
    std::string verdict;                // "VERIFIED" or "UNVERIFIED"
    size_t graph_aut_order = 0;
    bool matches_signed_automorphisms = false;  // group == {±1} x Aut(graph)
};

// Brute force over signed vertex maps with exact facet-set certification.
// When the extreme-point verification fails the group is still exactly the
// set of signed-map isometries, but completeness of the search over all
// linear isometries is reported UNVERIFIED. A precomputed extreme-point
// report can be passed to avoid re-running the enumeration.
IsometryGroupReport gamma_isometry_group(const GammaSpace& space, int extreme_dim_cap = 8,
                                         size_t order_cap = 1u << 20,
                                         const ExtremePointReport* precomputed = nullptr);

struct DisplayOnC0Report {
    GammaSpace space;
    graphs::GadgetReport gadget;
    size_t isometry_order = 0;          // 2 * |restriction|
    bool isomorphic_to_pm1_times_h = false;
    bool lifts_certified = false;       // every lifted map preserves the metric
    std::string note;
};

// The finite shadow of the c0 display pipeline: gadget graph -> path metric
// -> graph norm; reports the {±1} x h comparison for the certified signed
// lifts of the gadget restriction.
DisplayOnC0Report display_on_c0(const graphs::PermGroup& h, std::vector<int> depths);

}  // namespace isodisplay::graphnorm
