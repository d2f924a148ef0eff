#pragma once

#include <memory>
#include <stdexcept>
#include <vector>

#include "isodisplay/linalg.hpp"
#include "isodisplay/scalar.hpp"

namespace isodisplay {

enum class SpaceKind { Euclidean, Polyhedral, GraphNorm, Pimple };

// One spike of a pimple renorming: a base-norm-one direction, the gauge
// parameter lambda in (1/2,1), and the schedule level it belongs to.
// lambda is stored as its gap to one: the schedules this project builds
// push lambda so close to 1 that the gap is the only representation with
// usable precision. depth must stay in (0, 1/2).
struct Spike {
    VecD dir;
    double depth = 0.0;  // 1 - lambda
    int level = 0;

    double lambda() const { return 1.0 - depth; }
    static Spike at(VecD dir, double lambda, int level) {
        return Spike{std::move(dir), 1.0 - lambda, level};
    }
};

// A finite-dimensional normed space: euclidean, polyhedral (facet
// functionals, exact), graph norm (path-metric driven facets, exact), or a
// pimple overlay on a base space (float). Immutable after construction.
class NormedSpace {
public:
    static NormedSpace euclidean(int dim);

    // `facets` must be symmetric under negation and have full rank (which,
    // together with symmetry, makes the ball bounded and the norm a norm).
    static NormedSpace polyhedral(int dim, std::vector<VecQ> facets);

    // `metric` is an all-pairs shortest-path matrix of a connected graph.
    static NormedSpace graph_norm(std::vector<std::vector<int>> metric);

    static NormedSpace pimple(NormedSpace base, std::vector<Spike> spikes, double tol = kDefaultTolerance);

    int dim() const { return dim_; }
    SpaceKind kind() const { return kind_; }

    const std::vector<VecQ>& facets() const;                  // Polyhedral / GraphNorm
    const std::vector<std::vector<int>>& metric() const;      // GraphNorm
    const NormedSpace& base() const;                          // Pimple
    const std::vector<Spike>& spikes() const;                 // Pimple

    // Float-path norm; defined for every kind.
    double norm(const VecD& x) const;

    // Exact norm; Polyhedral and GraphNorm only.
    Rat norm_exact(const VecQ& x) const;

    // sup{ phi(x) : ||x|| <= 1 }. Exact for Polyhedral/GraphNorm (max over
    // enumerated ball vertices), closed form for Euclidean and Pimple.
    double dual_norm(const VecD& phi) const;
    Rat dual_norm_exact(const VecQ& phi, int vertex_cap = 8) const;

    // A functional with dual norm one attaining phi(x) = ||x||; ties broken
    // by lowest facet index on exact kinds.
    VecD support_functional(const VecD& x) const;
    VecQ support_functional_exact(const VecQ& x) const;

    // Exact ball vertex enumeration (Polyhedral / GraphNorm, dim <= cap).
    std::vector<VecQ> ball_vertices(int dim_cap = 8) const;

    bool exact_mode() const { return kind_ == SpaceKind::Polyhedral || kind_ == SpaceKind::GraphNorm; }

private:
    NormedSpace() = default;

    int dim_ = 0;
    SpaceKind kind_ = SpaceKind::Euclidean;
    std::vector<VecQ> facets_;
    std::vector<std::vector<int>> metric_;
    std::shared_ptr<NormedSpace> base_;
    std::vector<Spike> spikes_;
};

// Norm evaluation on tagged scalars: exact vectors on exact-mode
// spaces, float vectors on float-mode spaces; anything else is a mode mix.
Scalar norm_eval(const NormedSpace& space, const std::vector<Scalar>& x);
Scalar dual_norm_eval(const NormedSpace& space, const std::vector<Scalar>& phi);

// The facet family of the graph norm for a path metric: e_n*,
// e_n* + e_m*/(1+2d(n,m)) and e_n* - e_m*/(2+2d(n,m)) over ordered pairs,
// followed by all negations.
std::vector<VecQ> gamma_facets(const std::vector<std::vector<int>>& metric);

// Multi-spike pimple norm; implemented with the pimple module's minimizer.
double pimple_norm_value(const NormedSpace& pimple_space, const VecD& y);

// |  ||gx|| - ||x|| | <= tol for every g in the group on the given sample
// (exact equality on exact kinds when sample entries are rational).
template <class Group>
bool verify_isometry_group(const NormedSpace& space, const Group& group,
                           const std::vector<VecD>& sample, double tol = kDefaultTolerance) {
    for (const auto& g : group.elements()) {
        MatD gd(g.rows, g.cols);
        for (int i = 0; i < g.rows; ++i)
            for (int j = 0; j < g.cols; ++j) {
                if constexpr (std::is_same_v<typename Group::Matrix, MatQ>) gd.at(i, j) = g.at(i, j).to_double();
                else gd.at(i, j) = g.at(i, j);
            }
        for (const auto& x : sample) {
            double a = space.norm(gd.apply(x));
            double b = space.norm(x);
            if (std::fabs(a - b) > tol) return false;
        }
    }
    return true;
}

}  // namespace isodisplay
