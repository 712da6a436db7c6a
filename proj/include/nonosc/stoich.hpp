#pragma once

#include "nonosc/network.hpp"
#include "nonosc/rat.hpp"

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace nonosc {

class SingularTransformError : public std::runtime_error {
public:
    SingularTransformError(const std::string& what, int rank_found)
        : std::runtime_error(what), rank(rank_found) {}
    int rank;
};

class BadCardinalityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct ConservationBasis {
    // Extreme nonnegative rays of ker gamma^T, descending lexicographic.
    std::vector<RatVector> rays;
    // Spanning set of ker gamma^T with rays preferred, completed from a
    // general kernel basis when the rays do not span.
    std::vector<RatVector> basis;

    int c() const { return static_cast<int>(basis.size()); }
    // Conservative network: every species appears in the support of some ray.
    bool conservative(int n_species) const;
};

ConservationBasis conservation_laws(const RatMatrix& gamma);

// One reaction-reactant pair (j, i): contributes rho * v w^T to the reduced
// Jacobian, rho = dR_j/dx_i >= 0 for admissible kinetics.
struct RankOneFactor {
    int reaction;
    int species;
    RatVector v;  // gamma_r column j
    RatVector w;  // independent-block row i of T^{-1}
    Rat wtv;
};

struct ReducedSystem {
    Network net;
    RatMatrix gamma;
    ConservationBasis cons;
    std::vector<int> independent;  // n - c species indices, order defines coordinates
    RatMatrix t;                   // conservation rows stacked over unit rows
    RatMatrix t_inv;
    RatMatrix gamma_r;             // (n - c) x n_r
    std::vector<std::pair<int, int>> pairs;
    std::vector<RankOneFactor> factors;

    int n() const { return static_cast<int>(gamma.rows()); }
    int c() const { return cons.c(); }
    int d() const { return n() - c(); }  // reduced dimension
};

// Builds the coordinate reduction. With an empty independent list the
// lexicographically first species subset making T nonsingular is chosen
// (greedy by index). Throws BadCardinalityError when the list size is not
// n - c, SingularTransformError (with the rank of T) when the choice fails.
ReducedSystem build_reduction(const Network& net, const std::vector<int>& independent = {});
ReducedSystem build_reduction(const Network& net,
                              const std::vector<std::string>& independent_names);

// The A_l = v_l w_l^T in pair order.
std::vector<RatMatrix> rank_one_matrices(const ReducedSystem& rs);

}  // namespace nonosc
