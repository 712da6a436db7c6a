#pragma once

#include "nonosc/rat.hpp"

#include <optional>
#include <stdexcept>
#include <vector>

namespace nonosc {

class SingularMatrixError : public std::runtime_error {
public:
    SingularMatrixError(const std::string& what, int rank_found)
        : std::runtime_error(what), rank(rank_found) {}
    int rank;
};

// Exact rank via fraction-free (Bareiss) elimination on an integerized copy.
int rank(const RatMatrix& m);

// Rational basis of the right null space {x : Mx = 0}. Basis vectors are
// scaled to coprime integer entries with the first nonzero entry positive.
// Empty when the kernel is trivial.
std::vector<RatVector> kernel_basis(const RatMatrix& m);

// Extreme rays of {x : Mx = 0, x >= 0} by the double description method,
// scaled to coprime integer entries and sorted in descending lexicographic
// order. Empty when the cone is {0}.
std::vector<RatVector> nonneg_kernel_rays(const RatMatrix& m);

// Exact inverse by Gauss-Jordan elimination. Throws SingularMatrixError
// (carrying the rank) when the matrix is singular or non-square.
RatMatrix invert(const RatMatrix& m);

// Decides d in cone{g_1,...,g_m} = {sum lambda_i g_i : lambda_i >= 0} by a
// rational phase-1 simplex with Bland's rule. Returns the multipliers on
// success, nullopt otherwise. d = 0 is always a member (lambda = 0).
std::optional<RatVector> conic_membership(const RatVector& d,
                                          const std::vector<RatVector>& gens);

// Decides d in conv{p_1,...,p_m}; same simplex with the extra sum-to-one row.
std::optional<RatVector> convex_membership(const RatVector& d,
                                           const std::vector<RatVector>& points);

}  // namespace nonosc
