#pragma once

#include "nonosc/network.hpp"
#include "nonosc/rat.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace nonosc {

class TooLargeError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Siphon: species set such that every reaction producing a member also
// consumes a member. Species indices ascending.
struct Siphon {
    std::vector<int> species;
    bool trivial;  // contains the support of a nonnegative conservation ray
};

// All inclusion-minimal nonempty siphons by closure-based branch and bound,
// sorted by size then lexicographically. Throws TooLargeError beyond 32
// species.
std::vector<std::vector<int>> minimal_siphons(const Network& net);

std::vector<Siphon> classify_triviality(const std::vector<std::vector<int>>& siphons,
                                        const std::vector<RatVector>& rays);

enum class PersistenceVerdict { Certified, Unknown };

// Certified iff every minimal siphon is trivial (then every siphon contains a
// trivial one, so no face of the positive orthant attracts trajectories).
PersistenceVerdict persistence_verdict(const std::vector<Siphon>& siphons);

std::string to_string(PersistenceVerdict v);

}  // namespace nonosc
