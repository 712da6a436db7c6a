#pragma once

#include "nonosc/rat.hpp"

#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace nonosc {

class ParseError : public std::runtime_error {
public:
    ParseError(int line, int col, const std::string& msg)
        : std::runtime_error("line " + std::to_string(line) + ", col " +
                             std::to_string(col) + ": " + msg),
          line(line), col(col) {}
    int line;
    int col;
};

class UnknownSpeciesError : public ParseError {
public:
    using ParseError::ParseError;
};

class DuplicateSpeciesError : public ParseError {
public:
    using ParseError::ParseError;
};

// Sparse complex: species index -> positive integer coefficient. An empty map
// is the empty complex (written "0" in network files).
using Complex = std::map<int, int>;

struct Reaction {
    std::string label;
    Complex reactants;
    Complex products;

    bool operator==(const Reaction&) const = default;
};

struct Network {
    std::vector<std::string> species;
    std::vector<Reaction> reactions;

    int n_species() const { return static_cast<int>(species.size()); }
    int n_reactions() const { return static_cast<int>(reactions.size()); }
    // -1 when the name is not declared.
    int species_index(const std::string& name) const;

    bool operator==(const Network&) const = default;
};

// Parses the line-oriented network format:
//   # comment
//   species L Rc K S C P
//   L + Rc <-> K
//   r5: C -> P + K
// Coefficients are whitespace-separated integer prefixes ("2 A"), "0" is the
// empty complex, "<->" expands to the forward reaction followed by the
// backward one. Unlabeled reactions get labels R1, R2, ... by final index.
Network parse_network(const std::string& text);
Network parse_network_file(const std::string& path);

// Canonical text form; parse_network(serialize_network(n)) == n.
std::string serialize_network(const Network& n);

// FNV-1a 64-bit hash of the canonical form, as fixed-width hex.
std::string network_digest(const Network& n);

// n_s x n_r integer matrix, entry (i, j) = products coeff - reactants coeff.
RatMatrix stoichiometry_matrix(const Network& n);

// Reaction-reactant pairs (j, i) with reactant coefficient alpha_ij > 0,
// ordered by reaction index, then species index. Zero-based indices.
std::vector<std::pair<int, int>> reactant_pairs(const Network& n);

}  // namespace nonosc
