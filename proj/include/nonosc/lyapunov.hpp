#pragma once

#include "nonosc/rat.hpp"

#include <optional>
#include <string>
#include <vector>

namespace nonosc {

// Symmetric piecewise-linear candidate V(z) = max_k c_k^T z. Rows always come
// in +/- pairs here, so a successful construction is a polyhedral norm.
struct PWLFunction {
    Eigen::Index dim = 0;
    std::vector<RatVector> rows;
};

// Rows +/- e_i: the sup norm, the seed of both constructions.
PWLFunction box_function(Eigen::Index dim);

double evaluate(const PWLFunction& f, const Eigen::VectorXd& z);

struct Algorithm1Result {
    bool converged = false;
    PWLFunction function;  // final rows, also on failure
    int sweeps = 0;
    std::vector<size_t> rows_per_sweep;  // trajectory of the row count
};

// Iterative construction: start from +/- e_i; for each row c and factor A
// with c^T A != 0 append c^T (A + I) unless it equals an existing row or is
// zero. A sweep processes the rows added by the previous sweep; converged
// when a sweep adds nothing within max_iter sweeps. The row budget is a
// safety valve for divergent families whose row sets outgrow the sweep
// budget; exceeding it also reports not converged.
Algorithm1Result algorithm1(const std::vector<RatMatrix>& mats, int max_iter = 100,
                            size_t max_rows = 4096);

struct InstabilityWitness {
    enum class Kind { SpectralRadiusWord, DefectiveConicSum };
    Kind kind;
    // SpectralRadiusWord: projection indices, first factor applied first.
    std::vector<int> word;
    double spectral_radius = 0.0;
    // DefectiveConicSum: factor indices of the sum M with rank(M^2) < rank(M)
    // and det M = 0, i.e. a defective zero eigenvalue.
    std::vector<int> subset;
    int rank_m = 0;
    int rank_m2 = 0;

    std::string describe() const;
};

enum class ClosureStatus { Closed, Unbounded, NotConverged };

struct ClosureResult {
    ClosureStatus status = ClosureStatus::NotConverged;
    PWLFunction function;
    std::optional<InstabilityWitness> witness;  // set when Unbounded
    size_t words_examined = 0;
    int depth_reached = 0;
};

// Alternative construction closing the row set under c -> c^T Pi_l with
// convex-hull pruning; runs the spectral word screen alongside, so a
// divergent product family is reported as Unbounded with a witness.
ClosureResult closure_builder(const std::vector<RatMatrix>& projections,
                              size_t max_words = 200000, int max_len = 6);

// Word screen on its own: float spectral radius > 1 + 1e-6, then exact
// confirmation by repeated squaring before a witness is reported. The
// parallel path splits the word tree by first letter and reduces to the
// shortest, lexicographically smallest witness; results match the serial
// path exactly.
std::optional<InstabilityWitness> spectral_word_scan(
    const std::vector<RatMatrix>& projections, int max_len,
    size_t max_words = 2000000, bool parallel = true);

struct ConicCheck {
    int row = 0;
    int mat = 0;
    bool ok = false;
    RatVector multipliers;  // over the generators c_row - c_j, j != row
};

struct ConicReport {
    bool ok = false;
    std::vector<ConicCheck> checks;  // nontrivial checks only (c^T A != 0)
};

// Decay condition, exact: for every row c_k and factor A_l, -c_k^T A_l lies
// in cone{c_k - c_j}. Certificate multipliers are recorded.
ConicReport verify_conic(const PWLFunction& f, const std::vector<RatMatrix>& mats);

struct DiscreteReport {
    bool ok = false;
    std::vector<std::pair<int, int>> failures;  // (row, projection) pairs
};

// Discrete-inclusion invariance, exact: every mapped row c_k^T Pi_l stays in
// conv(rows).
DiscreteReport verify_discrete(const PWLFunction& f,
                               const std::vector<RatMatrix>& projections);

struct LasalleReport {
    bool pass = false;    // Ker(M_i^T) inside Ker(c_i^T) for every row
    bool strict = false;  // the stronger full-rank version, rank(M_i) = dim
    std::vector<RatMatrix> m;  // M_i = [A_1^T c_i ... A_s^T c_i]
    std::vector<int> ranks;
    std::vector<int> ranks_augmented;  // rank([M_i | c_i])
};

// Invariant-set condition. A trajectory riding the face of row c_i keeps
// c_i^T z = V(z) > 0 while M_i^T z = 0, so it cannot exist when every kernel
// vector of M_i^T is annihilated by c_i: rank([M_i | c_i]) = rank(M_i). The
// full-rank version rank(M_i) = dim implies this but fails on certifiable
// systems (it already rejects the plain contraction A = -I).
LasalleReport lasalle_check(const PWLFunction& f, const std::vector<RatMatrix>& mats);

// Two screens, first hit wins: (a) spectral word screen on the projections,
// (b) defective zero eigenvalue among conic sums of at most two factors.
std::optional<InstabilityWitness> detect_instability(
    const std::vector<RatMatrix>& mats, const std::vector<RatMatrix>& projections,
    int max_len = 6);

// Same function as a set: mutual convex-hull membership of the row sets.
bool function_equiv(const PWLFunction& a, const PWLFunction& b);

}  // namespace nonosc
