#pragma once

#include "nonosc/lyapunov.hpp"
#include "nonosc/network.hpp"
#include "nonosc/siphons.hpp"
#include "nonosc/stoich.hpp"

#include <optional>
#include <string>
#include <vector>

namespace nonosc {

// The verdict never claims an oscillation exists; a failed gate only means
// the certificate could not be assembled.
enum class Verdict { RobustlyNonOscillatory, Inconclusive };

std::string to_string(Verdict v);

struct CertifyOptions {
    // Independent species by name; empty picks the lexicographically first
    // workable set.
    std::vector<std::string> independent;
    enum class Algorithm { Iterative, Closure };
    Algorithm algorithm = Algorithm::Iterative;
    int max_iter = 100;      // iterative sweep cap
    int max_word_len = 6;    // first-order instability screen depth
};

struct Certificate {
    Network net;
    std::string digest;
    int n_s = 0;
    int n_r = 0;
    int c = 0;
    int reduced_dim = 0;

    std::vector<RatVector> rays;
    bool conservative = false;
    std::vector<Siphon> siphons;

    std::vector<int> independent;
    std::vector<std::pair<int, int>> pairs;  // (reaction, species)
    std::vector<RatMatrix> a;                // rank-one factors
    std::vector<RatMatrix> a2;               // their second additive compounds
    std::vector<Rat> wtv;
    bool negative_wtv = false;

    std::string algorithm;  // "iterative" or "closure"
    bool lyapunov_constructed = false;
    int sweeps = 0;  // sweeps (iterative) or depth reached (closure)
    PWLFunction v;
    ConicReport conic;
    DiscreteReport discrete;
    LasalleReport lasalle;

    // First-order screen outcome; informational, never part of the verdict.
    std::optional<InstabilityWitness> instability;

    Verdict verdict = Verdict::Inconclusive;
    std::string failed_gate;  // empty on the clean verdict
    std::vector<std::string> diagnostics;
};

// Runs the full pipeline: conservation laws, minimal siphons, coordinate
// reduction, rank-one factors and their compounds, Lyapunov construction,
// conic and discrete verification, the invariant-set check, and the
// informational first-order screen. The verdict requires, in order: all
// minimal siphons trivial, the network conservative, every w^T v < 0, a
// verified Lyapunov function, and the invariant-set check; the first gate to
// fail is named and later stages still run as far as the data allows.
// Reduction errors (unknown names, singular T) propagate to the caller.
Certificate certify(const Network& net, const CertifyOptions& options = {});

enum class ReportFormat { Json, Text };

// Deterministic serialization: fixed key order, rationals as "p/q" strings.
// Two calls on the same certificate are byte-identical.
std::string emit_report(const Certificate& cert, ReportFormat format);

// Rebuilds a certificate from its JSON report. Fields outside the report
// (conic multipliers, LaSalle kernels) come back empty; everything the
// report carries round-trips, so emit_report(from_json(emit_report(c))) ==
// emit_report(c).
Certificate certificate_from_json(const std::string& text);

}  // namespace nonosc
