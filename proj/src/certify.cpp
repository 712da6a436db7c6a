#include "nonosc/certify.hpp"

#include "nonosc/compound.hpp"

#include "json.hpp"

#include <sstream>
#include <stdexcept>

namespace nonosc {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string join_names(const Network& net, const std::vector<int>& indices,
                       const char* sep) {
    std::string out;
    for (size_t i = 0; i < indices.size(); ++i) {
        if (i) out += sep;
        out += net.species[static_cast<size_t>(indices[i])];
    }
    return out;
}

std::string bracket_vector(const RatVector& v) {
    std::string out = "[";
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (i) out += " ";
        out += rat_to_string(v(i));
    }
    return out + "]";
}

const char* kind_name(InstabilityWitness::Kind k) {
    return k == InstabilityWitness::Kind::SpectralRadiusWord
               ? "SpectralRadiusWord"
               : "DefectiveConicSum";
}

std::vector<RatMatrix> shifted_by_identity(const std::vector<RatMatrix>& mats) {
    std::vector<RatMatrix> out;
    for (const auto& m : mats) out.push_back(rat_identity(m.rows()) + m);
    return out;
}

}  // namespace

std::string to_string(Verdict v) {
    return v == Verdict::RobustlyNonOscillatory ? "RobustlyNonOscillatory"
                                                : "Inconclusive";
}

Certificate certify(const Network& net, const CertifyOptions& options) {
    Certificate cert;
    cert.net = net;
    cert.digest = network_digest(net);
    cert.n_s = net.n_species();
    cert.n_r = net.n_reactions();
    auto& log = cert.diagnostics;

    const RatMatrix gamma = stoichiometry_matrix(net);
    const ConservationBasis cons = conservation_laws(gamma);
    cert.rays = cons.rays;
    cert.conservative = cons.conservative(cert.n_s);
    log.push_back("conservation: " + std::to_string(cert.rays.size()) +
                  " nonnegative rays, " +
                  (cert.conservative ? "every species covered"
                                     : "coverage incomplete"));

    bool siphons_known = false;
    bool all_trivial = false;
    std::vector<int> first_critical;
    try {
        cert.siphons = classify_triviality(minimal_siphons(net), cert.rays);
        siphons_known = true;
        all_trivial =
            persistence_verdict(cert.siphons) == PersistenceVerdict::Certified;
        for (const auto& s : cert.siphons)
            if (!s.trivial && first_critical.empty()) first_critical = s.species;
        log.push_back("siphons: " + std::to_string(cert.siphons.size()) +
                      " minimal, " +
                      (all_trivial ? "all trivial" : "critical present"));
    } catch (const TooLargeError& e) {
        log.push_back(std::string("siphon enumeration failed: ") + e.what());
    }

    const ReducedSystem rs = options.independent.empty()
                                 ? build_reduction(net)
                                 : build_reduction(net, options.independent);
    cert.c = rs.c();
    cert.reduced_dim = rs.d();
    cert.independent = rs.independent;
    cert.pairs = rs.pairs;
    cert.a = rank_one_matrices(rs);
    cert.negative_wtv = true;
    std::pair<int, int> bad_pair{-1, -1};
    for (const auto& f : rs.factors) {
        cert.wtv.push_back(f.wtv);
        if (f.wtv >= 0 && bad_pair.first < 0) {
            cert.negative_wtv = false;
            bad_pair = {f.reaction, f.species};
        }
    }
    // Below dimension 2 the order-2 compound does not exist; keep empty
    // placeholders so factors and compounds stay index-aligned.
    for (const auto& a : cert.a)
        cert.a2.push_back(cert.reduced_dim >= 2 ? additive_compound(a, 2)
                                                : rat_zeros(0, 0));
    log.push_back("reduction: independent = " +
                  join_names(net, cert.independent, ", ") +
                  " (c = " + std::to_string(cert.c) +
                  ", N = " + std::to_string(cert.reduced_dim) + ")");
    log.push_back("factors: " + std::to_string(cert.a.size()) + " pairs, " +
                  (cert.negative_wtv ? "all w^T v negative"
                                     : "nonnegative w^T v present"));

    cert.algorithm = options.algorithm == CertifyOptions::Algorithm::Iterative
                         ? "iterative"
                         : "closure";
    if (cert.reduced_dim < 2) {
        // One- and zero-dimensional reductions have an empty two-form block:
        // nothing to contract, the Lyapunov stage holds vacuously.
        cert.lyapunov_constructed = true;
        cert.v = PWLFunction{0, {}};
        cert.conic.ok = true;
        cert.discrete.ok = true;
        cert.lasalle.pass = true;
        cert.lasalle.strict = true;
        log.push_back("lyapunov: variational block empty below dimension 2, "
                      "stage vacuous");
    } else {
        if (options.algorithm == CertifyOptions::Algorithm::Iterative) {
            const Algorithm1Result r = algorithm1(cert.a2, options.max_iter);
            cert.lyapunov_constructed = r.converged;
            cert.sweeps = r.sweeps;
            cert.v = r.function;
            log.push_back(
                r.converged
                    ? "lyapunov: iterative construction converged after " +
                          std::to_string(r.sweeps) + " sweeps with " +
                          std::to_string(r.function.rows.size()) + " rows"
                    : "lyapunov: iterative construction did not converge (" +
                          std::to_string(r.sweeps) + " sweeps, " +
                          std::to_string(r.function.rows.size()) + " rows)");
        } else {
            const ClosureResult r = closure_builder(shifted_by_identity(cert.a2));
            cert.sweeps = r.depth_reached;
            cert.v = r.function;
            if (r.status == ClosureStatus::Closed) {
                cert.lyapunov_constructed = true;
                log.push_back("lyapunov: closure construction closed at depth " +
                              std::to_string(r.depth_reached) + " with " +
                              std::to_string(r.function.rows.size()) + " rows");
            } else if (r.status == ClosureStatus::Unbounded) {
                log.push_back("lyapunov: closure diverges, " +
                              r.witness->describe());
            } else {
                log.push_back("lyapunov: closure did not settle within budget");
            }
        }
        if (cert.lyapunov_constructed) {
            cert.conic = verify_conic(cert.v, cert.a2);
            log.push_back(std::string("conic decay verification: ") +
                          (cert.conic.ok ? "pass, " : "FAIL, ") +
                          std::to_string(cert.conic.checks.size()) +
                          " nontrivial checks");
            cert.discrete = verify_discrete(cert.v, shifted_by_identity(cert.a2));
            log.push_back(std::string("discrete invariance verification: ") +
                          (cert.discrete.ok ? "pass" : "FAIL"));
            cert.lasalle = lasalle_check(cert.v, cert.a2);
            log.push_back(std::string("invariant-set check: ") +
                          (cert.lasalle.pass ? "pass" : "FAIL") +
                          (cert.lasalle.strict ? " (strict)" : ""));
        }
    }

    if (!cert.a.empty()) {
        cert.instability = detect_instability(cert.a, shifted_by_identity(cert.a),
                                              options.max_word_len);
        log.push_back(
            cert.instability
                ? "first-order screen: " + cert.instability->describe() +
                      " (informational)"
                : "first-order screen: no witness up to length " +
                      std::to_string(options.max_word_len));
    }

    // Fixed gate order; the first failure names the verdict.
    std::string failed;
    if (!siphons_known) {
        failed = "siphon enumeration failed";
    } else if (!all_trivial) {
        failed = "critical siphon {" + join_names(net, first_critical, ", ") + "}";
    } else if (!cert.conservative) {
        int uncovered = -1;
        for (int i = 0; i < cert.n_s && uncovered < 0; ++i) {
            bool hit = false;
            for (const auto& r : cert.rays)
                if (r(i) != 0) hit = true;
            if (!hit) uncovered = i;
        }
        failed = "not conservative (" +
                 net.species[static_cast<size_t>(uncovered)] + " uncovered)";
    } else if (!cert.negative_wtv) {
        failed = "nonnegative w^T v at pair (" +
                 net.reactions[static_cast<size_t>(bad_pair.first)].label + ", " +
                 net.species[static_cast<size_t>(bad_pair.second)] + ")";
    } else if (!cert.lyapunov_constructed) {
        failed = "Lyapunov construction did not converge";
    } else if (!cert.conic.ok) {
        failed = "conic decay verification failed";
    } else if (!cert.lasalle.pass) {
        failed = "invariant-set condition failed";
    }
    cert.failed_gate = failed;
    cert.verdict = failed.empty() ? Verdict::RobustlyNonOscillatory
                                  : Verdict::Inconclusive;
    log.push_back("verdict: " + to_string(cert.verdict) +
                  (failed.empty() ? "" : " (" + failed + ")"));
    return cert;
}

namespace {

ordered_json json_vector(const RatVector& v) {
    ordered_json arr = ordered_json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i)
        arr.push_back(rat_to_string(v(i)));
    return arr;
}

ordered_json json_matrix(const RatMatrix& m) {
    ordered_json rows = ordered_json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        ordered_json row = ordered_json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            row.push_back(rat_to_string(m(i, j)));
        rows.push_back(row);
    }
    return rows;
}

RatVector vector_from_json(const nlohmann::json& arr) {
    RatVector v(arr.size());
    for (size_t i = 0; i < arr.size(); ++i)
        v(static_cast<Eigen::Index>(i)) =
            rat_from_string(arr[i].get<std::string>());
    return v;
}

RatMatrix matrix_from_json(const nlohmann::json& rows, Eigen::Index cols_hint) {
    const auto r = static_cast<Eigen::Index>(rows.size());
    const Eigen::Index c =
        r > 0 ? static_cast<Eigen::Index>(rows[0].size()) : cols_hint;
    RatMatrix m = rat_zeros(r, c);
    for (Eigen::Index i = 0; i < r; ++i)
        for (Eigen::Index j = 0; j < c; ++j)
            m(i, j) = rat_from_string(
                rows[static_cast<size_t>(i)][static_cast<size_t>(j)]
                    .get<std::string>());
    return m;
}

std::string emit_json(const Certificate& cert) {
    ordered_json j;
    j["network"] = {{"digest", cert.digest},
                    {"species", cert.net.species},
                    {"n_species", cert.n_s},
                    {"n_reactions", cert.n_r},
                    {"text", serialize_network(cert.net)}};

    ordered_json reduction;
    reduction["c"] = cert.c;
    reduction["reduced_dim"] = cert.reduced_dim;
    reduction["conservative"] = cert.conservative;
    ordered_json rays = ordered_json::array();
    for (const auto& r : cert.rays) rays.push_back(json_vector(r));
    reduction["conservation_rays"] = rays;
    ordered_json independent = ordered_json::array();
    for (const int i : cert.independent)
        independent.push_back(cert.net.species[static_cast<size_t>(i)]);
    reduction["independent"] = independent;
    ordered_json pairs = ordered_json::array();
    for (const auto& [j1, i1] : cert.pairs)
        pairs.push_back(ordered_json::array({j1, i1}));
    reduction["pairs"] = pairs;
    ordered_json wtv = ordered_json::array();
    for (const auto& r : cert.wtv) wtv.push_back(rat_to_string(r));
    reduction["wtv"] = wtv;
    ordered_json factors = ordered_json::array();
    for (size_t l = 0; l < cert.a.size(); ++l)
        factors.push_back(ordered_json{{"a", json_matrix(cert.a[l])},
                                       {"a2", json_matrix(cert.a2[l])}});
    reduction["factors"] = factors;
    j["reduction"] = reduction;

    ordered_json siphons = ordered_json::array();
    for (const auto& s : cert.siphons) {
        ordered_json names = ordered_json::array();
        for (const int i : s.species)
            names.push_back(cert.net.species[static_cast<size_t>(i)]);
        siphons.push_back(ordered_json{{"species", names}, {"trivial", s.trivial}});
    }
    j["siphons"] = siphons;

    if (cert.instability) {
        const auto& w = *cert.instability;
        j["ldi"] = {{"instability",
                     ordered_json{{"kind", kind_name(w.kind)},
                                  {"word", w.word},
                                  {"spectral_radius", w.spectral_radius},
                                  {"subset", w.subset},
                                  {"rank_m", w.rank_m},
                                  {"rank_m2", w.rank_m2},
                                  {"description", w.describe()}}}};
    } else {
        j["ldi"] = {{"instability", nullptr}};
    }

    ordered_json lyap;
    lyap["algorithm"] = cert.algorithm;
    lyap["constructed"] = cert.lyapunov_constructed;
    lyap["sweeps"] = cert.sweeps;
    lyap["dim"] = static_cast<int>(cert.v.dim);
    ordered_json rows = ordered_json::array();
    for (const auto& r : cert.v.rows) rows.push_back(json_vector(r));
    lyap["rows"] = rows;
    lyap["conic_ok"] = cert.conic.ok;
    lyap["discrete_ok"] = cert.discrete.ok;
    j["lyapunov"] = lyap;

    j["lasalle"] = {{"pass", cert.lasalle.pass},
                    {"strict", cert.lasalle.strict},
                    {"ranks", cert.lasalle.ranks},
                    {"ranks_augmented", cert.lasalle.ranks_augmented}};

    j["diagnostics"] = cert.diagnostics;
    j["verdict"] = {{"result", to_string(cert.verdict)},
                    {"failed_gate", cert.failed_gate.empty()
                                        ? ordered_json(nullptr)
                                        : ordered_json(cert.failed_gate)}};
    return j.dump(2) + "\n";
}

std::string emit_text(const Certificate& cert) {
    std::ostringstream os;
    os << "certificate " << cert.digest << "\n";
    os << "network: " << cert.n_s << " species, " << cert.n_r << " reactions\n";
    os << "species:";
    for (const auto& s : cert.net.species) os << " " << s;
    os << "\n";
    os << "conservation rays (" << cert.rays.size() << "):\n";
    for (const auto& r : cert.rays) os << "  " << bracket_vector(r) << "\n";
    os << "minimal siphons (" << cert.siphons.size() << "):\n";
    for (const auto& s : cert.siphons)
        os << "  {" << join_names(cert.net, s.species, ", ") << "}"
           << (s.trivial ? "  trivial" : "  CRITICAL") << "\n";
    os << "independent species: " << join_names(cert.net, cert.independent, ", ")
       << "  (c = " << cert.c << ", N = " << cert.reduced_dim << ")\n";
    os << "pairs (reaction, species) and w^T v:\n";
    for (size_t l = 0; l < cert.pairs.size(); ++l)
        os << "  ("
           << cert.net.reactions[static_cast<size_t>(cert.pairs[l].first)].label
           << ", " << cert.net.species[static_cast<size_t>(cert.pairs[l].second)]
           << ")  " << rat_to_string(cert.wtv[l]) << "\n";
    if (cert.reduced_dim < 2) {
        os << "lyapunov: vacuous (variational block empty)\n";
    } else if (cert.lyapunov_constructed) {
        os << "lyapunov: " << cert.algorithm << ", " << cert.sweeps
           << (cert.algorithm == "iterative" ? " sweeps, " : " levels, ")
           << cert.v.rows.size() << " rows\n";
        for (const auto& r : cert.v.rows) os << "  " << bracket_vector(r) << "\n";
        os << "conic decay verification: " << (cert.conic.ok ? "pass" : "FAIL")
           << "\n";
        os << "discrete invariance: " << (cert.discrete.ok ? "pass" : "FAIL")
           << "\n";
        os << "invariant-set check: " << (cert.lasalle.pass ? "pass" : "FAIL")
           << "  (ranks";
        for (const int r : cert.lasalle.ranks) os << " " << r;
        os << ")\n";
    } else {
        os << "lyapunov: not constructed (" << cert.algorithm << ")\n";
    }
    os << "first-order screen: "
       << (cert.instability ? cert.instability->describe() : "no witness")
       << "\n";
    os << "verdict: " << to_string(cert.verdict);
    if (!cert.failed_gate.empty()) os << " (" << cert.failed_gate << ")";
    os << "\n";
    return os.str();
}

}  // namespace

std::string emit_report(const Certificate& cert, ReportFormat format) {
    return format == ReportFormat::Json ? emit_json(cert) : emit_text(cert);
}

Certificate certificate_from_json(const std::string& text) {
    const nlohmann::json j = nlohmann::json::parse(text);
    Certificate cert;
    cert.net = parse_network(j.at("network").at("text").get<std::string>());
    cert.digest = j.at("network").at("digest").get<std::string>();
    cert.n_s = j.at("network").at("n_species").get<int>();
    cert.n_r = j.at("network").at("n_reactions").get<int>();

    const auto& red = j.at("reduction");
    cert.c = red.at("c").get<int>();
    cert.reduced_dim = red.at("reduced_dim").get<int>();
    cert.conservative = red.at("conservative").get<bool>();
    for (const auto& r : red.at("conservation_rays"))
        cert.rays.push_back(vector_from_json(r));
    for (const auto& name : red.at("independent"))
        cert.independent.push_back(
            cert.net.species_index(name.get<std::string>()));
    for (const auto& p : red.at("pairs"))
        cert.pairs.emplace_back(p[0].get<int>(), p[1].get<int>());
    cert.negative_wtv = true;
    for (const auto& s : red.at("wtv")) {
        cert.wtv.push_back(rat_from_string(s.get<std::string>()));
        if (cert.wtv.back() >= 0) cert.negative_wtv = false;
    }
    for (const auto& f : red.at("factors")) {
        cert.a.push_back(matrix_from_json(f.at("a"), cert.reduced_dim));
        const Eigen::Index cdim =
            static_cast<Eigen::Index>(cert.reduced_dim) *
            (cert.reduced_dim - 1) / 2;
        cert.a2.push_back(matrix_from_json(f.at("a2"), cdim));
    }

    for (const auto& s : j.at("siphons")) {
        Siphon sip;
        for (const auto& name : s.at("species"))
            sip.species.push_back(cert.net.species_index(name.get<std::string>()));
        sip.trivial = s.at("trivial").get<bool>();
        cert.siphons.push_back(sip);
    }

    const auto& inst = j.at("ldi").at("instability");
    if (!inst.is_null()) {
        InstabilityWitness w;
        w.kind = inst.at("kind").get<std::string>() == "SpectralRadiusWord"
                     ? InstabilityWitness::Kind::SpectralRadiusWord
                     : InstabilityWitness::Kind::DefectiveConicSum;
        w.word = inst.at("word").get<std::vector<int>>();
        w.spectral_radius = inst.at("spectral_radius").get<double>();
        w.subset = inst.at("subset").get<std::vector<int>>();
        w.rank_m = inst.at("rank_m").get<int>();
        w.rank_m2 = inst.at("rank_m2").get<int>();
        cert.instability = w;
    }

    const auto& lyap = j.at("lyapunov");
    cert.algorithm = lyap.at("algorithm").get<std::string>();
    cert.lyapunov_constructed = lyap.at("constructed").get<bool>();
    cert.sweeps = lyap.at("sweeps").get<int>();
    cert.v.dim = lyap.at("dim").get<int>();
    for (const auto& r : lyap.at("rows"))
        cert.v.rows.push_back(vector_from_json(r));
    cert.conic.ok = lyap.at("conic_ok").get<bool>();
    cert.discrete.ok = lyap.at("discrete_ok").get<bool>();

    const auto& las = j.at("lasalle");
    cert.lasalle.pass = las.at("pass").get<bool>();
    cert.lasalle.strict = las.at("strict").get<bool>();
    cert.lasalle.ranks = las.at("ranks").get<std::vector<int>>();
    cert.lasalle.ranks_augmented =
        las.at("ranks_augmented").get<std::vector<int>>();

    cert.diagnostics = j.at("diagnostics").get<std::vector<std::string>>();
    const auto& verdict = j.at("verdict");
    cert.verdict = verdict.at("result").get<std::string>() ==
                           "RobustlyNonOscillatory"
                       ? Verdict::RobustlyNonOscillatory
                       : Verdict::Inconclusive;
    if (!verdict.at("failed_gate").is_null())
        cert.failed_gate = verdict.at("failed_gate").get<std::string>();
    return cert;
}

}  // namespace nonosc
