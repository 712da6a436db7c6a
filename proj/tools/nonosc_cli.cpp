#include "nonosc/certify.hpp"
#include "nonosc/compound.hpp"
#include "nonosc/simulate.hpp"

#include "CLI11.hpp"

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

using namespace nonosc;

namespace {

std::vector<std::string> split_names(const std::string& csv) {
    std::vector<std::string> out;
    std::stringstream ss(csv);
    std::string tok;
    while (std::getline(ss, tok, ',')) out.push_back(tok);
    return out;
}

std::vector<double> split_doubles(const std::string& csv) {
    std::vector<double> out;
    std::stringstream ss(csv);
    std::string tok;
    while (std::getline(ss, tok, ',')) out.push_back(std::stod(tok));
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

void print_matrix(std::ostream& os, const RatMatrix& m) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        os << "  [";
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            if (j) os << " ";
            os << rat_to_string(m(i, j));
        }
        os << "]\n";
    }
}

std::string join_species(const Network& net, const std::vector<int>& idx) {
    std::string out;
    for (size_t i = 0; i < idx.size(); ++i) {
        if (i) out += ", ";
        out += net.species[static_cast<size_t>(idx[i])];
    }
    return out;
}

ReducedSystem reduce(const Network& net, const std::string& independent) {
    return independent.empty() ? build_reduction(net)
                               : build_reduction(net, split_names(independent));
}

int run_certify(const std::string& file, const std::string& independent,
                const std::string& algorithm, int max_iter, int max_word_len,
                const std::string& json_path, bool text) {
    CertifyOptions opt;
    if (!independent.empty()) opt.independent = split_names(independent);
    opt.algorithm = algorithm == "closure" ? CertifyOptions::Algorithm::Closure
                                           : CertifyOptions::Algorithm::Iterative;
    opt.max_iter = max_iter;
    opt.max_word_len = max_word_len;
    const Certificate cert = certify(parse_network_file(file), opt);
    if (!json_path.empty()) {
        std::ofstream out(json_path);
        if (!out) {
            std::cerr << "cannot write " << json_path << "\n";
            return 2;
        }
        out << emit_report(cert, ReportFormat::Json);
    }
    if (text || json_path.empty())
        std::cout << emit_report(cert, ReportFormat::Text);
    return cert.verdict == Verdict::RobustlyNonOscillatory ? 0 : 1;
}

int run_siphons(const std::string& file) {
    const Network net = parse_network_file(file);
    const ConservationBasis cons = conservation_laws(stoichiometry_matrix(net));
    const auto siphons = classify_triviality(minimal_siphons(net), cons.rays);
    for (const auto& s : siphons)
        std::cout << "{" << join_species(net, s.species) << "}"
                  << (s.trivial ? "  trivial" : "  CRITICAL") << "\n";
    std::cout << "persistence: "
              << to_string(persistence_verdict(siphons)) << "\n";
    return 0;
}

int run_conservation(const std::string& file) {
    const Network net = parse_network_file(file);
    const ConservationBasis cons = conservation_laws(stoichiometry_matrix(net));
    std::cout << "rays (" << cons.rays.size() << "):\n";
    for (const auto& r : cons.rays) std::cout << "  " << bracket_vector(r) << "\n";
    std::cout << "conservative: "
              << (cons.conservative(net.n_species()) ? "yes" : "no") << "\n";
    return 0;
}

int run_compound(const std::string& file, const std::string& independent,
                 int order) {
    const Network net = parse_network_file(file);
    const ReducedSystem rs = reduce(net, independent);
    const auto mats = rank_one_matrices(rs);
    for (size_t l = 0; l < mats.size(); ++l) {
        const auto& [j, i] = rs.pairs[l];
        std::cout << "A_" << (l + 1) << " ("
                  << net.reactions[static_cast<size_t>(j)].label << ", "
                  << net.species[static_cast<size_t>(i)] << "):\n";
        print_matrix(std::cout, mats[l]);
        std::cout << "A_" << (l + 1) << "^(" << order << "):\n";
        print_matrix(std::cout, additive_compound(mats[l], order));
    }
    return 0;
}

int run_instability(const std::string& file, const std::string& independent,
                    bool second_order, int max_word_len) {
    const Network net = parse_network_file(file);
    const ReducedSystem rs = reduce(net, independent);
    std::vector<RatMatrix> mats = rank_one_matrices(rs);
    if (second_order) {
        for (auto& m : mats) m = additive_compound(m, 2);
    }
    std::vector<RatMatrix> projections;
    for (const auto& m : mats)
        projections.push_back(rat_identity(m.rows()) + m);
    const auto witness = detect_instability(mats, projections, max_word_len);
    if (witness)
        std::cout << witness->describe() << "\n";
    else
        std::cout << "no witness up to length " << max_word_len << "\n";
    return 0;
}

int run_simulate(const std::string& file, const std::string& independent,
                 const std::string& rates, const std::string& totals,
                 const std::string& x0, const std::string& delta0, double t_end,
                 double dt, const std::string& csv_path) {
    const Network net = parse_network_file(file);
    const ReducedSystem rs = reduce(net, independent);
    MassActionParams params =
        parse_params_file(rates, net.n_reactions(), rs.c());
    if (!totals.empty()) {
        const auto override_totals = split_doubles(totals);
        if (static_cast<int>(override_totals.size()) != rs.c())
            throw std::invalid_argument("expected " + std::to_string(rs.c()) +
                                        " totals");
        params.totals = override_totals;
    }

    const auto x0v = split_doubles(x0);
    if (static_cast<int>(x0v.size()) != rs.d())
        throw std::invalid_argument("expected " + std::to_string(rs.d()) +
                                    " reduced coordinates in --x0");
    Eigen::VectorXd xd0(rs.d());
    for (int i = 0; i < rs.d(); ++i) xd0(i) = x0v[static_cast<size_t>(i)];

    const Eigen::Index cdim =
        static_cast<Eigen::Index>(rs.d()) * (rs.d() - 1) / 2;
    Eigen::VectorXd d0(0);
    PWLFunction v;
    bool have_v = false;
    if (!delta0.empty()) {
        const auto d0v = split_doubles(delta0);
        if (static_cast<Eigen::Index>(d0v.size()) != cdim)
            throw std::invalid_argument(
                "expected " + std::to_string(cdim) +
                " two-form coordinates in --delta0");
        d0.resize(cdim);
        for (Eigen::Index i = 0; i < cdim; ++i)
            d0(i) = d0v[static_cast<size_t>(i)];
        if (rs.d() >= 2) {
            std::vector<RatMatrix> compounds;
            for (const auto& m : rank_one_matrices(rs))
                compounds.push_back(additive_compound(m, 2));
            const auto r = algorithm1(compounds);
            if (r.converged) {
                v = r.function;
                have_v = true;
            }
        }
    }

    const Trajectory tr = integrate(rs, params, xd0, d0, t_end, dt,
                                    have_v ? &v : nullptr);
    if (csv_path.empty()) {
        write_csv(std::cout, tr);
    } else {
        std::ofstream out(csv_path);
        if (!out) {
            std::cerr << "cannot write " << csv_path << "\n";
            return 2;
        }
        write_csv(out, tr);
    }
    if (tr.clamped)
        std::cerr << "note: negative reconstructions were clamped to zero\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "Certifying analysis of robust non-oscillation for chemical "
        "reaction networks.\nExit codes: 0 clean verdict, 1 inconclusive, "
        "2 input or usage error."};
    app.require_subcommand(1);

    std::string file, independent, algorithm = "iterative", json_path, totals;
    std::string rates, x0, delta0, csv_path;
    int max_iter = 100, max_word_len = 6, order = 2;
    bool text = false, first_order = false, second_order = false;
    double t_end = 50.0, dt = 1e-3;

    auto* certify_cmd =
        app.add_subcommand("certify", "Run the full pipeline and report");
    certify_cmd->add_option("file", file, "network file")->required();
    certify_cmd->add_option("--independent", independent,
                            "comma-separated independent species");
    certify_cmd->add_option("--algorithm", algorithm, "iterative or closure")
        ->check(CLI::IsMember({"iterative", "closure"}));
    certify_cmd->add_option("--max-iter", max_iter, "sweep budget");
    certify_cmd->add_option("--max-word-len", max_word_len,
                            "first-order screen depth");
    certify_cmd->add_option("--json", json_path, "write the JSON report here");
    certify_cmd->add_flag("--text", text,
                          "print the text report even with --json");

    auto* siphons_cmd =
        app.add_subcommand("siphons", "List minimal siphons and triviality");
    siphons_cmd->add_option("file", file, "network file")->required();

    auto* conservation_cmd = app.add_subcommand(
        "conservation", "List nonnegative conservation rays");
    conservation_cmd->add_option("file", file, "network file")->required();

    auto* compound_cmd = app.add_subcommand(
        "compound", "Print the rank-one factors and their compounds");
    compound_cmd->add_option("file", file, "network file")->required();
    compound_cmd->add_option("--order", order, "compound order");
    compound_cmd->add_option("--independent", independent,
                             "comma-separated independent species");

    auto* instability_cmd = app.add_subcommand(
        "instability", "Search for linear-inclusion instability witnesses");
    instability_cmd->add_option("file", file, "network file")->required();
    instability_cmd->add_flag("--first-order", first_order,
                              "screen the rank-one factors (default)");
    instability_cmd->add_flag("--second-order", second_order,
                              "screen the second compounds");
    instability_cmd->add_option("--max-word-len", max_word_len, "word depth");
    instability_cmd->add_option("--independent", independent,
                                "comma-separated independent species");

    auto* simulate_cmd =
        app.add_subcommand("simulate", "Integrate the reduced cascade to CSV");
    simulate_cmd->add_option("file", file, "network file")->required();
    simulate_cmd->add_option("--independent", independent,
                             "comma-separated independent species");
    simulate_cmd->add_option("--rates", rates, "key-value parameter file")
        ->required();
    simulate_cmd->add_option("--totals", totals,
                             "comma-separated totals override");
    simulate_cmd->add_option("--x0", x0, "comma-separated reduced state")
        ->required();
    simulate_cmd->add_option("--delta0", delta0,
                             "comma-separated two-form state");
    simulate_cmd->add_option("--t-end", t_end, "horizon");
    simulate_cmd->add_option("--dt", dt, "step size");
    simulate_cmd->add_option("--csv", csv_path, "output file (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (*certify_cmd)
            return run_certify(file, independent, algorithm, max_iter,
                               max_word_len, json_path, text);
        if (*siphons_cmd) return run_siphons(file);
        if (*conservation_cmd) return run_conservation(file);
        if (*compound_cmd) return run_compound(file, independent, order);
        if (*instability_cmd)
            return run_instability(file, independent,
                                   second_order && !first_order, max_word_len);
        if (*simulate_cmd)
            return run_simulate(file, independent, rates, totals, x0, delta0,
                                t_end, dt, csv_path);
    } catch (const StepRejected& e) {
        std::cerr << "integration aborted: state magnitude exceeded 1e12 at t = "
                  << e.t << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
