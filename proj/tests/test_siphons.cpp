#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "nonosc/siphons.hpp"

#include "nonosc/stoich.hpp"

#include "helpers.hpp"
#include "netgen.hpp"

#include <set>
#include <string>

using namespace nonosc;

namespace {

// Definitional check used by the brute-force oracle.
bool is_siphon(const Network& net, const std::set<int>& s) {
    for (const auto& r : net.reactions) {
        bool produces = false, consumes = false;
        for (const auto& [i, c] : r.products)
            if (s.count(i)) { produces = true; break; }
        for (const auto& [i, c] : r.reactants)
            if (s.count(i)) { consumes = true; break; }
        if (produces && !consumes) return false;
    }
    return true;
}

std::vector<std::vector<int>> brute_force_minimal(const Network& net) {
    const int n = net.n_species();
    std::vector<std::set<int>> siphons;
    for (unsigned mask = 1; mask < (1u << n); ++mask) {
        std::set<int> s;
        for (int i = 0; i < n; ++i)
            if (mask & (1u << i)) s.insert(i);
        if (is_siphon(net, s)) siphons.push_back(s);
    }
    std::vector<std::vector<int>> minimal;
    for (const auto& s : siphons) {
        bool has_subset = false;
        for (const auto& t : siphons)
            if (t != s && std::includes(s.begin(), s.end(), t.begin(), t.end())) {
                has_subset = true;
                break;
            }
        if (!has_subset) minimal.emplace_back(s.begin(), s.end());
    }
    std::sort(minimal.begin(), minimal.end(), [](const auto& a, const auto& b) {
        return a.size() != b.size() ? a.size() < b.size() : a < b;
    });
    return minimal;
}

}  // namespace

TEST_CASE("minimal siphons of the open cycle") {
    const Network net = parse_network_file(std::string(NONOSC_DATA_DIR) + "/ptm_open.crn");
    const auto sip = minimal_siphons(net);
    // {L,K,C}, {Rc,K,C}, {S,C,P}
    REQUIRE(sip.size() == 3);
    CHECK(sip[0] == std::vector<int>{0, 2, 4});
    CHECK(sip[1] == std::vector<int>{1, 2, 4});
    CHECK(sip[2] == std::vector<int>{3, 4, 5});

    const auto cb = conservation_laws(stoichiometry_matrix(net));
    const auto classified = classify_triviality(sip, cb.rays);
    for (const auto& s : classified) CHECK(s.trivial);
    CHECK(persistence_verdict(classified) == PersistenceVerdict::Certified);
}

TEST_CASE("minimal siphons of the inhibitor cycle") {
    const Network net =
        parse_network_file(std::string(NONOSC_DATA_DIR) + "/ptm_inhibitor.crn");
    const auto sip = minimal_siphons(net);
    // {I,KI}, {KI,K,C}, {S,C,P}
    REQUIRE(sip.size() == 3);
    CHECK(sip[0] == std::vector<int>{0, 1});
    CHECK(sip[1] == std::vector<int>{1, 2, 4});
    CHECK(sip[2] == std::vector<int>{3, 4, 5});
    const auto cb = conservation_laws(stoichiometry_matrix(net));
    const auto classified = classify_triviality(sip, cb.rays);
    for (const auto& s : classified) CHECK(s.trivial);
    CHECK(persistence_verdict(classified) == PersistenceVerdict::Certified);
}

TEST_CASE("critical siphons and empty cases") {
    // Nothing produces A, so {A} is vacuously a siphon; no conservation ray
    // fits inside it.
    const Network decay = parse_network("A -> 0\n");
    const auto sip = minimal_siphons(decay);
    REQUIRE(sip.size() == 1);
    CHECK(sip[0] == std::vector<int>{0});
    const auto cb = conservation_laws(stoichiometry_matrix(decay));
    const auto classified = classify_triviality(sip, cb.rays);
    CHECK_FALSE(classified[0].trivial);
    CHECK(persistence_verdict(classified) == PersistenceVerdict::Unknown);

    // Conservative but still critical: the ray support {A,B} exceeds {A}.
    const Network ab = parse_network("A -> B\n");
    const auto sip_ab = minimal_siphons(ab);
    REQUIRE(sip_ab.size() == 1);
    CHECK(sip_ab[0] == std::vector<int>{0});
    const auto cb_ab = conservation_laws(stoichiometry_matrix(ab));
    CHECK_FALSE(classify_triviality(sip_ab, cb_ab.rays)[0].trivial);

    // Inflow destroys every siphon candidate.
    CHECK(minimal_siphons(parse_network("0 -> A\nA -> 0\n")).empty());
    CHECK(persistence_verdict({}) == PersistenceVerdict::Certified);
}

TEST_CASE("catalysts satisfy the siphon condition by themselves") {
    // E is produced (and consumed) by the same reaction, so {E} is a siphon.
    const Network cat = parse_network("species E S W\nE + S -> E + W\nW -> S\n");
    const auto sip = minimal_siphons(cat);
    REQUIRE(sip.size() == 2);
    CHECK(sip[0] == std::vector<int>{0});
    CHECK(sip[1] == std::vector<int>{1, 2});
}

TEST_CASE("agrees with brute force on random networks") {
    std::mt19937 gen(29);
    for (int trial = 0; trial < 60; ++trial) {
        const Network net = random_network(gen);
        const auto got = minimal_siphons(net);
        const auto want = brute_force_minimal(net);
        CHECK(got == want);
        // Returned siphons satisfy the definition and are pairwise
        // non-nested.
        for (const auto& s : got) {
            CHECK(is_siphon(net, std::set<int>(s.begin(), s.end())));
            for (const auto& t : got)
                if (s != t)
                    CHECK_FALSE(std::includes(s.begin(), s.end(), t.begin(), t.end()));
        }
    }
}

TEST_CASE("triviality is monotone under ray containment") {
    std::mt19937 gen(41);
    for (int trial = 0; trial < 20; ++trial) {
        const Network net = random_network(gen);
        const auto cb = conservation_laws(stoichiometry_matrix(net));
        const auto classified = classify_triviality(minimal_siphons(net), cb.rays);
        for (const auto& s : classified) {
            bool contains_support = false;
            for (const auto& ray : cb.rays) {
                bool inside = true;
                for (Eigen::Index i = 0; i < ray.size(); ++i)
                    if (ray(i) > 0 && !std::count(s.species.begin(), s.species.end(),
                                                  static_cast<int>(i)))
                        inside = false;
                if (inside) contains_support = true;
            }
            CHECK(s.trivial == contains_support);
        }
    }
}

TEST_CASE("rejects networks beyond the species cap") {
    std::string text;
    for (int i = 0; i < 33; ++i)
        text += "S" + std::to_string(i) + " -> S" + std::to_string((i + 1) % 33) + "\n";
    CHECK_THROWS_AS(minimal_siphons(parse_network(text)), TooLargeError);
}
