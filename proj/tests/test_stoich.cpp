#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "nonosc/stoich.hpp"

#include "nonosc/ratlinalg.hpp"

#include "helpers.hpp"

#include <string>

using namespace nonosc;

namespace {

Network ptm_open() {
    return parse_network_file(std::string(NONOSC_DATA_DIR) + "/ptm_open.crn");
}

Network ptm_inhibitor() {
    return parse_network_file(std::string(NONOSC_DATA_DIR) + "/ptm_inhibitor.crn");
}

}  // namespace

TEST_CASE("conservation laws of the open cycle") {
    const auto cb = conservation_laws(stoichiometry_matrix(ptm_open()));
    REQUIRE(cb.c() == 3);
    REQUIRE(cb.rays.size() == 3);
    CHECK(exactly_equal(cb.rays[0], rvec({1, 0, 1, 0, 1, 0})));
    CHECK(exactly_equal(cb.rays[1], rvec({0, 1, 1, 0, 1, 0})));
    CHECK(exactly_equal(cb.rays[2], rvec({0, 0, 0, 1, 1, 1})));
    // Rays span here, so they are the basis.
    for (int i = 0; i < 3; ++i) CHECK(exactly_equal(cb.basis[i], cb.rays[i]));
    CHECK(cb.conservative(6));
}

TEST_CASE("conservation laws of the inhibitor cycle") {
    const auto cb = conservation_laws(stoichiometry_matrix(ptm_inhibitor()));
    REQUIRE(cb.c() == 3);
    REQUIRE(cb.rays.size() == 3);
    CHECK(exactly_equal(cb.rays[0], rvec({1, 1, 0, 0, 0, 0})));
    CHECK(exactly_equal(cb.rays[1], rvec({0, 1, 1, 0, 1, 0})));
    CHECK(exactly_equal(cb.rays[2], rvec({0, 0, 0, 1, 1, 1})));
    CHECK(cb.conservative(6));
}

TEST_CASE("conservation edge cases") {
    const auto ab = conservation_laws(stoichiometry_matrix(parse_network("A -> B\n")));
    REQUIRE(ab.c() == 1);
    CHECK(exactly_equal(ab.rays[0], rvec({1, 1})));
    CHECK(ab.conservative(2));

    const auto decay = conservation_laws(stoichiometry_matrix(parse_network("A -> 0\n")));
    CHECK(decay.c() == 0);
    CHECK(decay.rays.empty());
    CHECK_FALSE(decay.conservative(1));

    const auto open_chain =
        conservation_laws(stoichiometry_matrix(parse_network("A -> B\nB -> 0\n")));
    CHECK(open_chain.c() == 0);
    CHECK_FALSE(open_chain.conservative(2));
}

TEST_CASE("reduction of the open cycle with L, K, P independent") {
    const auto rs = build_reduction(ptm_open(), std::vector<std::string>{"L", "K", "P"});
    CHECK(rs.c() == 3);
    CHECK(rs.d() == 3);
    CHECK(rs.independent == std::vector<int>{0, 2, 5});

    CHECK(exactly_equal(rs.t, rmat({{1, 0, 1, 0, 1, 0},
                                    {0, 1, 1, 0, 1, 0},
                                    {0, 0, 0, 1, 1, 1},
                                    {1, 0, 0, 0, 0, 0},
                                    {0, 0, 1, 0, 0, 0},
                                    {0, 0, 0, 0, 0, 1}})));
    CHECK(exactly_equal(rs.t_inv, rmat({{0, 0, 0, 1, 0, 0},
                                        {-1, 1, 0, 1, 0, 0},
                                        {0, 0, 0, 0, 1, 0},
                                        {-1, 0, 1, 1, 1, -1},
                                        {1, 0, 0, -1, -1, 0},
                                        {0, 0, 0, 0, 0, 1}})));
    CHECK(exactly_equal(rs.gamma_r, rmat({{-1, 1, 0, 0, 0, 0},
                                          {1, -1, -1, 1, 1, 0},
                                          {0, 0, 0, 0, 1, -1}})));

    const auto mats = rank_one_matrices(rs);
    REQUIRE(mats.size() == 8);
    CHECK(exactly_equal(mats[0], rmat({{-1, 0, 0}, {1, 0, 0}, {0, 0, 0}})));
    CHECK(exactly_equal(mats[1], mats[0]));
    CHECK(exactly_equal(mats[2], rmat({{0, 1, 0}, {0, -1, 0}, {0, 0, 0}})));
    CHECK(exactly_equal(mats[3], rmat({{0, 0, 0}, {0, -1, 0}, {0, 0, 0}})));
    CHECK(exactly_equal(mats[4], rmat({{0, 0, 0}, {-1, -1, 1}, {0, 0, 0}})));
    CHECK(exactly_equal(mats[5], rmat({{0, 0, 0}, {-1, -1, 0}, {0, 0, 0}})));
    CHECK(exactly_equal(mats[6], rmat({{0, 0, 0}, {-1, -1, 0}, {-1, -1, 0}})));
    CHECK(exactly_equal(mats[7], rmat({{0, 0, 0}, {0, 0, 0}, {0, 0, -1}})));
    for (const auto& f : rs.factors) CHECK(f.wtv == -1);
}

TEST_CASE("auto-selection picks the lexicographically first independent set") {
    const auto rs = build_reduction(ptm_open());
    CHECK(rs.independent == std::vector<int>{0, 2, 3});
    CHECK(rank(rs.t) == 6);
}

TEST_CASE("reduction of the inhibitor cycle with C, KI, P independent") {
    const auto rs =
        build_reduction(ptm_inhibitor(), std::vector<std::string>{"C", "KI", "P"});
    CHECK(rs.independent == std::vector<int>{4, 1, 5});
    CHECK(exactly_equal(rs.gamma_r, rmat({{0, 0, 1, -1, -1, 0},
                                          {1, -1, 0, 0, 0, 0},
                                          {0, 0, 0, 0, 1, -1}})));
    const auto mats = rank_one_matrices(rs);
    REQUIRE(mats.size() == 8);
    CHECK(exactly_equal(mats[0], rmat({{0, 0, 0}, {0, -1, 0}, {0, 0, 0}})));
    CHECK(exactly_equal(mats[1], rmat({{0, 0, 0}, {-1, -1, 0}, {0, 0, 0}})));
    CHECK(exactly_equal(mats[2], mats[0]));
    CHECK(exactly_equal(mats[3], rmat({{-1, -1, 0}, {0, 0, 0}, {0, 0, 0}})));
    CHECK(exactly_equal(mats[4], rmat({{-1, 0, -1}, {0, 0, 0}, {0, 0, 0}})));
    CHECK(exactly_equal(mats[5], rmat({{-1, 0, 0}, {0, 0, 0}, {0, 0, 0}})));
    CHECK(exactly_equal(mats[6], rmat({{-1, 0, 0}, {0, 0, 0}, {1, 0, 0}})));
    CHECK(exactly_equal(mats[7], rmat({{0, 0, 0}, {0, 0, 0}, {0, 0, -1}})));
    for (const auto& f : rs.factors) CHECK(f.wtv == -1);

    // The reduced Jacobian inherits the sign pattern: sum of the factors has
    // zeros at (2,3) and (3,2) and a lone positive entry at (3,1).
    RatMatrix sum = rat_zeros(3, 3);
    for (const auto& m : mats) sum += m;
    CHECK(sum(1, 2) == 0);
    CHECK(sum(2, 1) == 0);
    CHECK(sum(2, 0) > 0);
    CHECK(sum(0, 0) < 0);
    CHECK(sum(1, 1) < 0);
    CHECK(sum(2, 2) < 0);
}

TEST_CASE("reduction structural invariants") {
    for (const auto names :
         {std::vector<std::string>{"L", "K", "P"}, std::vector<std::string>{}}) {
        const auto rs = names.empty() ? build_reduction(ptm_open())
                                      : build_reduction(ptm_open(), names);
        // Conservation rows of T annihilate gamma.
        const RatMatrix tg = rs.t * rs.gamma;
        for (int i = 0; i < rs.c(); ++i)
            for (Eigen::Index j = 0; j < tg.cols(); ++j) CHECK(tg(i, j) == 0);
        CHECK(exactly_equal(RatMatrix(rs.t * rs.t_inv), rat_identity(6)));
        // gamma_r is the independent rows of gamma in order.
        for (int r = 0; r < rs.d(); ++r)
            for (Eigen::Index j = 0; j < rs.gamma.cols(); ++j)
                CHECK(rs.gamma_r(r, j) == rs.gamma(rs.independent[r], j));
        // Each factor reconstructs from its definition.
        const auto mats = rank_one_matrices(rs);
        for (size_t l = 0; l < rs.factors.size(); ++l) {
            const auto& f = rs.factors[l];
            CHECK(rs.pairs[l] == std::make_pair(f.reaction, f.species));
            for (int r = 0; r < rs.d(); ++r)
                for (int col = 0; col < rs.d(); ++col)
                    CHECK(mats[l](r, col) == f.v(r) * f.w(col));
        }
    }
}

TEST_CASE("reduction of a single reversible binding") {
    const auto rs = build_reduction(parse_network("A <-> B\n"));
    CHECK(rs.c() == 1);
    CHECK(rs.d() == 1);
    CHECK(rs.independent == std::vector<int>{0});
    CHECK(exactly_equal(rs.gamma_r, rmat({{-1, 1}})));
    REQUIRE(rs.factors.size() == 2);
    // A's variational coefficient: w picks the free block of T^{-1}.
    CHECK(rs.factors[0].wtv == -1);
    CHECK(rs.factors[1].wtv == -1);
}

TEST_CASE("bad independent choices are rejected") {
    const Network net = ptm_open();
    CHECK_THROWS_AS(build_reduction(net, std::vector<std::string>{"L", "K"}),
                    BadCardinalityError);
    CHECK_THROWS_AS(build_reduction(net, std::vector<std::string>{"L", "K", "P", "S"}),
                    BadCardinalityError);
    // L, Rc, K cannot complete the conservation rows: e_Rc is dependent.
    try {
        build_reduction(net, std::vector<std::string>{"L", "Rc", "K"});
        FAIL("expected SingularTransformError");
    } catch (const SingularTransformError& e) {
        CHECK(e.rank == 5);
    }
    CHECK_THROWS_AS(build_reduction(net, std::vector<std::string>{"L", "K", "X"}),
                    std::invalid_argument);
    CHECK_THROWS_AS(build_reduction(net, std::vector<int>{0, 2, 9}), BadCardinalityError);
}
