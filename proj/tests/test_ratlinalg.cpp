#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "nonosc/ratlinalg.hpp"

#include "helpers.hpp"

using namespace nonosc;

namespace {

RatMatrix mat_from_cols(const std::vector<RatVector>& cols) {
    RatMatrix m(cols.empty() ? 0 : cols[0].size(), static_cast<Eigen::Index>(cols.size()));
    for (size_t j = 0; j < cols.size(); ++j)
        for (Eigen::Index i = 0; i < m.rows(); ++i) m(i, static_cast<Eigen::Index>(j)) = cols[j](i);
    return m;
}

RatVector apply(const RatMatrix& m, const RatVector& v) {
    RatVector out = rat_zero_vector(m.rows());
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) out(i) += m(i, j) * v(j);
    return out;
}

}  // namespace

TEST_CASE("rank on fixed matrices") {
    CHECK(rank(rat_identity(3)) == 3);
    CHECK(rank(rat_zeros(2, 4)) == 0);
    // This matrix and its square show up again as an instability witness: the
    // square loses rank, so zero is a defective eigenvalue.
    const RatMatrix m = rmat({{0, 0, 0}, {-1, -2, 0}, {-1, -1, 0}});
    CHECK(rank(m) == 2);
    const RatMatrix m2 = rmat({{0, 0, 0}, {2, 4, 0}, {1, 2, 0}});
    CHECK(rank(m2) == 1);
    CHECK(exactly_equal(RatMatrix(m * m), m2));
    CHECK(rank(ptm_open_gamma()) == 3);
}

TEST_CASE("rank equals transpose rank and pairs with kernel dimension") {
    RatRng rng(17);
    for (int trial = 0; trial < 40; ++trial) {
        const auto r = rng.integer(1, 6), c = rng.integer(1, 6);
        const RatMatrix m = rng.matrix(r, c);
        const RatMatrix mt = m.transpose();
        const int rk = rank(m);
        CHECK(rank(mt) == rk);
        const auto kb = kernel_basis(m);
        CHECK(static_cast<int>(kb.size()) == static_cast<int>(c) - rk);
        for (const auto& v : kb) CHECK(is_zero(apply(m, v)));
    }
}

TEST_CASE("kernel basis on fixed matrices") {
    CHECK(kernel_basis(rat_identity(4)).empty());
    const auto kb = kernel_basis(rmat({{1, 1}}));
    REQUIRE(kb.size() == 1);
    CHECK(exactly_equal(kb[0], rvec({1, -1})));

    // Conservation space of the open phosphorylation network: the three known
    // conserved totals must lie in the computed kernel of gamma^T.
    const RatMatrix gt = ptm_open_gamma().transpose();
    const auto cons = kernel_basis(gt);
    REQUIRE(cons.size() == 3);
    for (const auto known : {rvec({1, 0, 1, 0, 1, 0}), rvec({0, 1, 1, 0, 1, 0}),
                             rvec({0, 0, 0, 1, 1, 1})}) {
        std::vector<RatVector> gens;
        for (const auto& v : cons) {
            gens.push_back(v);
            RatVector neg = v;
            for (Eigen::Index i = 0; i < neg.size(); ++i) neg(i) = -neg(i);
            gens.push_back(neg);
        }
        CHECK(conic_membership(known, gens).has_value());
    }
}

TEST_CASE("nonnegative kernel rays on fixed matrices") {
    const auto r1 = nonneg_kernel_rays(rmat({{1, -1}}));
    REQUIRE(r1.size() == 1);
    CHECK(exactly_equal(r1[0], rvec({1, 1})));

    CHECK(nonneg_kernel_rays(rat_identity(3)).empty());

    const auto rays = nonneg_kernel_rays(ptm_open_gamma().transpose());
    REQUIRE(rays.size() == 3);
    CHECK(exactly_equal(rays[0], rvec({1, 0, 1, 0, 1, 0})));
    CHECK(exactly_equal(rays[1], rvec({0, 1, 1, 0, 1, 0})));
    CHECK(exactly_equal(rays[2], rvec({0, 0, 0, 1, 1, 1})));

    // A cone with more extreme rays than its dimension.
    const auto r4 = nonneg_kernel_rays(rmat({{1, 1, -1, -1}}));
    REQUIRE(r4.size() == 4);
    CHECK(exactly_equal(r4[0], rvec({1, 0, 1, 0})));
    CHECK(exactly_equal(r4[1], rvec({1, 0, 0, 1})));
    CHECK(exactly_equal(r4[2], rvec({0, 1, 1, 0})));
    CHECK(exactly_equal(r4[3], rvec({0, 1, 0, 1})));
}

TEST_CASE("ray properties on random matrices") {
    RatRng rng(23);
    for (int trial = 0; trial < 25; ++trial) {
        const auto r = rng.integer(1, 4), c = rng.integer(2, 6);
        const RatMatrix m = rng.matrix(r, c, -3, 3, 2);
        const auto rays = nonneg_kernel_rays(m);
        for (size_t a = 0; a < rays.size(); ++a) {
            CHECK(is_zero(apply(m, rays[a])));
            for (Eigen::Index i = 0; i < rays[a].size(); ++i) CHECK(rays[a](i) >= 0);
            // Extremality: no ray is a conic combination of the others.
            std::vector<RatVector> others;
            for (size_t b = 0; b < rays.size(); ++b)
                if (b != a) others.push_back(rays[b]);
            CHECK_FALSE(conic_membership(rays[a], others).has_value());
        }
        // Random nonnegative combinations stay inside the cone.
        if (!rays.empty()) {
            RatVector combo = rat_zero_vector(c);
            for (const auto& ray : rays) {
                const Rat w = Rat(rng.integer(0, 3));
                for (Eigen::Index i = 0; i < c; ++i) combo(i) += w * ray(i);
            }
            const auto lam = conic_membership(combo, rays);
            REQUIRE(lam.has_value());
            CHECK(exactly_equal(apply(mat_from_cols(rays), *lam), combo));
        }
    }
}

TEST_CASE("invert on fixed matrices") {
    CHECK(exactly_equal(invert(rat_identity(5)), rat_identity(5)));

    RatMatrix half = rat_zeros(1, 1);
    half(0, 0) = 2;
    CHECK(invert(half)(0, 0) == Rat(1) / 2);

    // Coordinate transform of the open phosphorylation network: conserved
    // totals stacked over unit rows for L, K, P.
    const RatMatrix t = rmat({{1, 0, 1, 0, 1, 0},
                              {0, 1, 1, 0, 1, 0},
                              {0, 0, 0, 1, 1, 1},
                              {1, 0, 0, 0, 0, 0},
                              {0, 0, 1, 0, 0, 0},
                              {0, 0, 0, 0, 0, 1}});
    const RatMatrix tinv = invert(t);
    CHECK(exactly_equal(RatMatrix(t * tinv), rat_identity(6)));
    const RatMatrix expected = rmat({{0, 0, 0, 1, 0, 0},
                                     {-1, 1, 0, 1, 0, 0},
                                     {0, 0, 0, 0, 1, 0},
                                     {-1, 0, 1, 1, 1, -1},
                                     {1, 0, 0, -1, -1, 0},
                                     {0, 0, 0, 0, 0, 1}});
    CHECK(exactly_equal(tinv, expected));
}

TEST_CASE("invert reports rank of singular input") {
    const RatMatrix s = rmat({{1, 2}, {2, 4}});
    try {
        invert(s);
        FAIL("expected SingularMatrixError");
    } catch (const SingularMatrixError& e) {
        CHECK(e.rank == 1);
    }
    try {
        invert(rat_zeros(2, 3));
        FAIL("expected SingularMatrixError");
    } catch (const SingularMatrixError& e) {
        CHECK(e.rank == 0);
    }
}

TEST_CASE("invert roundtrip on random nonsingular matrices") {
    RatRng rng(31);
    int done = 0;
    while (done < 20) {
        const auto n = rng.integer(1, 8);
        const RatMatrix m = rng.matrix(n, n);
        if (rank(m) < n) continue;
        const RatMatrix mi = invert(m);
        CHECK(exactly_equal(RatMatrix(m * mi), rat_identity(n)));
        CHECK(exactly_equal(RatMatrix(mi * m), rat_identity(n)));
        ++done;
    }
}

TEST_CASE("conic membership") {
    const std::vector<RatVector> quad = {rvec({1, 0}), rvec({0, 1})};
    const auto lam = conic_membership(rvec({3, 2}), quad);
    REQUIRE(lam.has_value());
    CHECK((*lam)(0) == 3);
    CHECK((*lam)(1) == 2);
    CHECK_FALSE(conic_membership(rvec({-1, 0}), quad).has_value());
    // The zero vector is in every cone, even the one with no generators.
    CHECK(conic_membership(rvec({0, 0}), {}).has_value());
    CHECK_FALSE(conic_membership(rvec({1, 0}), {}).has_value());
}

TEST_CASE("conic membership certificate reproduces the target") {
    RatRng rng(43);
    for (int trial = 0; trial < 30; ++trial) {
        const auto n = rng.integer(1, 4);
        const auto g = rng.integer(1, 6);
        std::vector<RatVector> gens;
        for (long k = 0; k < g; ++k) gens.push_back(rng.vector(n));
        const RatVector d = rng.vector(n);
        const auto lam = conic_membership(d, gens);
        if (!lam.has_value()) continue;
        for (Eigen::Index i = 0; i < lam->size(); ++i) CHECK((*lam)(i) >= 0);
        CHECK(exactly_equal(apply(mat_from_cols(gens), *lam), d));
    }
}

TEST_CASE("convex membership") {
    const std::vector<RatVector> seg = {rvec({1, 0}), rvec({0, 1})};
    RatVector mid(2);
    mid(0) = Rat(1) / 2;
    mid(1) = Rat(1) / 2;
    CHECK(convex_membership(mid, seg).has_value());
    CHECK(convex_membership(rvec({1, 0}), seg).has_value());
    CHECK_FALSE(convex_membership(rvec({2, 0}), seg).has_value());
    CHECK_FALSE(convex_membership(rvec({0, 0}), seg).has_value());
    CHECK_FALSE(convex_membership(rvec({0}), {}).has_value());
    // Interior point of a square, weights must sum to one.
    const std::vector<RatVector> square = {rvec({1, 1}), rvec({1, -1}), rvec({-1, 1}),
                                           rvec({-1, -1})};
    const auto lam = convex_membership(rvec({0, 0}), square);
    REQUIRE(lam.has_value());
    Rat sum = 0;
    for (Eigen::Index i = 0; i < lam->size(); ++i) sum += (*lam)(i);
    CHECK(sum == 1);
}
