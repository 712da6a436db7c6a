#include "nonosc/stoich.hpp"

#include "nonosc/ratlinalg.hpp"

#include <algorithm>

namespace nonosc {

bool ConservationBasis::conservative(int n_species) const {
    std::vector<bool> covered(static_cast<size_t>(n_species), false);
    for (const auto& r : rays)
        for (Eigen::Index i = 0; i < r.size(); ++i)
            if (r(i) > 0) covered[static_cast<size_t>(i)] = true;
    for (const bool b : covered)
        if (!b) return false;
    return true;
}

namespace {

RatMatrix stack_rows(const std::vector<RatVector>& rows, Eigen::Index ncols) {
    RatMatrix m(static_cast<Eigen::Index>(rows.size()), ncols);
    for (size_t i = 0; i < rows.size(); ++i)
        for (Eigen::Index j = 0; j < ncols; ++j)
            m(static_cast<Eigen::Index>(i), j) = rows[i](j);
    return m;
}

}  // namespace

ConservationBasis conservation_laws(const RatMatrix& gamma) {
    const RatMatrix gt = gamma.transpose();
    ConservationBasis cb;
    cb.rays = nonneg_kernel_rays(gt);
    const auto kb = kernel_basis(gt);
    const int c = static_cast<int>(kb.size());

    // Prefer rays as basis vectors; greedy in ray order keeps the result
    // deterministic. Complete from the general kernel basis if needed.
    std::vector<RatVector> chosen;
    auto try_add = [&](const RatVector& v) {
        if (static_cast<int>(chosen.size()) == c) return;
        std::vector<RatVector> cand = chosen;
        cand.push_back(v);
        if (rank(stack_rows(cand, gamma.rows())) == static_cast<int>(cand.size()))
            chosen = std::move(cand);
    };
    for (const auto& r : cb.rays) try_add(r);
    for (const auto& v : kb) try_add(v);
    cb.basis = std::move(chosen);
    return cb;
}

namespace {

ReducedSystem build_reduction_impl(const Network& net, std::vector<int> independent,
                                   bool auto_select) {
    ReducedSystem rs;
    rs.net = net;
    rs.gamma = stoichiometry_matrix(net);
    rs.cons = conservation_laws(rs.gamma);
    const int n = rs.n();
    const int c = rs.c();
    const int d = n - c;

    std::vector<RatVector> rows;
    for (const auto& b : rs.cons.basis) rows.push_back(b);

    if (auto_select) {
        // Lexicographically first subset of species indices that completes
        // the conservation rows to a nonsingular T; greedy by index is exact
        // here because independence is a matroid condition.
        for (int i = 0; i < n && static_cast<int>(independent.size()) < d; ++i) {
            std::vector<RatVector> cand = rows;
            cand.push_back(rat_unit_vector(n, i));
            if (rank(stack_rows(cand, n)) == static_cast<int>(cand.size())) {
                rows = std::move(cand);
                independent.push_back(i);
            }
        }
        if (static_cast<int>(independent.size()) < d)
            throw SingularTransformError(
                "auto-selection failed to complete the transform",
                rank(stack_rows(rows, n)));
    } else {
        if (static_cast<int>(independent.size()) != d)
            throw BadCardinalityError(
                "independent species list has " + std::to_string(independent.size()) +
                " entries, expected " + std::to_string(d));
        for (const int i : independent) {
            if (i < 0 || i >= n)
                throw BadCardinalityError("independent species index out of range");
            rows.push_back(rat_unit_vector(n, i));
        }
    }

    rs.independent = std::move(independent);
    rs.t = stack_rows(rows, n);
    const int tr = rank(rs.t);
    if (tr < n)
        throw SingularTransformError(
            "transform T is singular (rank " + std::to_string(tr) + " of " +
                std::to_string(n) + ")",
            tr);
    rs.t_inv = invert(rs.t);

    const RatMatrix tg = rs.t * rs.gamma;
    rs.gamma_r = RatMatrix(tg.block(c, 0, d, rs.gamma.cols()));

    rs.pairs = reactant_pairs(net);
    for (const auto& [j, i] : rs.pairs) {
        RankOneFactor f;
        f.reaction = j;
        f.species = i;
        f.v = RatVector(d);
        for (int r = 0; r < d; ++r) f.v(r) = rs.gamma_r(r, j);
        f.w = RatVector(d);
        for (int col = 0; col < d; ++col) f.w(col) = rs.t_inv(i, c + col);
        f.wtv = 0;
        for (int r = 0; r < d; ++r) f.wtv += f.w(r) * f.v(r);
        rs.factors.push_back(std::move(f));
    }
    return rs;
}

}  // namespace

ReducedSystem build_reduction(const Network& net, const std::vector<int>& independent) {
    return build_reduction_impl(net, independent, independent.empty());
}

ReducedSystem build_reduction(const Network& net,
                              const std::vector<std::string>& independent_names) {
    std::vector<int> idx;
    for (const auto& name : independent_names) {
        const int i = net.species_index(name);
        if (i < 0)
            throw std::invalid_argument("unknown species in independent list: " + name);
        idx.push_back(i);
    }
    return build_reduction_impl(net, idx, idx.empty());
}

std::vector<RatMatrix> rank_one_matrices(const ReducedSystem& rs) {
    std::vector<RatMatrix> mats;
    mats.reserve(rs.factors.size());
    for (const auto& f : rs.factors) {
        RatMatrix a(rs.d(), rs.d());
        for (int r = 0; r < rs.d(); ++r)
            for (int col = 0; col < rs.d(); ++col) a(r, col) = f.v(r) * f.w(col);
        mats.push_back(std::move(a));
    }
    return mats;
}

}  // namespace nonosc
