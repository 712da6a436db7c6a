#include "nonosc/compound.hpp"

#include <cmath>
#include <numeric>

namespace nonosc {

PairIndexMap::PairIndexMap(int m, int k) : m_(m), k_(k) {
    if (k < 1 || k > m)
        throw BadKError("compound order " + std::to_string(k) +
                        " outside 1.." + std::to_string(m));
    std::vector<int> cur(static_cast<size_t>(k));
    std::iota(cur.begin(), cur.end(), 0);
    while (true) {
        subsets_.push_back(cur);
        // Advance to the next ascending k-subset in lexicographic order.
        int i = k - 1;
        while (i >= 0 && cur[static_cast<size_t>(i)] == m - k + i) --i;
        if (i < 0) break;
        ++cur[static_cast<size_t>(i)];
        for (int j = i + 1; j < k; ++j)
            cur[static_cast<size_t>(j)] = cur[static_cast<size_t>(j - 1)] + 1;
    }
}

Eigen::Index PairIndexMap::index_of(const std::vector<int>& s) const {
    for (size_t i = 0; i < subsets_.size(); ++i)
        if (subsets_[i] == s) return static_cast<Eigen::Index>(i);
    return -1;
}

RatMatrix additive_compound(const RatMatrix& a, int k) {
    if (a.rows() != a.cols())
        throw BadKError("additive compound needs a square matrix");
    const PairIndexMap pim(static_cast<int>(a.rows()), k);
    return additive_compound_with(a, pim);
}

Eigen::MatrixXd additive_compound(const Eigen::MatrixXd& a, int k) {
    if (a.rows() != a.cols())
        throw BadKError("additive compound needs a square matrix");
    const PairIndexMap pim(static_cast<int>(a.rows()), k);
    return additive_compound_with(a, pim);
}

namespace {

Rat dot(const RatVector& a, const RatVector& b) {
    Rat s = 0;
    for (Eigen::Index i = 0; i < a.size(); ++i) s += a(i) * b(i);
    return s;
}

Rat checked_wtv(const RatVector& v, const RatVector& w) {
    if (v.size() != w.size())
        throw std::invalid_argument("rank-one factor dimension mismatch");
    const Rat wtv = dot(w, v);
    if (wtv >= 0)
        throw NotStrictlyStableError(
            "rank-one factor is not strictly stable: w^T v = " + wtv.str(), wtv);
    return wtv;
}

}  // namespace

RatMatrix rank_one_projection(const RatVector& v, const RatVector& w) {
    const Rat wtv = checked_wtv(v, w);
    const Eigen::Index d = v.size();
    RatMatrix p = rat_identity(d);
    for (Eigen::Index i = 0; i < d; ++i)
        for (Eigen::Index j = 0; j < d; ++j) p(i, j) -= v(i) * w(j) / wtv;
    return p;
}

RatMatrix rank_one_compound_projection(const RatVector& v, const RatVector& w) {
    const Rat wtv = checked_wtv(v, w);
    const Eigen::Index d = v.size();
    RatMatrix a(d, d);
    for (Eigen::Index i = 0; i < d; ++i)
        for (Eigen::Index j = 0; j < d; ++j) a(i, j) = v(i) * w(j);
    const RatMatrix a2 = additive_compound(a, 2);
    RatMatrix p = rat_identity(a2.rows());
    for (Eigen::Index i = 0; i < a2.rows(); ++i)
        for (Eigen::Index j = 0; j < a2.cols(); ++j) p(i, j) -= a2(i, j) / wtv;
    return p;
}

Eigen::MatrixXd rank_one_expm(const RatVector& v, const RatVector& w, double t) {
    if (v.size() != w.size())
        throw std::invalid_argument("rank-one factor dimension mismatch");
    const Rat wtv = dot(w, v);
    const Eigen::Index d = v.size();
    const Eigen::VectorXd vd = to_double(v);
    const Eigen::VectorXd wd = to_double(w);
    double scale;
    if (wtv == 0) {
        scale = t;
    } else {
        const double mu = to_double(wtv);
        scale = (std::exp(mu * t) - 1.0) / mu;
    }
    return Eigen::MatrixXd::Identity(d, d) + scale * (vd * wd.transpose());
}

}  // namespace nonosc
