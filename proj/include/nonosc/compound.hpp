#pragma once

#include "nonosc/rat.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace nonosc {

class BadKError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class NotStrictlyStableError : public std::runtime_error {
public:
    NotStrictlyStableError(const std::string& what, Rat wtv_value)
        : std::runtime_error(what), wtv(std::move(wtv_value)) {}
    Rat wtv;
};

// Lexicographically ordered k-element subsets of {0..m-1}; the row/column
// index space of the k-th compound.
class PairIndexMap {
public:
    PairIndexMap(int m, int k);

    int m() const { return m_; }
    int k() const { return k_; }
    Eigen::Index size() const { return static_cast<Eigen::Index>(subsets_.size()); }
    const std::vector<int>& subset(Eigen::Index idx) const {
        return subsets_[static_cast<size_t>(idx)];
    }
    // -1 when the (ascending) subset is not one of ours.
    Eigen::Index index_of(const std::vector<int>& s) const;

private:
    int m_, k_;
    std::vector<std::vector<int>> subsets_;
};

// k-th additive compound by the elementwise rule: diagonal entries sum the
// selected diagonal of A, entries whose subsets differ in one element pick a
// single signed entry of A, everything else is zero. Templated so the
// simulator can run it on doubles.
template <typename Mat>
Mat additive_compound_with(const Mat& a, const PairIndexMap& pim) {
    using Scalar = typename Mat::Scalar;
    const Eigen::Index n = pim.size();
    Mat out(n, n);
    for (Eigen::Index bi = 0; bi < n; ++bi) {
        const auto& I = pim.subset(bi);
        for (Eigen::Index bj = 0; bj < n; ++bj) {
            const auto& J = pim.subset(bj);
            // Merged scan for I \ J and J \ I with positions.
            int only_i = -1, only_j = -1, pos_i = -1, pos_j = -1, extra = 0;
            {
                size_t p = 0, q = 0;
                while (p < I.size() || q < J.size()) {
                    if (p < I.size() && q < J.size() && I[p] == J[q]) {
                        ++p;
                        ++q;
                    } else if (q == J.size() || (p < I.size() && I[p] < J[q])) {
                        if (only_i < 0) {
                            only_i = I[p];
                            pos_i = static_cast<int>(p);
                        } else {
                            ++extra;
                        }
                        ++p;
                    } else {
                        if (only_j < 0) {
                            only_j = J[q];
                            pos_j = static_cast<int>(q);
                        } else {
                            ++extra;
                        }
                        ++q;
                    }
                }
            }
            if (only_i < 0 && only_j < 0) {
                Scalar s = Scalar(0);
                for (const int i : I) s += a(i, i);
                out(bi, bj) = s;
            } else if (extra == 0 && only_i >= 0 && only_j >= 0) {
                const Scalar e = a(only_i, only_j);
                out(bi, bj) = ((pos_i + pos_j) % 2 == 0) ? e : Scalar(-e);
            } else {
                out(bi, bj) = Scalar(0);
            }
        }
    }
    return out;
}

// Throws BadKError unless 1 <= k <= rows(a); a must be square.
RatMatrix additive_compound(const RatMatrix& a, int k);
Eigen::MatrixXd additive_compound(const Eigen::MatrixXd& a, int k);

// Limit projection of e^{v w^T t} as t -> infinity: I - v w^T / (w^T v).
// Requires strict stability w^T v < 0; throws NotStrictlyStableError
// (carrying w^T v) otherwise.
RatMatrix rank_one_projection(const RatVector& v, const RatVector& w);

// Same limit for the second-compound flow: I - (v w^T)^(2) / (w^T v). The
// identity ((v w^T)^(2))^2 = (w^T v) (v w^T)^(2) makes this a projection.
RatMatrix rank_one_compound_projection(const RatVector& v, const RatVector& w);

// Closed-form e^{v w^T t} in doubles: I + v w^T (e^{(w^T v) t} - 1)/(w^T v),
// continued as I + t v w^T when w^T v = 0.
Eigen::MatrixXd rank_one_expm(const RatVector& v, const RatVector& w, double t);

}  // namespace nonosc
