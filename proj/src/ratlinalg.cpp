#include "nonosc/ratlinalg.hpp"

#include <algorithm>
#include <cstddef>

namespace nonosc {

namespace {

// Reduced row echelon form in place, plain rational elimination. Returns the
// pivot columns in order.
std::vector<Eigen::Index> rref(RatMatrix& a) {
    std::vector<Eigen::Index> pivots;
    Eigen::Index pr = 0;
    for (Eigen::Index pc = 0; pc < a.cols() && pr < a.rows(); ++pc) {
        Eigen::Index piv = -1;
        for (Eigen::Index i = pr; i < a.rows(); ++i)
            if (a(i, pc) != 0) { piv = i; break; }
        if (piv < 0) continue;
        if (piv != pr)
            for (Eigen::Index j = 0; j < a.cols(); ++j) std::swap(a(piv, j), a(pr, j));
        const Rat p = a(pr, pc);
        for (Eigen::Index j = pc; j < a.cols(); ++j) a(pr, j) /= p;
        for (Eigen::Index i = 0; i < a.rows(); ++i) {
            if (i == pr || a(i, pc) == 0) continue;
            const Rat f = a(i, pc);
            for (Eigen::Index j = pc; j < a.cols(); ++j) a(i, j) -= f * a(pr, j);
        }
        pivots.push_back(pc);
        ++pr;
    }
    return pivots;
}

Rat dot(const RatVector& a, const RatVector& b) {
    Rat s = 0;
    for (Eigen::Index i = 0; i < a.size(); ++i) s += a(i) * b(i);
    return s;
}

bool lex_greater(const RatVector& a, const RatVector& b) {
    for (Eigen::Index i = 0; i < a.size(); ++i) {
        if (a(i) != b(i)) return a(i) > b(i);
    }
    return false;
}

}  // namespace

int rank(const RatMatrix& m) {
    const Eigen::Index rows = m.rows(), cols = m.cols();
    if (rows == 0 || cols == 0) return 0;
    // Integerize each row so the Bareiss divisions below are exact integer
    // divisions (row scaling does not change the rank).
    std::vector<std::vector<Int>> a(rows, std::vector<Int>(cols));
    for (Eigen::Index i = 0; i < rows; ++i) {
        Int l = 1;
        for (Eigen::Index j = 0; j < cols; ++j)
            l = lcm(l, Int(denominator(m(i, j))));
        for (Eigen::Index j = 0; j < cols; ++j)
            a[i][j] = Int(numerator(m(i, j) * Rat(l)));
    }
    Int prev = 1;
    int r = 0;
    Eigen::Index pr = 0;
    for (Eigen::Index pc = 0; pc < cols && pr < rows; ++pc) {
        Eigen::Index piv = -1;
        for (Eigen::Index i = pr; i < rows; ++i)
            if (a[i][pc] != 0) { piv = i; break; }
        if (piv < 0) continue;
        if (piv != pr) std::swap(a[piv], a[pr]);
        for (Eigen::Index i = pr + 1; i < rows; ++i) {
            for (Eigen::Index j = pc + 1; j < cols; ++j)
                a[i][j] = (a[i][j] * a[pr][pc] - a[i][pc] * a[pr][j]) / prev;
            a[i][pc] = 0;
        }
        prev = a[pr][pc];
        ++pr;
        ++r;
    }
    return r;
}

std::vector<RatVector> kernel_basis(const RatMatrix& m) {
    RatMatrix a = m;
    const auto pivots = rref(a);
    const Eigen::Index n = m.cols();
    std::vector<bool> is_pivot(static_cast<size_t>(n), false);
    for (const auto c : pivots) is_pivot[static_cast<size_t>(c)] = true;
    std::vector<RatVector> basis;
    for (Eigen::Index fc = 0; fc < n; ++fc) {
        if (is_pivot[static_cast<size_t>(fc)]) continue;
        RatVector v = rat_zero_vector(n);
        v(fc) = 1;
        for (size_t k = 0; k < pivots.size(); ++k)
            v(pivots[k]) = -a(static_cast<Eigen::Index>(k), fc);
        v = integerize(v);
        for (Eigen::Index i = 0; i < n; ++i) {
            if (v(i) == 0) continue;
            if (v(i) < 0)
                for (Eigen::Index j = 0; j < n; ++j) v(j) = -v(j);
            break;
        }
        basis.push_back(v);
    }
    return basis;
}

std::vector<RatVector> nonneg_kernel_rays(const RatMatrix& m) {
    const Eigen::Index n = m.cols();
    std::vector<RatVector> rays;
    rays.reserve(static_cast<size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) rays.push_back(rat_unit_vector(n, i));

    // Zero coordinate sets for the combinatorial adjacency test.
    auto zero_set = [n](const RatVector& r) {
        std::vector<char> z(static_cast<size_t>(n));
        for (Eigen::Index i = 0; i < n; ++i) z[static_cast<size_t>(i)] = (r(i) == 0);
        return z;
    };

    for (Eigen::Index row = 0; row < m.rows(); ++row) {
        RatVector a(n);
        for (Eigen::Index j = 0; j < n; ++j) a(j) = m(row, j);

        std::vector<RatVector> zero, plus, minus;
        for (const auto& r : rays) {
            const Rat s = dot(a, r);
            if (s == 0) zero.push_back(r);
            else if (s > 0) plus.push_back(r);
            else minus.push_back(r);
        }
        if (plus.empty() && minus.empty()) continue;

        std::vector<std::vector<char>> zsets;
        zsets.reserve(rays.size());
        for (const auto& r : rays) zsets.push_back(zero_set(r));

        auto adjacent = [&](const RatVector& p, const RatVector& q) {
            const auto zp = zero_set(p), zq = zero_set(q);
            for (size_t u = 0; u < rays.size(); ++u) {
                if (exactly_equal(rays[u], p) || exactly_equal(rays[u], q)) continue;
                bool contains = true;
                for (size_t i = 0; i < zp.size(); ++i) {
                    if (zp[i] && zq[i] && !zsets[u][i]) { contains = false; break; }
                }
                if (contains) return false;
            }
            return true;
        };

        std::vector<RatVector> next = zero;
        for (const auto& p : plus) {
            for (const auto& q : minus) {
                if (!adjacent(p, q)) continue;
                const Rat sp = dot(a, p), sq = dot(a, q);
                RatVector comb(n);
                for (Eigen::Index i = 0; i < n; ++i) comb(i) = sp * q(i) - sq * p(i);
                comb = integerize(comb);
                bool dup = false;
                for (const auto& r : next)
                    if (exactly_equal(r, comb)) { dup = true; break; }
                if (!dup) next.push_back(comb);
            }
        }
        rays = std::move(next);
    }
    std::sort(rays.begin(), rays.end(), lex_greater);
    return rays;
}

RatMatrix invert(const RatMatrix& m) {
    if (m.rows() != m.cols())
        throw SingularMatrixError("invert: matrix is not square", rank(m));
    const Eigen::Index n = m.rows();
    RatMatrix aug = rat_zeros(n, 2 * n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) aug(i, j) = m(i, j);
        aug(i, n + i) = 1;
    }
    const auto pivots = rref(aug);
    int r = 0;
    for (const auto c : pivots)
        if (c < n) ++r;
    if (r < n)
        throw SingularMatrixError(
            "invert: singular matrix of rank " + std::to_string(r), r);
    RatMatrix inv(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) inv(i, j) = aug(i, n + j);
    return inv;
}

namespace {

// Phase-1 simplex with Bland's rule deciding feasibility of
// {lambda >= 0 : A lambda = b}; columns of A are the generators. Exact
// rational pivoting throughout.
std::optional<RatVector> phase1(const std::vector<RatVector>& cols, const RatVector& b0) {
    const Eigen::Index n = b0.size();
    const size_t m = cols.size();
    for (const auto& c : cols)
        if (c.size() != n)
            throw std::invalid_argument("membership: generator dimension mismatch");

    // Tableau rows: [A | I | b] with b made nonnegative; basis starts as the
    // artificial block. Column indices: 0..m-1 generators, m..m+n-1 artificials.
    const size_t ncols = m + static_cast<size_t>(n) + 1;
    std::vector<std::vector<Rat>> t(static_cast<size_t>(n), std::vector<Rat>(ncols, Rat(0)));
    for (Eigen::Index i = 0; i < n; ++i) {
        const bool flip = b0(i) < 0;
        for (size_t j = 0; j < m; ++j)
            t[static_cast<size_t>(i)][j] = flip ? -cols[j](i) : cols[j](i);
        t[static_cast<size_t>(i)][m + static_cast<size_t>(i)] = 1;
        t[static_cast<size_t>(i)][ncols - 1] = flip ? -b0(i) : b0(i);
    }
    std::vector<size_t> basis(static_cast<size_t>(n));
    for (size_t i = 0; i < basis.size(); ++i) basis[i] = m + i;

    // Reduced cost row for minimizing the artificial sum; obj tracks the
    // (negated) objective so the loop only does tableau updates.
    std::vector<Rat> z(ncols - 1, Rat(0));
    Rat obj = 0;
    for (size_t i = 0; i < basis.size(); ++i) {
        for (size_t j = 0; j < m; ++j) z[j] -= t[i][j];
        obj -= t[i][ncols - 1];
    }

    while (true) {
        // Bland: entering variable is the lowest-index negative reduced cost.
        size_t enter = ncols;
        for (size_t j = 0; j + 1 < ncols; ++j)
            if (z[j] < 0) { enter = j; break; }
        if (enter == ncols) break;

        // Ratio test; ties resolved by the smallest basic variable index.
        size_t leave = basis.size();
        Rat best = 0;
        for (size_t i = 0; i < basis.size(); ++i) {
            if (t[i][enter] <= 0) continue;
            const Rat ratio = t[i][ncols - 1] / t[i][enter];
            if (leave == basis.size() || ratio < best ||
                (ratio == best && basis[i] < basis[leave])) {
                leave = i;
                best = ratio;
            }
        }
        if (leave == basis.size()) break;  // unbounded; cannot happen in phase 1

        const Rat piv = t[leave][enter];
        for (size_t j = 0; j < ncols; ++j) t[leave][j] /= piv;
        for (size_t i = 0; i < t.size(); ++i) {
            if (i == leave || t[i][enter] == 0) continue;
            const Rat f = t[i][enter];
            for (size_t j = 0; j < ncols; ++j) t[i][j] -= f * t[leave][j];
        }
        const Rat fz = z[enter];
        if (fz != 0) {
            for (size_t j = 0; j + 1 < ncols; ++j) z[j] -= fz * t[leave][j];
            obj -= fz * t[leave][ncols - 1];
        }
        basis[leave] = enter;
    }

    if (obj != 0) return std::nullopt;  // artificial sum positive: infeasible
    RatVector lambda = rat_zero_vector(static_cast<Eigen::Index>(m));
    for (size_t i = 0; i < basis.size(); ++i)
        if (basis[i] < m) lambda(static_cast<Eigen::Index>(basis[i])) = t[i][ncols - 1];
    return lambda;
}

}  // namespace

std::optional<RatVector> conic_membership(const RatVector& d,
                                          const std::vector<RatVector>& gens) {
    if (is_zero(d)) return rat_zero_vector(static_cast<Eigen::Index>(gens.size()));
    return phase1(gens, d);
}

std::optional<RatVector> convex_membership(const RatVector& d,
                                           const std::vector<RatVector>& points) {
    const Eigen::Index n = d.size();
    std::vector<RatVector> cols;
    cols.reserve(points.size());
    for (const auto& p : points) {
        if (p.size() != n)
            throw std::invalid_argument("membership: generator dimension mismatch");
        RatVector c(n + 1);
        for (Eigen::Index i = 0; i < n; ++i) c(i) = p(i);
        c(n) = 1;
        cols.push_back(c);
    }
    RatVector dd(n + 1);
    for (Eigen::Index i = 0; i < n; ++i) dd(i) = d(i);
    dd(n) = 1;
    return phase1(cols, dd);
}

}  // namespace nonosc
