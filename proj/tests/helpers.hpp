#pragma once

#include "nonosc/rat.hpp"

#include <initializer_list>
#include <random>
#include <vector>

// Small builders so expected matrices in tests read like the matrices they
// encode.
inline nonosc::RatMatrix rmat(std::initializer_list<std::initializer_list<long>> rows) {
    const auto nr = static_cast<Eigen::Index>(rows.size());
    const auto nc = static_cast<Eigen::Index>(rows.begin()->size());
    nonosc::RatMatrix m(nr, nc);
    Eigen::Index i = 0;
    for (const auto& row : rows) {
        Eigen::Index j = 0;
        for (const auto v : row) m(i, j++) = v;
        ++i;
    }
    return m;
}

inline nonosc::RatVector rvec(std::initializer_list<long> vals) {
    nonosc::RatVector v(static_cast<Eigen::Index>(vals.size()));
    Eigen::Index i = 0;
    for (const auto x : vals) v(i++) = x;
    return v;
}

// Deterministic random rationals for property tests.
struct RatRng {
    explicit RatRng(unsigned seed) : gen(seed) {}

    nonosc::Rat scalar(long lo = -5, long hi = 5, long maxden = 3) {
        std::uniform_int_distribution<long> num(lo, hi);
        std::uniform_int_distribution<long> den(1, maxden);
        return nonosc::Rat(num(gen)) / den(gen);
    }

    nonosc::RatMatrix matrix(Eigen::Index r, Eigen::Index c, long lo = -5, long hi = 5,
                             long maxden = 3) {
        nonosc::RatMatrix m(r, c);
        for (Eigen::Index i = 0; i < r; ++i)
            for (Eigen::Index j = 0; j < c; ++j) m(i, j) = scalar(lo, hi, maxden);
        return m;
    }

    nonosc::RatVector vector(Eigen::Index n, long lo = -5, long hi = 5, long maxden = 3) {
        nonosc::RatVector v(n);
        for (Eigen::Index i = 0; i < n; ++i) v(i) = scalar(lo, hi, maxden);
        return v;
    }

    long integer(long lo, long hi) {
        std::uniform_int_distribution<long> d(lo, hi);
        return d(gen);
    }

    double real(double lo, double hi) {
        std::uniform_real_distribution<double> d(lo, hi);
        return d(gen);
    }

    std::mt19937 gen;
};

// Independent matrix-exponential oracle: scaling and squaring around a plain
// Taylor sum. Accurate to well below 1e-9 for the moderate norms used in
// tests.
inline Eigen::MatrixXd expm_oracle(const Eigen::MatrixXd& a) {
    const double norm = a.cwiseAbs().rowwise().sum().maxCoeff();
    int s = 0;
    while ((norm / std::pow(2.0, s)) > 0.5) ++s;
    const Eigen::MatrixXd m = a / std::pow(2.0, s);
    Eigen::MatrixXd sum = Eigen::MatrixXd::Identity(a.rows(), a.cols());
    Eigen::MatrixXd term = sum;
    for (int k = 1; k <= 20; ++k) {
        term = (term * m) / k;
        sum += term;
    }
    for (int k = 0; k < s; ++k) sum = sum * sum;
    return sum;
}

// Second multiplicative compound: matrix of 2x2 minors on lexicographic
// index pairs.
inline Eigen::MatrixXd mult_compound2(const Eigen::MatrixXd& m) {
    const int n = static_cast<int>(m.rows());
    std::vector<std::pair<int, int>> pairs;
    for (int p = 0; p < n; ++p)
        for (int q = p + 1; q < n; ++q) pairs.emplace_back(p, q);
    const int N = static_cast<int>(pairs.size());
    Eigen::MatrixXd out(N, N);
    for (int a = 0; a < N; ++a)
        for (int b = 0; b < N; ++b) {
            const auto [p, q] = pairs[a];
            const auto [r, s] = pairs[b];
            out(a, b) = m(p, r) * m(q, s) - m(p, s) * m(q, r);
        }
    return out;
}

// Corrected stoichiometry matrix of the open phosphorylation network
// (species L, Rc, K, S, C, P; reactions L+Rc<->K, S+K<->C, C->P+K, P->S).
// Used across test files as a fixed medium-size exact matrix.
inline nonosc::RatMatrix ptm_open_gamma() {
    return rmat({{-1, 1, 0, 0, 0, 0},
                 {-1, 1, 0, 0, 0, 0},
                 {1, -1, -1, 1, 1, 0},
                 {0, 0, -1, 1, 0, 1},
                 {0, 0, 1, -1, -1, 0},
                 {0, 0, 0, 0, 1, -1}});
}
