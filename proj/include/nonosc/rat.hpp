#pragma once

#include <boost/multiprecision/gmp.hpp>
#include <Eigen/Dense>

#include <string>
#include <vector>

namespace nonosc {

// Exact rational scalar (GMP-backed) and dense matrices over it. All
// certification-path arithmetic runs on these; doubles appear only in the
// spectral-radius screen and the simulator.
using Rat = boost::multiprecision::mpq_rational;
using Int = boost::multiprecision::mpz_int;

using RatMatrix = Eigen::Matrix<Rat, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using RatVector = Eigen::Matrix<Rat, Eigen::Dynamic, 1>;

inline RatMatrix rat_identity(Eigen::Index n) {
    RatMatrix I(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            I(i, j) = (i == j) ? 1 : 0;
    return I;
}

inline RatMatrix rat_zeros(Eigen::Index r, Eigen::Index c) {
    RatMatrix Z(r, c);
    for (Eigen::Index i = 0; i < r; ++i)
        for (Eigen::Index j = 0; j < c; ++j)
            Z(i, j) = 0;
    return Z;
}

inline RatVector rat_zero_vector(Eigen::Index n) {
    RatVector z(n);
    for (Eigen::Index i = 0; i < n; ++i) z(i) = 0;
    return z;
}

inline RatVector rat_unit_vector(Eigen::Index n, Eigen::Index i) {
    RatVector e = rat_zero_vector(n);
    e(i) = 1;
    return e;
}

inline bool exactly_equal(const RatMatrix& a, const RatMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            if (a(i, j) != b(i, j)) return false;
    return true;
}

inline bool exactly_equal(const RatVector& a, const RatVector& b) {
    if (a.size() != b.size()) return false;
    for (Eigen::Index i = 0; i < a.size(); ++i)
        if (a(i) != b(i)) return false;
    return true;
}

inline bool is_zero(const RatVector& v) {
    for (Eigen::Index i = 0; i < v.size(); ++i)
        if (v(i) != 0) return false;
    return true;
}

inline bool is_zero(const RatMatrix& m) {
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            if (m(i, j) != 0) return false;
    return true;
}

inline double to_double(const Rat& r) { return r.convert_to<double>(); }

inline Eigen::MatrixXd to_double(const RatMatrix& m) {
    Eigen::MatrixXd d(m.rows(), m.cols());
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            d(i, j) = to_double(m(i, j));
    return d;
}

inline Eigen::VectorXd to_double(const RatVector& v) {
    Eigen::VectorXd d(v.size());
    for (Eigen::Index i = 0; i < v.size(); ++i) d(i) = to_double(v(i));
    return d;
}

// "p" for integers, "p/q" otherwise; parseable back by rat_from_string.
inline std::string rat_to_string(const Rat& r) { return r.str(); }

inline Rat rat_from_string(const std::string& s) { return Rat(s); }

// Scales a rational vector to coprime integer entries. Sign handling is left
// to the caller (rays are already nonnegative, kernel vectors get their first
// nonzero entry made positive).
inline RatVector integerize(const RatVector& v) {
    Int l = 1;
    for (Eigen::Index i = 0; i < v.size(); ++i)
        l = lcm(l, Int(denominator(v(i))));
    RatVector w(v.size());
    for (Eigen::Index i = 0; i < v.size(); ++i) w(i) = v(i) * Rat(l);
    Int g = 0;
    for (Eigen::Index i = 0; i < w.size(); ++i)
        g = gcd(g, Int(numerator(w(i))));
    if (g > 1)
        for (Eigen::Index i = 0; i < w.size(); ++i) w(i) /= Rat(g);
    return w;
}

}  // namespace nonosc
