#include "nonosc/lyapunov.hpp"

#include "nonosc/ratlinalg.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <sstream>

namespace nonosc {

PWLFunction box_function(Eigen::Index dim) {
    PWLFunction f;
    f.dim = dim;
    for (Eigen::Index i = 0; i < dim; ++i) f.rows.push_back(rat_unit_vector(dim, i));
    for (Eigen::Index i = 0; i < dim; ++i) {
        RatVector e = rat_zero_vector(dim);
        e(i) = -1;
        f.rows.push_back(e);
    }
    return f;
}

double evaluate(const PWLFunction& f, const Eigen::VectorXd& z) {
    double best = 0.0;
    bool first = true;
    for (const auto& c : f.rows) {
        double s = 0.0;
        for (Eigen::Index i = 0; i < c.size(); ++i) s += to_double(c(i)) * z(i);
        if (first || s > best) { best = s; first = false; }
    }
    return first ? 0.0 : best;
}

namespace {

RatVector left_apply(const RatMatrix& a, const RatVector& c) {
    // c^T a as a column vector.
    RatVector out = rat_zero_vector(a.cols());
    for (Eigen::Index j = 0; j < a.cols(); ++j)
        for (Eigen::Index i = 0; i < a.rows(); ++i) out(j) += c(i) * a(i, j);
    return out;
}

bool contains_row(const std::vector<RatVector>& rows, const RatVector& v) {
    for (const auto& r : rows)
        if (exactly_equal(r, v)) return true;
    return false;
}

}  // namespace

Algorithm1Result algorithm1(const std::vector<RatMatrix>& mats, int max_iter,
                            size_t max_rows) {
    Algorithm1Result res;
    const Eigen::Index dim = mats.empty() ? 0 : mats[0].rows();
    res.function = box_function(dim);
    auto& rows = res.function.rows;

    size_t processed = 0;
    while (res.sweeps < max_iter) {
        ++res.sweeps;
        const size_t end = rows.size();
        for (size_t k = processed; k < end; ++k) {
            for (const auto& a : mats) {
                const RatVector ca = left_apply(a, rows[k]);
                if (is_zero(ca)) continue;
                RatVector cstar = ca;
                for (Eigen::Index i = 0; i < cstar.size(); ++i) cstar(i) += rows[k](i);
                if (is_zero(cstar)) continue;  // the zero row is never appended
                if (!contains_row(rows, cstar)) rows.push_back(cstar);
            }
        }
        processed = end;
        res.rows_per_sweep.push_back(rows.size());
        if (rows.size() == end) {  // full pass added nothing
            res.converged = true;
            return res;
        }
        // A diverging family grows the row set superlinearly sweep after
        // sweep; without a volume brake the duplicate scan turns quadratic
        // on an exploding set and the budget in sweeps never triggers.
        if (rows.size() > max_rows) break;
    }
    res.converged = false;
    return res;
}

namespace {

double float_spectral_radius(const Eigen::MatrixXd& m) {
    const Eigen::EigenSolver<Eigen::MatrixXd> es(m, false);
    double rho = 0.0;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
        rho = std::max(rho, std::abs(es.eigenvalues()(i)));
    return rho;
}

Rat max_abs_entry(const RatMatrix& m) {
    Rat best = 0;
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            Rat a = m(i, j) < 0 ? Rat(-m(i, j)) : m(i, j);
            if (a > best) best = a;
        }
    return best;
}

// Exact growth confirmation: entries of P^(2^j) must exceed 2 * dim * max|P|
// within 20 squarings. Keeps the float screen honest.
bool confirm_growth(const RatMatrix& p) {
    const Rat maxp = max_abs_entry(p);
    if (maxp == 0) return false;
    const Rat threshold = Rat(2 * p.rows()) * maxp;
    RatMatrix q = p;
    for (int j = 0; j < 20; ++j) {
        q = q * q;
        if (max_abs_entry(q) > threshold) return true;
    }
    return false;
}

struct WordScanContext {
    std::vector<RatMatrix> distinct;        // unique projection matrices
    std::vector<Eigen::MatrixXd> distinct_d;
    std::vector<int> original;              // smallest original index per entry
    bool idempotent = true;                 // consecutive-repeat pruning allowed
};

WordScanContext make_context(const std::vector<RatMatrix>& projections) {
    WordScanContext ctx;
    for (size_t i = 0; i < projections.size(); ++i) {
        bool dup = false;
        for (const auto& d : ctx.distinct)
            if (exactly_equal(d, projections[i])) { dup = true; break; }
        if (dup) continue;
        ctx.distinct.push_back(projections[i]);
        ctx.distinct_d.push_back(to_double(projections[i]));
        ctx.original.push_back(static_cast<int>(i));
        if (!exactly_equal(RatMatrix(projections[i] * projections[i]), projections[i]))
            ctx.idempotent = false;
    }
    return ctx;
}

struct ScanNode {
    std::vector<int> word;  // indices into ctx.distinct
    Eigen::MatrixXd prod;
};

// BFS over the word subtree rooted at `root`, lex order within each level;
// returns the subtree's first (shortest, then lexicographically smallest)
// exactly confirmed witness.
std::optional<InstabilityWitness> scan_subtree(const WordScanContext& ctx, int root,
                                               int max_len, size_t max_words,
                                               size_t& words_examined) {
    const double tol = 1.0 + 1e-6;
    std::vector<ScanNode> level;
    level.push_back({{root}, ctx.distinct_d[static_cast<size_t>(root)]});
    ++words_examined;

    auto check = [&](const ScanNode& n) -> std::optional<InstabilityWitness> {
        const double rho = float_spectral_radius(n.prod);
        if (rho <= tol) return std::nullopt;
        RatMatrix exact = ctx.distinct[static_cast<size_t>(n.word[0])];
        for (size_t i = 1; i < n.word.size(); ++i)
            exact = exact * ctx.distinct[static_cast<size_t>(n.word[i])];
        if (!confirm_growth(exact)) return std::nullopt;
        InstabilityWitness w;
        w.kind = InstabilityWitness::Kind::SpectralRadiusWord;
        for (const int l : n.word) w.word.push_back(ctx.original[static_cast<size_t>(l)]);
        w.spectral_radius = rho;
        return w;
    };

    for (const auto& n : level)
        if (auto w = check(n)) return w;

    for (int len = 2; len <= max_len; ++len) {
        std::vector<ScanNode> next;
        for (const auto& n : level) {
            for (size_t l = 0; l < ctx.distinct.size(); ++l) {
                if (ctx.idempotent && static_cast<int>(l) == n.word.back())
                    continue;  // idempotent factor: the word reduces
                if (words_examined >= max_words) break;
                ++words_examined;
                ScanNode child;
                child.word = n.word;
                child.word.push_back(static_cast<int>(l));
                child.prod = n.prod * ctx.distinct_d[l];
                if (auto w = check(child)) return w;
                next.push_back(std::move(child));
            }
        }
        level = std::move(next);
        if (level.empty()) break;
    }
    return std::nullopt;
}

bool witness_less(const InstabilityWitness& a, const InstabilityWitness& b) {
    if (a.word.size() != b.word.size()) return a.word.size() < b.word.size();
    return a.word < b.word;
}

}  // namespace

std::optional<InstabilityWitness> spectral_word_scan(
    const std::vector<RatMatrix>& projections, int max_len, size_t max_words,
    bool parallel) {
    if (projections.empty() || max_len < 1) return std::nullopt;
    const WordScanContext ctx = make_context(projections);
    const int roots = static_cast<int>(ctx.distinct.size());

    if (!parallel) {
        // Each subtree yields its own shortest, lexicographically smallest
        // confirmed witness; merging those gives the global minimum. Same
        // budget split as the parallel path, so the two agree exactly.
        std::optional<InstabilityWitness> best;
        for (int root = 0; root < roots; ++root) {
            size_t local = 0;
            auto w = scan_subtree(ctx, root, max_len,
                                  max_words / static_cast<size_t>(roots), local);
            if (w && (!best || witness_less(*w, *best))) best = w;
        }
        return best;
    }

    std::vector<std::optional<InstabilityWitness>> results(
        static_cast<size_t>(roots));
#pragma omp parallel for schedule(dynamic)
    for (int root = 0; root < roots; ++root) {
        size_t local = 0;
        results[static_cast<size_t>(root)] = scan_subtree(
            ctx, root, max_len, max_words / static_cast<size_t>(roots), local);
    }
    std::optional<InstabilityWitness> best;
    for (const auto& w : results)
        if (w && (!best || witness_less(*w, *best))) best = w;
    return best;
}

ClosureResult closure_builder(const std::vector<RatMatrix>& projections,
                              size_t max_words, int max_len) {
    ClosureResult res;
    const Eigen::Index dim = projections.empty() ? 0 : projections[0].rows();
    res.function = box_function(dim);
    auto& rows = res.function.rows;

    std::vector<size_t> frontier;
    for (size_t i = 0; i < rows.size(); ++i) frontier.push_back(i);

    bool exhausted = false;
    for (int len = 1; len <= max_len && !exhausted; ++len) {
        std::vector<size_t> next;
        for (const size_t k : frontier) {
            for (const auto& p : projections) {
                if (res.words_examined >= max_words) { exhausted = true; break; }
                ++res.words_examined;
                const RatVector cand = left_apply(p, rows[k]);
                if (is_zero(cand)) continue;
                if (convex_membership(cand, rows).has_value()) continue;
                rows.push_back(cand);
                next.push_back(rows.size() - 1);
            }
            if (exhausted) break;
        }
        if (!exhausted) {
            res.depth_reached = len;
            if (next.empty()) {
                // Closed modulo the convex hull: every longer word's row stays
                // inside, the function is finite. A closed hull also rules out
                // any expanding word, so the screen below would find nothing.
                res.status = ClosureStatus::Closed;
                return res;
            }
        }
        frontier = std::move(next);
    }

    // No closure within the budget; a confirmed expanding word settles it as
    // genuinely unbounded, otherwise the question stays open.
    res.witness = spectral_word_scan(projections, max_len, max_words);
    res.status = res.witness ? ClosureStatus::Unbounded : ClosureStatus::NotConverged;
    return res;
}

ConicReport verify_conic(const PWLFunction& f, const std::vector<RatMatrix>& mats) {
    ConicReport report;
    report.ok = true;
    for (size_t k = 0; k < f.rows.size(); ++k) {
        std::vector<RatVector> gens;
        for (size_t j = 0; j < f.rows.size(); ++j) {
            if (j == k) continue;
            RatVector g = f.rows[k];
            for (Eigen::Index i = 0; i < g.size(); ++i) g(i) -= f.rows[j](i);
            gens.push_back(std::move(g));
        }
        for (size_t l = 0; l < mats.size(); ++l) {
            RatVector d = left_apply(mats[l], f.rows[k]);
            if (is_zero(d)) continue;  // trivially satisfied, not recorded
            for (Eigen::Index i = 0; i < d.size(); ++i) d(i) = -d(i);
            ConicCheck check;
            check.row = static_cast<int>(k);
            check.mat = static_cast<int>(l);
            auto lam = conic_membership(d, gens);
            check.ok = lam.has_value();
            if (lam) check.multipliers = *lam;
            if (!check.ok) report.ok = false;
            report.checks.push_back(std::move(check));
        }
    }
    return report;
}

DiscreteReport verify_discrete(const PWLFunction& f,
                               const std::vector<RatMatrix>& projections) {
    DiscreteReport report;
    report.ok = true;
    for (size_t k = 0; k < f.rows.size(); ++k) {
        for (size_t l = 0; l < projections.size(); ++l) {
            const RatVector mapped = left_apply(projections[l], f.rows[k]);
            if (!convex_membership(mapped, f.rows).has_value()) {
                report.ok = false;
                report.failures.emplace_back(static_cast<int>(k), static_cast<int>(l));
            }
        }
    }
    return report;
}

LasalleReport lasalle_check(const PWLFunction& f, const std::vector<RatMatrix>& mats) {
    LasalleReport report;
    report.pass = true;
    report.strict = true;
    const Eigen::Index dim = f.dim;
    const auto s = static_cast<Eigen::Index>(mats.size());
    for (const auto& c : f.rows) {
        RatMatrix m(dim, s);
        RatMatrix aug(dim, s + 1);
        for (Eigen::Index l = 0; l < s; ++l) {
            const RatVector col = left_apply(mats[static_cast<size_t>(l)], c);
            for (Eigen::Index i = 0; i < dim; ++i) {
                m(i, l) = col(i);
                aug(i, l) = col(i);
            }
        }
        for (Eigen::Index i = 0; i < dim; ++i) aug(i, s) = c(i);
        const int r = rank(m);
        const int ra = rank(aug);
        report.ranks.push_back(r);
        report.ranks_augmented.push_back(ra);
        report.m.push_back(std::move(m));
        if (ra > r) report.pass = false;  // some kernel vector of M^T survives c
        if (r < dim) report.strict = false;
    }
    return report;
}

std::optional<InstabilityWitness> detect_instability(
    const std::vector<RatMatrix>& mats, const std::vector<RatMatrix>& projections,
    int max_len) {
    if (auto w = spectral_word_scan(projections, max_len)) return w;

    // Conic sums of at most two factors with a defective zero eigenvalue:
    // e^{Mt} then grows polynomially inside the inclusion.
    const int s = static_cast<int>(mats.size());
    if (s == 0) return std::nullopt;
    const Eigen::Index dim = mats[0].rows();
    std::vector<std::vector<int>> subsets;
    for (int a = 0; a < s; ++a) subsets.push_back({a});
    for (int a = 0; a < s; ++a)
        for (int b = a + 1; b < s; ++b) subsets.push_back({a, b});
    for (const auto& subset : subsets) {
        RatMatrix m = rat_zeros(dim, dim);
        for (const int l : subset) m += mats[static_cast<size_t>(l)];
        const int rank_m = rank(m);
        if (rank_m == static_cast<int>(dim)) continue;  // det != 0
        const int rank_m2 = rank(RatMatrix(m * m));
        if (rank_m2 < rank_m) {
            InstabilityWitness w;
            w.kind = InstabilityWitness::Kind::DefectiveConicSum;
            w.subset = subset;
            w.rank_m = rank_m;
            w.rank_m2 = rank_m2;
            return w;
        }
    }
    return std::nullopt;
}

bool function_equiv(const PWLFunction& a, const PWLFunction& b) {
    if (a.dim != b.dim) return false;
    for (const auto& r : a.rows)
        if (!convex_membership(r, b.rows).has_value()) return false;
    for (const auto& r : b.rows)
        if (!convex_membership(r, a.rows).has_value()) return false;
    return true;
}

std::string InstabilityWitness::describe() const {
    std::ostringstream os;
    if (kind == Kind::SpectralRadiusWord) {
        os << "expanding word";
        for (const int l : word) os << " Pi" << (l + 1);
        os << " (spectral radius " << spectral_radius << ")";
    } else {
        os << "defective zero eigenvalue of";
        for (size_t i = 0; i < subset.size(); ++i)
            os << (i ? " + A" : " A") << (subset[i] + 1);
        os << " (rank " << rank_m << " -> " << rank_m2 << " after squaring)";
    }
    return os.str();
}

}  // namespace nonosc
