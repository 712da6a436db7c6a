#include "nonosc/simulate.hpp"

#include "nonosc/compound.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>

namespace nonosc {

namespace {

double int_pow(double base, int e) {
    double out = 1.0;
    for (int i = 0; i < e; ++i) out *= base;
    return out;
}

void check_params(const MassActionParams& params, const ReducedSystem& rs) {
    if (static_cast<int>(params.k.size()) != rs.net.n_reactions())
        throw std::invalid_argument("expected one rate constant per reaction");
    if (params.totals.size() != rs.cons.basis.size())
        throw std::invalid_argument("expected one total per conservation row");
}

// Double-precision view of the reduction, converted from the rationals once
// so the stage loop never touches GMP.
struct Frozen {
    const Network* net;
    int n, c, d;
    Eigen::MatrixXd t_inv;
    Eigen::MatrixXd gamma_r;
    struct Factor {
        int reaction;
        int species;
        Eigen::MatrixXd vw;
    };
    std::vector<Factor> factors;
};

Frozen freeze(const ReducedSystem& rs) {
    Frozen f;
    f.net = &rs.net;
    f.n = rs.n();
    f.c = rs.c();
    f.d = rs.d();
    f.t_inv = to_double(rs.t_inv);
    f.gamma_r = to_double(rs.gamma_r);
    for (const auto& fac : rs.factors)
        f.factors.push_back({fac.reaction, fac.species,
                             to_double(fac.v) * to_double(fac.w).transpose()});
    return f;
}

Eigen::VectorXd reconstruct(const Frozen& f, const MassActionParams& params,
                            const Eigen::VectorXd& xd, bool* clamped) {
    Eigen::VectorXd stacked(f.n);
    for (int i = 0; i < f.c; ++i)
        stacked(i) = params.totals[static_cast<size_t>(i)];
    for (int i = 0; i < f.d; ++i) stacked(f.c + i) = xd(i);
    Eigen::VectorXd x = f.t_inv * stacked;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        if (x(i) < 0.0) {
            x(i) = 0.0;
            if (clamped) *clamped = true;
        }
    }
    return x;
}

Eigen::VectorXd frozen_rhs(const Frozen& f, const MassActionParams& params,
                           const Eigen::VectorXd& xd, bool* clamped) {
    const Eigen::VectorXd x = reconstruct(f, params, xd, clamped);
    return f.gamma_r * mass_action_rates(*f.net, params, x);
}

Eigen::MatrixXd frozen_jacobian(const Frozen& f, const MassActionParams& params,
                                const Eigen::VectorXd& xd) {
    const Eigen::VectorXd x = reconstruct(f, params, xd, nullptr);
    Eigen::MatrixXd j = Eigen::MatrixXd::Zero(f.d, f.d);
    for (const auto& fac : f.factors) {
        const auto& reactants =
            f.net->reactions[static_cast<size_t>(fac.reaction)].reactants;
        // rho = dR_j/dx_i: pull one power of x_i down, keep the rest.
        double rho = params.k[static_cast<size_t>(fac.reaction)];
        for (const auto& [m, coeff] : reactants) {
            if (m == fac.species) {
                rho *= coeff * int_pow(x(m), coeff - 1);
            } else {
                rho *= int_pow(x(m), coeff);
            }
        }
        j += rho * fac.vw;
    }
    return j;
}

}  // namespace

Eigen::VectorXd mass_action_rates(const Network& net, const MassActionParams& params,
                                  const Eigen::VectorXd& x) {
    if (static_cast<int>(params.k.size()) != net.n_reactions())
        throw std::invalid_argument("expected one rate constant per reaction");
    Eigen::VectorXd r(net.n_reactions());
    for (int j = 0; j < net.n_reactions(); ++j) {
        double val = params.k[static_cast<size_t>(j)];
        for (const auto& [i, coeff] : net.reactions[static_cast<size_t>(j)].reactants)
            val *= int_pow(x(i), coeff);
        r(j) = val;
    }
    return r;
}

Eigen::VectorXd reconstruct_state(const ReducedSystem& rs,
                                  const MassActionParams& params,
                                  const Eigen::VectorXd& xd, bool* clamped) {
    check_params(params, rs);
    return reconstruct(freeze(rs), params, xd, clamped);
}

Eigen::VectorXd reduced_rhs(const ReducedSystem& rs, const MassActionParams& params,
                            const Eigen::VectorXd& xd, bool* clamped) {
    check_params(params, rs);
    return frozen_rhs(freeze(rs), params, xd, clamped);
}

Eigen::MatrixXd jacobian_reduced(const ReducedSystem& rs,
                                 const MassActionParams& params,
                                 const Eigen::VectorXd& xd) {
    check_params(params, rs);
    return frozen_jacobian(freeze(rs), params, xd);
}

namespace {

struct CascadeState {
    Eigen::VectorXd x;
    Eigen::VectorXd d2;
};

CascadeState rhs(const Frozen& f, const MassActionParams& params,
                 const CascadeState& y, bool* clamped) {
    CascadeState out;
    out.x = frozen_rhs(f, params, y.x, clamped);
    if (y.d2.size() > 0) {
        const Eigen::MatrixXd jr = frozen_jacobian(f, params, y.x);
        out.d2 = additive_compound(jr, 2) * y.d2;
    } else {
        out.d2 = y.d2;
    }
    return out;
}

}  // namespace

Trajectory integrate(const ReducedSystem& rs, const MassActionParams& params,
                     const Eigen::VectorXd& xd0, const Eigen::VectorXd& delta20,
                     double t_end, double dt, const PWLFunction* v) {
    if (dt <= 0.0 || t_end < dt)
        throw std::invalid_argument("need dt > 0 and t_end >= dt");
    check_params(params, rs);
    const Frozen f = freeze(rs);

    Trajectory tr;
    CascadeState y{xd0, delta20};
    const auto steps = static_cast<long>(std::llround(t_end / dt));

    auto record = [&](double time) {
        tr.t.push_back(time);
        tr.x.push_back(y.x);
        tr.delta2.push_back(y.d2);
        if (v) tr.v.push_back(evaluate(*v, y.d2));
    };
    auto guard = [&](double time) {
        if (y.x.lpNorm<Eigen::Infinity>() > 1e12 ||
            (y.d2.size() > 0 && y.d2.lpNorm<Eigen::Infinity>() > 1e12))
            throw StepRejected(time);
    };

    guard(0.0);
    record(0.0);
    for (long s = 0; s < steps; ++s) {
        const CascadeState k1 = rhs(f, params, y, &tr.clamped);
        CascadeState p{y.x + 0.5 * dt * k1.x, y.d2 + 0.5 * dt * k1.d2};
        const CascadeState k2 = rhs(f, params, p, &tr.clamped);
        p = {y.x + 0.5 * dt * k2.x, y.d2 + 0.5 * dt * k2.d2};
        const CascadeState k3 = rhs(f, params, p, &tr.clamped);
        p = {y.x + dt * k3.x, y.d2 + dt * k3.d2};
        const CascadeState k4 = rhs(f, params, p, &tr.clamped);
        y.x += dt / 6.0 * (k1.x + 2.0 * k2.x + 2.0 * k3.x + k4.x);
        y.d2 += dt / 6.0 * (k1.d2 + 2.0 * k2.d2 + 2.0 * k3.d2 + k4.d2);
        const double time = static_cast<double>(s + 1) * dt;
        guard(time);
        record(time);
    }
    return tr;
}

std::vector<Trajectory> integrate_batch(
    const ReducedSystem& rs, const MassActionParams& params,
    const std::vector<std::pair<Eigen::VectorXd, Eigen::VectorXd>>& starts,
    double t_end, double dt, const PWLFunction* v, bool parallel) {
    std::vector<Trajectory> out(starts.size());
    // Exceptions must not unwind out of the parallel region; stash the first
    // one (by index, so serial and parallel agree) and rethrow afterwards.
    std::vector<std::exception_ptr> errs(starts.size());
    if (parallel) {
#pragma omp parallel for schedule(dynamic)
        for (size_t i = 0; i < starts.size(); ++i) {
            try {
                out[i] = integrate(rs, params, starts[i].first, starts[i].second,
                                   t_end, dt, v);
            } catch (...) {
                errs[i] = std::current_exception();
            }
        }
    } else {
        for (size_t i = 0; i < starts.size(); ++i) {
            try {
                out[i] = integrate(rs, params, starts[i].first, starts[i].second,
                                   t_end, dt, v);
            } catch (...) {
                errs[i] = std::current_exception();
            }
        }
    }
    for (const auto& e : errs)
        if (e) std::rethrow_exception(e);
    return out;
}

Eigen::VectorXd find_steady_state(const ReducedSystem& rs,
                                  const MassActionParams& params,
                                  const Eigen::VectorXd& guess, double t_settle,
                                  double dt, int newton_iters) {
    const Eigen::VectorXd empty(0);
    Eigen::VectorXd x = integrate(rs, params, guess, empty, t_settle, dt).x.back();
    for (int it = 0; it < newton_iters; ++it) {
        const Eigen::VectorXd r = reduced_rhs(rs, params, x);
        if (r.lpNorm<Eigen::Infinity>() < 1e-14) break;
        const Eigen::MatrixXd j = jacobian_reduced(rs, params, x);
        x -= j.fullPivLu().solve(r);
    }
    return x;
}

MassActionParams parse_params(const std::string& text, int n_reactions,
                              int n_totals) {
    MassActionParams params;
    params.k.assign(static_cast<size_t>(n_reactions),
                    std::numeric_limits<double>::quiet_NaN());
    params.totals.assign(static_cast<size_t>(n_totals),
                         std::numeric_limits<double>::quiet_NaN());

    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::string key, eq;
        double value;
        if (!(ls >> key)) continue;  // blank
        if (!(ls >> eq >> value) || eq != "=")
            throw std::invalid_argument("parameter line " + std::to_string(lineno) +
                                        ": expected `key = value`");
        if (value <= 0.0)
            throw std::invalid_argument("parameter " + key + " must be positive");

        std::vector<double>* slot = nullptr;
        size_t index = 0;
        if (key.rfind("k", 0) == 0) {
            slot = &params.k;
            index = static_cast<size_t>(std::stoul(key.substr(1))) - 1;
        } else if (key.rfind("total", 0) == 0) {
            slot = &params.totals;
            index = static_cast<size_t>(std::stoul(key.substr(5))) - 1;
        } else {
            throw std::invalid_argument("unknown parameter key " + key);
        }
        if (index >= slot->size())
            throw std::invalid_argument("parameter " + key + " out of range");
        if (!std::isnan((*slot)[index]))
            throw std::invalid_argument("parameter " + key + " given twice");
        (*slot)[index] = value;
    }

    for (size_t j = 0; j < params.k.size(); ++j)
        if (std::isnan(params.k[j]))
            throw std::invalid_argument("missing rate k" + std::to_string(j + 1));
    for (size_t i = 0; i < params.totals.size(); ++i)
        if (std::isnan(params.totals[i]))
            throw std::invalid_argument("missing total" + std::to_string(i + 1));
    return params;
}

MassActionParams parse_params_file(const std::string& path, int n_reactions,
                                   int n_totals) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open parameter file " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_params(buf.str(), n_reactions, n_totals);
}

void write_csv(std::ostream& os, const Trajectory& tr) {
    os << "t";
    const auto nx = tr.x.empty() ? 0 : tr.x[0].size();
    const auto nd = tr.delta2.empty() ? 0 : tr.delta2[0].size();
    for (Eigen::Index i = 0; i < nx; ++i) os << ",x" << (i + 1);
    for (Eigen::Index i = 0; i < nd; ++i) os << ",d2_" << (i + 1);
    if (!tr.v.empty()) os << ",V";
    os << "\n";

    char buf[32];
    auto put = [&](double value) {
        std::snprintf(buf, sizeof buf, "%.12g", value);
        os << ',' << buf;
    };
    for (size_t s = 0; s < tr.t.size(); ++s) {
        std::snprintf(buf, sizeof buf, "%.12g", tr.t[s]);
        os << buf;
        for (Eigen::Index i = 0; i < nx; ++i) put(tr.x[s](i));
        for (Eigen::Index i = 0; i < nd; ++i) put(tr.delta2[s](i));
        if (!tr.v.empty()) put(tr.v[s]);
        os << "\n";
    }
}

}  // namespace nonosc
