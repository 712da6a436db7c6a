#pragma once

#include "nonosc/lyapunov.hpp"
#include "nonosc/stoich.hpp"

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace nonosc {

// Mass-action parameters: one rate constant per reaction, one conserved total
// per conservation-basis row (in basis order).
struct MassActionParams {
    std::vector<double> k;
    std::vector<double> totals;
};

// Raised when a trajectory leaves the guard box |y| <= 1e12.
class StepRejected : public std::runtime_error {
  public:
    explicit StepRejected(double when)
        : std::runtime_error("state blew up at t = " + std::to_string(when)),
          t(when) {}
    double t;
};

struct Trajectory {
    std::vector<double> t;
    std::vector<Eigen::VectorXd> x;       // reduced state per sample
    std::vector<Eigen::VectorXd> delta2;  // second-compound block per sample
    std::vector<double> v;                // only when a function is supplied
    bool clamped = false;  // a reconstruction dipped below zero somewhere
};

// R_j(x) = k_j prod_i x_i^{alpha_ij}, with x^0 = 1.
Eigen::VectorXd mass_action_rates(const Network& net, const MassActionParams& params,
                                  const Eigen::VectorXd& x);

// Full state from the reduced coordinates: x = T^-1 [totals; xd]. Negative
// components are clamped to zero for rate evaluation and reported via the
// optional flag.
Eigen::VectorXd reconstruct_state(const ReducedSystem& rs,
                                  const MassActionParams& params,
                                  const Eigen::VectorXd& xd,
                                  bool* clamped = nullptr);

// Gamma_r R(x) on the reconstructed state.
Eigen::VectorXd reduced_rhs(const ReducedSystem& rs, const MassActionParams& params,
                            const Eigen::VectorXd& xd, bool* clamped = nullptr);

// J_r = sum_l rho_l A_l with the analytic mass-action partials
// rho_l = dR_{j_l}/dx_{i_l} at the reconstructed state.
Eigen::MatrixXd jacobian_reduced(const ReducedSystem& rs,
                                 const MassActionParams& params,
                                 const Eigen::VectorXd& xd);

// Fixed-step classic Runge-Kutta on the cascade xd' = Gamma_r R,
// delta2' = J_r^(2)(xd) delta2, the compound refreshed per stage. Samples
// every step boundary; evaluates V on each delta2 sample when supplied.
Trajectory integrate(const ReducedSystem& rs, const MassActionParams& params,
                     const Eigen::VectorXd& xd0, const Eigen::VectorXd& delta20,
                     double t_end, double dt, const PWLFunction* v = nullptr);

// Independent trajectories, optionally in parallel; results are identical to
// the serial order either way.
std::vector<Trajectory> integrate_batch(
    const ReducedSystem& rs, const MassActionParams& params,
    const std::vector<std::pair<Eigen::VectorXd, Eigen::VectorXd>>& starts,
    double t_end, double dt, const PWLFunction* v = nullptr, bool parallel = true);

// Long integration to settle, then Newton polish on the reduced rhs.
Eigen::VectorXd find_steady_state(const ReducedSystem& rs,
                                  const MassActionParams& params,
                                  const Eigen::VectorXd& guess,
                                  double t_settle = 100.0, double dt = 1e-3,
                                  int newton_iters = 25);

// Key-value parameter text: `k1 = 5.0` per reaction, `total1 = 15.0` per
// conservation row, `#` comments. Every key required once, all values > 0.
MassActionParams parse_params(const std::string& text, int n_reactions,
                              int n_totals);
MassActionParams parse_params_file(const std::string& path, int n_reactions,
                                   int n_totals);

// Header t,x1,...,d2_1,...[,V] followed by one row per sample.
void write_csv(std::ostream& os, const Trajectory& tr);

}  // namespace nonosc
