#ifndef TORICNET_DYNAMICS_HPP
#define TORICNET_DYNAMICS_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include "toricnet/kirchhoff.hpp"
#include "toricnet/netmodel.hpp"

namespace toricnet {

// Mass-action right-hand side sum_e k_e x^{y_src(e)} (y_tgt(e) - y_src(e)),
// with monomials evaluated as exp(y . ln x). Throws NonPositiveState.
Eigen::VectorXd mass_action_rhs(const EGraph& g, const RateVector& k,
                                const Eigen::VectorXd& x);

struct IntegrateOptions {
    double rtol = 1e-8;
    double atol = 1e-10;
    double rank_tol = kDefaultRankTol;  // for the conserved-drift bookkeeping
    std::uint64_t max_steps = 10'000'000;
};

struct Trajectory {
    std::vector<double> times;
    std::vector<Eigen::VectorXd> states;
    // max over accepted states and conservation vectors v of |v . (x(t) - x0)|
    double conserved_drift = 0.0;
    std::uint64_t accepted_steps = 0;
    std::uint64_t rejected_steps = 0;
    // tolerances the trajectory was integrated with; convergence_report uses
    // them as the accuracy band around the equilibrium
    double rtol_used = 0.0;
    double atol_used = 0.0;
};

// Adaptive Dormand-Prince 5(4) with positivity-guarded steps: a step whose
// candidate state (or any internal stage) leaves the open positive orthant is
// rejected and halved. Throws StepSizeUnderflow when no representable step
// can keep the state positive.
Trajectory integrate(const EGraph& g, const RateVector& k, const Eigen::VectorXd& x0,
                     double t_end, const IntegrateOptions& opts = {});

struct ConvergenceReport {
    double final_distance = 0.0;
    // distance to x_star non-increasing over the last quartile of samples, up
    // to the integrator accuracy band 10 (atol + rtol ||x_star||)
    bool monotone_tail = false;
};

ConvergenceReport convergence_report(const Trajectory& traj, const Eigen::VectorXd& x_star);

// CSV with header t,x1,...,xn and one row per accepted step.
void write_trajectory_csv(const Trajectory& traj, std::ostream& os);

}  // namespace toricnet

#endif
