#include "toricnet/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

#include "toricnet/errors.hpp"

namespace toricnet {

Eigen::VectorXd mass_action_rhs(const EGraph& g, const RateVector& k,
                                const Eigen::VectorXd& x) {
    check_rate_vector(g, k);
    if (x.size() != g.species_count())
        throw std::invalid_argument("state vector has wrong dimension");
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        if (!(x(i) > 0.0))
            throw NonPositiveState("mass_action_rhs: state entry " + std::to_string(i) +
                                   " is not positive");
    }
    const Eigen::VectorXd log_x = x.array().log();
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(x.size());
    for (const Edge& e : g.edges()) {
        const Eigen::VectorXd& y = g.vertex(e.source).exponents;
        const double flux = k(e.index) * std::exp(y.dot(log_x));
        rhs += flux * (g.vertex(e.target).exponents - y);
    }
    return rhs;
}

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double kA21 = 1.0 / 5.0;
constexpr double kA31 = 3.0 / 40.0, kA32 = 9.0 / 40.0;
constexpr double kA41 = 44.0 / 45.0, kA42 = -56.0 / 15.0, kA43 = 32.0 / 9.0;
constexpr double kA51 = 19372.0 / 6561.0, kA52 = -25360.0 / 2187.0,
                 kA53 = 64448.0 / 6561.0, kA54 = -212.0 / 729.0;
constexpr double kA61 = 9017.0 / 3168.0, kA62 = -355.0 / 33.0, kA63 = 46732.0 / 5247.0,
                 kA64 = 49.0 / 176.0, kA65 = -5103.0 / 18656.0;
constexpr double kB1 = 35.0 / 384.0, kB3 = 500.0 / 1113.0, kB4 = 125.0 / 192.0,
                 kB5 = -2187.0 / 6784.0, kB6 = 11.0 / 84.0;
// Difference between the 5th- and 4th-order weights (error estimate).
constexpr double kE1 = 71.0 / 57600.0, kE3 = -71.0 / 16695.0, kE4 = 71.0 / 1920.0,
                 kE5 = -17253.0 / 339200.0, kE6 = 22.0 / 525.0, kE7 = -1.0 / 40.0;

bool positive(const Eigen::VectorXd& x) { return (x.array() > 0.0).all(); }

}  // namespace

Trajectory integrate(const EGraph& g, const RateVector& k, const Eigen::VectorXd& x0,
                     double t_end, const IntegrateOptions& opts) {
    check_rate_vector(g, k);
    if (!(t_end >= 0.0)) throw std::invalid_argument("t_end must be non-negative");
    if (!positive(x0)) throw NonPositiveState("integrate: x0 must be strictly positive");

    const StoichDecomp sd = stoich_decomp(g, opts.rank_tol);
    const Eigen::VectorXd conserved0 = sd.basis_Sperp.transpose() * x0;

    Trajectory traj;
    traj.rtol_used = opts.rtol;
    traj.atol_used = opts.atol;
    traj.times.push_back(0.0);
    traj.states.push_back(x0);
    if (t_end == 0.0) return traj;

    auto rhs = [&](const Eigen::VectorXd& x) { return mass_action_rhs(g, k, x); };

    double t = 0.0;
    Eigen::VectorXd x = x0;
    Eigen::VectorXd f1 = rhs(x);

    double h = std::min(t_end, 1e-2 * (1.0 + x.norm()) / (1.0 + f1.norm()));
    const double hmin_rel = 16.0 * std::numeric_limits<double>::epsilon();

    while (t < t_end) {
        if (traj.accepted_steps + traj.rejected_steps >= opts.max_steps)
            throw StepSizeUnderflow("integrator exceeded " + std::to_string(opts.max_steps) +
                                    " steps before reaching t_end");
        if (h < hmin_rel * std::max(1.0, std::abs(t)))
            throw StepSizeUnderflow("step size underflow at t = " + std::to_string(t) +
                                    "; the state approaches the orthant boundary faster "
                                    "than the tolerance can resolve");
        h = std::min(h, t_end - t);

        bool stage_ok = true;
        Eigen::VectorXd x2, x3, x4, x5, x6;
        Eigen::VectorXd f2, f3, f4, f5, f6, f7;
        Eigen::VectorXd x_new;
        do {
            x2 = x + h * (kA21 * f1);
            if (!positive(x2)) { stage_ok = false; break; }
            f2 = rhs(x2);
            x3 = x + h * (kA31 * f1 + kA32 * f2);
            if (!positive(x3)) { stage_ok = false; break; }
            f3 = rhs(x3);
            x4 = x + h * (kA41 * f1 + kA42 * f2 + kA43 * f3);
            if (!positive(x4)) { stage_ok = false; break; }
            f4 = rhs(x4);
            x5 = x + h * (kA51 * f1 + kA52 * f2 + kA53 * f3 + kA54 * f4);
            if (!positive(x5)) { stage_ok = false; break; }
            f5 = rhs(x5);
            x6 = x + h * (kA61 * f1 + kA62 * f2 + kA63 * f3 + kA64 * f4 + kA65 * f5);
            if (!positive(x6)) { stage_ok = false; break; }
            f6 = rhs(x6);
            x_new = x + h * (kB1 * f1 + kB3 * f3 + kB4 * f4 + kB5 * f5 + kB6 * f6);
            if (!positive(x_new)) { stage_ok = false; break; }
            f7 = rhs(x_new);
        } while (false);

        if (!stage_ok) {
            ++traj.rejected_steps;
            h *= 0.5;
            continue;
        }

        const Eigen::VectorXd err_vec =
            h * (kE1 * f1 + kE3 * f3 + kE4 * f4 + kE5 * f5 + kE6 * f6 + kE7 * f7);
        double err = 0.0;
        for (Eigen::Index i = 0; i < x.size(); ++i) {
            const double scale = opts.atol + opts.rtol * std::max(std::abs(x(i)),
                                                                  std::abs(x_new(i)));
            const double r = err_vec(i) / scale;
            err += r * r;
        }
        err = std::sqrt(err / static_cast<double>(x.size()));

        if (!std::isfinite(err) || err > 1.0) {
            ++traj.rejected_steps;
            const double shrink = std::isfinite(err)
                                      ? std::max(0.2, 0.9 * std::pow(err, -0.2))
                                      : 0.2;
            h *= shrink;
            continue;
        }

        t += h;
        x = x_new;
        f1 = f7;  // FSAL
        ++traj.accepted_steps;
        traj.times.push_back(t);
        traj.states.push_back(x);
        const double drift =
            (sd.basis_Sperp.transpose() * x - conserved0).lpNorm<Eigen::Infinity>();
        traj.conserved_drift = std::max(traj.conserved_drift, drift);

        const double grow = err > 0.0 ? std::min(5.0, 0.9 * std::pow(err, -0.2)) : 5.0;
        h *= grow;
    }
    return traj;
}

ConvergenceReport convergence_report(const Trajectory& traj, const Eigen::VectorXd& x_star) {
    if (traj.states.empty()) throw std::invalid_argument("empty trajectory");
    ConvergenceReport rep;
    rep.final_distance = (traj.states.back() - x_star).norm();

    const size_t count = traj.states.size();
    const size_t start = (3 * count) / 4;
    const double band = 10.0 * (traj.atol_used + traj.rtol_used * x_star.norm());
    rep.monotone_tail = true;
    double prev = (traj.states[start] - x_star).norm();
    for (size_t i = start + 1; i < count; ++i) {
        const double d = (traj.states[i] - x_star).norm();
        if (d > prev * (1.0 + 1e-6) + band + 1e-12) {
            rep.monotone_tail = false;
            break;
        }
        prev = d;
    }
    return rep;
}

void write_trajectory_csv(const Trajectory& traj, std::ostream& os) {
    if (traj.states.empty()) throw std::invalid_argument("empty trajectory");
    const Eigen::Index n = traj.states.front().size();
    os << "t";
    for (Eigen::Index i = 1; i <= n; ++i) os << ",x" << i;
    os << "\n";
    char buf[32];
    for (size_t r = 0; r < traj.times.size(); ++r) {
        std::snprintf(buf, sizeof(buf), "%.17g", traj.times[r]);
        os << buf;
        for (Eigen::Index i = 0; i < n; ++i) {
            std::snprintf(buf, sizeof(buf), "%.17g", traj.states[r](i));
            os << ',' << buf;
        }
        os << "\n";
    }
}

}  // namespace toricnet
