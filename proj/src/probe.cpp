#include <cmath>
#include <limits>
#include <stdexcept>

#include "toricnet/equilibrium.hpp"
#include "toricnet/errors.hpp"
#include "toricnet/fluxcone.hpp"
#include "toricnet/lincore.hpp"
#include "toricnet/parallel.hpp"

namespace toricnet {

namespace {

void check_steps(const std::vector<double>& steps) {
    if (steps.size() < 2)
        throw std::invalid_argument("probe needs at least two step sizes");
    for (size_t i = 0; i < steps.size(); ++i) {
        if (!(steps[i] > 0.0)) throw std::invalid_argument("probe steps must be positive");
        if (i > 0 && !(steps[i] < steps[i - 1]))
            throw std::invalid_argument("probe steps must decrease");
    }
}

// Shared Richardson bookkeeping once the per-step estimates are in.
void finish(ProbeResult& out, const ProbeOptions& opts) {
    double dmax = 1.0;
    for (const auto& d : out.derivatives) dmax = std::max(dmax, d.norm());
    const double floor = opts.noise_floor * dmax;

    for (size_t j = 0; j + 1 < out.derivatives.size(); ++j)
        out.difference_norms.push_back((out.derivatives[j] - out.derivatives[j + 1]).norm());

    out.consistent = true;
    for (size_t j = 0; j + 1 < out.difference_norms.size(); ++j) {
        const double num = out.difference_norms[j];
        const double den = out.difference_norms[j + 1];
        const bool at_floor = num <= floor && den <= floor;
        const double ratio = den > 0.0 ? num / den
                                       : std::numeric_limits<double>::quiet_NaN();
        out.ratios.push_back(ratio);
        out.at_floor.push_back(at_floor);
        const bool in_window = ratio >= opts.ratio_lo && ratio <= opts.ratio_hi;
        if (!at_floor && !in_window) out.consistent = false;
    }
}

}  // namespace

ProbeResult smooth_dependence_probe(const EGraph& g, const RateVector& k,
                                    const Eigen::VectorXd& x0, const StoichDecomp& sd,
                                    ProbeTarget target, const Eigen::VectorXd& direction,
                                    const ProbeOptions& opts) {
    check_steps(opts.steps);
    ProbeResult out;
    out.steps = opts.steps;
    out.derivatives.resize(opts.steps.size());

    if (target == ProbeTarget::InitialCondition) {
        if (direction.size() != g.species_count())
            throw std::invalid_argument("x0 probe direction must have n entries");
        const EquilibriumMap equilibrium(g, k, sd, opts.tol);
        out.base_equilibrium = equilibrium(x0, opts.birch).x_star;
        parallel_for(static_cast<int>(opts.steps.size()), opts.jobs, [&](int j) {
            const double h = opts.steps[j];
            const Eigen::VectorXd plus = equilibrium(x0 + h * direction, opts.birch).x_star;
            const Eigen::VectorXd minus = equilibrium(x0 - h * direction, opts.birch).x_star;
            out.derivatives[j] = (plus - minus) / (2.0 * h);
        });
        finish(out, opts);
        return out;
    }

    // Rate probe. A straight line k + h d leaves the locus at O(h^2), so each
    // sample is retracted back: the membership least-squares solve re-derives
    // the dependent log coordinates, the edge fluxes at exp(X-hat) are
    // re-balanced, and phi re-embeds them. The retraction fixes V(G)
    // pointwise, so for tangent directions the curve k(h) agrees with
    // k + h d to first order.
    if (direction.size() != g.edge_count())
        throw std::invalid_argument("rate probe direction must have |E| entries");
    const FluxSpace fs = flux_space(g);
    const LogEquilibrium base_log = solve_log_equilibrium(g, k, sd, opts.tol);

    auto edge_fluxes = [&](const Eigen::VectorXd& rates, const Eigen::VectorXd& log_x) {
        Eigen::VectorXd beta(g.edge_count());
        for (const Edge& e : g.edges())
            beta(e.index) = std::exp(std::log(rates(e.index)) +
                                     g.vertex(e.source).exponents.dot(log_x));
        return beta;
    };

    // Tangency: the direction must lie in the span of the restricted Jacobian
    // at a phi-preimage of k.
    {
        const Eigen::VectorXd x_base = base_log.X_star.array().exp();
        const Eigen::VectorXd beta_base = edge_fluxes(k, base_log.X_star);
        const Eigen::MatrixXd J = phi_hat_jacobian(x_base, beta_base, g);
        const int n = g.species_count();
        Eigen::MatrixXd tangent =
            Eigen::MatrixXd::Zero(n + g.edge_count(), sd.s + fs.dim);
        tangent.topLeftCorner(n, sd.s) = sd.basis_S;
        tangent.bottomRightCorner(g.edge_count(), fs.dim) = fs.basis;
        const LeastSquaresResult lift = least_squares(J * tangent, direction);
        const double dnorm = direction.norm();
        if (dnorm > 0.0 && lift.residual_norm > opts.tangent_tol * dnorm)
            throw NotInToricLocus(
                "rate direction leaves the toric locus (off-tangent part " +
                    std::to_string(lift.residual_norm / dnorm) + " relative)",
                lift.residual_norm);
    }

    const EquilibriumMap base_eq(g, k, sd, opts.tol);
    out.base_equilibrium = base_eq(x0, opts.birch).x_star;

    auto rates_at = [&](double h) -> RateVector {
        const Eigen::VectorXd kp = k + h * direction;
        for (Eigen::Index e = 0; e < kp.size(); ++e) {
            if (!(kp(e) > 0.0))
                throw std::invalid_argument("probe step leaves the positive rate "
                                            "orthant; reduce the step sizes");
        }
        const Eigen::VectorXd K = tree_constants(g, kp);
        const LogBalanceSystem sys = log_balance_system(g, K);
        const Eigen::VectorXd X_hat = least_squares(sys.delta_y, sys.log_dK).solution;
        FluxVector beta;
        beta.values = edge_fluxes(kp, X_hat);
        beta.values = fs.basis * (fs.basis.transpose() * beta.values);
        for (Eigen::Index e = 0; e < beta.values.size(); ++e) {
            if (!(beta.values(e) > 0.0))
                throw std::invalid_argument("probe step leaves the flux cone; "
                                            "reduce the step sizes");
        }
        beta.strictly_positive = true;
        return phi_embedding(Eigen::VectorXd(X_hat.array().exp()), beta, g);
    };

    parallel_for(static_cast<int>(opts.steps.size()), opts.jobs, [&](int j) {
        const double h = opts.steps[j];
        const Eigen::VectorXd plus =
            equilibrium_from_rates(g, rates_at(h), x0, sd, opts.tol, opts.birch).x_star;
        const Eigen::VectorXd minus =
            equilibrium_from_rates(g, rates_at(-h), x0, sd, opts.tol, opts.birch).x_star;
        out.derivatives[j] = (plus - minus) / (2.0 * h);
    });
    finish(out, opts);
    return out;
}

}  // namespace toricnet
