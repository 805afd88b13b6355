#include "toricnet/equilibrium.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "toricnet/errors.hpp"
#include "toricnet/lincore.hpp"

namespace toricnet {

std::string to_string(LogEquilibrium::Method m) {
    return m == LogEquilibrium::Method::FullRank ? "full-rank" : "augmented";
}

LogEquilibrium solve_log_equilibrium(const EGraph& g, const RateVector& k,
                                     const StoichDecomp& sd, double tol) {
    const MembershipResult member = toric_membership(g, k, tol);
    if (!member.is_member)
        throw NotInToricLocus("rate vector is not in the toric locus (residual " +
                                  std::to_string(member.residual) + " > tolerance " +
                                  std::to_string(tol) + ")",
                              member.residual);

    const Eigen::VectorXd K = tree_constants(g, k);
    const LogBalanceSystem sys = log_balance_system(g, K);
    const int n = g.species_count();
    const int s = sd.s;

    LogEquilibrium out;
    if (sys.delta_y.rows() == 0) {
        out.X_star = Eigen::VectorXd::Zero(n);
        out.method = LogEquilibrium::Method::Augmented;
        return out;
    }

    // Pivoted selection of s independent rows; the paper's "first s rows"
    // assumption does not survive arbitrary vertex orderings.
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(sys.delta_y.transpose());
    const Eigen::VectorXi perm = qr.colsPermutation().indices();
    out.system_rows_used.assign(perm.data(), perm.data() + s);

    Eigen::MatrixXd delta_s(s, n);
    Eigen::VectorXd rhs_s(s);
    for (int r = 0; r < s; ++r) {
        delta_s.row(r) = sys.delta_y.row(out.system_rows_used[r]);
        rhs_s(r) = sys.log_dK(out.system_rows_used[r]);
    }

    Eigen::MatrixXd A(n, n);
    Eigen::VectorXd rhs(n);
    if (s == n) {
        A = delta_s;
        rhs = rhs_s;
        out.method = LogEquilibrium::Method::FullRank;
    } else {
        A.topRows(s) = delta_s;
        A.bottomRows(n - s) = sd.basis_Sperp.transpose();
        rhs.head(s) = rhs_s;
        rhs.tail(n - s).setZero();
        out.method = LogEquilibrium::Method::Augmented;
    }

    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> solver(A);
    if (solver.rank() < n)
        throw SingularSystem(
            "augmented log-linear system is numerically singular; "
            "check that rank_tol settings for the decomposition and the "
            "row selection agree");
    out.X_star = solver.solve(rhs);
    return out;
}

namespace {

void check_positive_state(const Eigen::VectorXd& x, const char* what) {
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        if (!(x(i) > 0.0))
            throw NonPositiveState(std::string(what) + " must be strictly positive (entry " +
                                   std::to_string(i) + " is " + std::to_string(x(i)) + ")");
    }
}

struct Potential {
    double value;
    double scale;  // magnitude of the summed terms; sets the roundoff level
};

Potential birch_potential(const Eigen::VectorXd& X_star, const Eigen::MatrixXd& V,
                          const Eigen::VectorXd& target, const Eigen::VectorXd& w) {
    const Eigen::VectorXd u = X_star + V * w;
    const double expsum = u.array().exp().sum();
    const double linear = target.dot(w);
    return {expsum - linear, expsum + std::abs(linear)};
}

}  // namespace

BirchResult birch_solve(const Eigen::VectorXd& X_star, const Eigen::VectorXd& x0,
                        const StoichDecomp& sd, const BirchOptions& opts) {
    check_positive_state(x0, "x0");
    if (X_star.size() != x0.size())
        throw std::invalid_argument("birch_solve: X* and x0 dimensions differ");

    const Eigen::MatrixXd& V = sd.basis_Sperp;
    const int q = static_cast<int>(V.cols());

    BirchResult out;
    if (q == 0) {
        out.x_star = X_star.array().exp();
        out.w.resize(0);
        return out;
    }

    const Eigen::MatrixXd gram = V.transpose() * V;
    if ((gram - Eigen::MatrixXd::Identity(q, q)).cwiseAbs().maxCoeff() > 1e-10)
        throw DegenerateBasis("basis_Sperp columns are not orthonormal");

    const double eps = std::numeric_limits<double>::epsilon();
    const Eigen::VectorXd target = V.transpose() * x0;
    Eigen::VectorXd w = Eigen::VectorXd::Zero(q);
    Eigen::VectorXd xt = (X_star + V * w).array().exp();
    Eigen::VectorXd f = V.transpose() * xt - target;
    double gnorm = f.lpNorm<Eigen::Infinity>();
    // f is a difference of throughput-scale quantities, so it cannot resolve
    // below roundoff at that scale
    const double grad_floor = 32.0 * eps * (x0.lpNorm<Eigen::Infinity>() + 1.0);

    for (int it = 0; it <= opts.max_iter; ++it) {
        if (gnorm <= std::max(opts.grad_tol,
                              grad_floor + 32.0 * eps * xt.lpNorm<Eigen::Infinity>())) {
            out.x_star = xt;
            out.w = w;
            out.iterations = it;
            out.final_grad_norm = gnorm;
            return out;
        }
        if (it == opts.max_iter) break;
        const Eigen::MatrixXd hess = V.transpose() * xt.asDiagonal() * V;
        const Eigen::VectorXd step = hess.llt().solve(-f);
        const double slope = f.dot(step);  // negative for SPD Hessian

        const Potential p0 = birch_potential(X_star, V, target, w);
        // roundoff allowance so sub-roundoff Newton steps are not rejected;
        // the potential is a small difference of throughput-scale terms
        const double slack = 16.0 * eps * p0.scale;
        const double g0 = p0.value;
        double alpha = 1.0;
        while (birch_potential(X_star, V, target, w + alpha * step).value >
               g0 + opts.armijo_c * alpha * slope + slack) {
            alpha *= 0.5;
            if (alpha < 1e-18)
                throw MaxIterations("Birch line search stalled at gradient norm " +
                                        std::to_string(gnorm),
                                    gnorm);
        }
        w += alpha * step;
        xt = (X_star + V * w).array().exp();
        f = V.transpose() * xt - target;
        gnorm = f.lpNorm<Eigen::Infinity>();
    }
    throw MaxIterations("Birch solve did not converge within " +
                            std::to_string(opts.max_iter) + " iterations; gradient norm " +
                            std::to_string(gnorm),
                        gnorm);
}

BirchResult equilibrium_from_rates(const EGraph& g, const RateVector& k,
                                   const Eigen::VectorXd& x0, const StoichDecomp& sd,
                                   double tol, const BirchOptions& opts) {
    const LogEquilibrium log_eq = solve_log_equilibrium(g, k, sd, tol);
    return birch_solve(log_eq.X_star, x0, sd, opts);
}

EquilibriumMap::EquilibriumMap(const EGraph& g, const RateVector& k,
                               const StoichDecomp& sd, double tol)
    : sd_(sd), log_eq_(solve_log_equilibrium(g, k, sd, tol)) {}

BirchResult EquilibriumMap::operator()(const Eigen::VectorXd& x0,
                                       const BirchOptions& opts) const {
    return birch_solve(log_eq_.X_star, x0, sd_, opts);
}

EquilibriumMap equilibrium_from_initial(const EGraph& g, const RateVector& k,
                                        const StoichDecomp& sd, double tol) {
    return EquilibriumMap(g, k, sd, tol);
}

}  // namespace toricnet
