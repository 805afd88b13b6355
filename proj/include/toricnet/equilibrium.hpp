#ifndef TORICNET_EQUILIBRIUM_HPP
#define TORICNET_EQUILIBRIUM_HPP

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "toricnet/kirchhoff.hpp"
#include "toricnet/netmodel.hpp"

namespace toricnet {

// Special solution X* in S of the log-linear complex-balance system, so that
// exp(X*) is a complex-balanced equilibrium.
struct LogEquilibrium {
    enum class Method { FullRank, Augmented };
    Eigen::VectorXd X_star;
    std::vector<int> system_rows_used;  // rows of the stacked system, pivot order
    Method method = Method::FullRank;
};

std::string to_string(LogEquilibrium::Method m);

// Picks s linearly independent rows of the stacked system by column-pivoted
// QR; solves the square system directly when s = n, otherwise augments with
// the rows of basis_Sperp^T and zero right-hand entries.
// Throws NotInToricLocus when membership fails at `tol`, SingularSystem when
// the augmented matrix is numerically singular.
LogEquilibrium solve_log_equilibrium(const EGraph& g, const RateVector& k,
                                     const StoichDecomp& sd,
                                     double tol = kDefaultMembershipTol);

struct BirchOptions {
    double grad_tol = 1e-12;  // absolute, on ||f||_inf
    int max_iter = 200;
    double armijo_c = 1e-4;
};

struct BirchResult {
    Eigen::VectorXd x_star;  // positive state
    Eigen::VectorXd w;       // coordinates in basis_Sperp, empty when s = n
    int iterations = 0;
    double final_grad_norm = 0.0;
};

// Intersection exp(X* + S-perp) with (x0 + S): damped Newton with Armijo
// backtracking on the strictly convex potential
//   g(w) = sum_j exp(X*_j + (V w)_j) - (V^T x0) . w,
// whose gradient is f(w) = V^T (exp(X* + V w) - x0) and whose Hessian
// V^T diag(exp(X* + V w)) V is positive definite.
BirchResult birch_solve(const Eigen::VectorXd& X_star, const Eigen::VectorXd& x0,
                        const StoichDecomp& sd, const BirchOptions& opts = {});

// The map Q_{x0}: composition birch_solve(solve_log_equilibrium(...), x0).
BirchResult equilibrium_from_rates(const EGraph& g, const RateVector& k,
                                   const Eigen::VectorXd& x0, const StoichDecomp& sd,
                                   double tol = kDefaultMembershipTol,
                                   const BirchOptions& opts = {});

// The map P: X* computed once, then evaluated per initial condition.
class EquilibriumMap {
public:
    EquilibriumMap(const EGraph& g, const RateVector& k, const StoichDecomp& sd,
                   double tol = kDefaultMembershipTol);

    BirchResult operator()(const Eigen::VectorXd& x0, const BirchOptions& opts = {}) const;
    const Eigen::VectorXd& log_equilibrium() const { return log_eq_.X_star; }
    const LogEquilibrium& log_equilibrium_full() const { return log_eq_; }

private:
    StoichDecomp sd_;
    LogEquilibrium log_eq_;
};

EquilibriumMap equilibrium_from_initial(const EGraph& g, const RateVector& k,
                                        const StoichDecomp& sd,
                                        double tol = kDefaultMembershipTol);

// ---------------------------------------------------------------------------
// Finite-difference smoothness probes
// ---------------------------------------------------------------------------

enum class ProbeTarget { InitialCondition, Rates };

struct ProbeOptions {
    std::vector<double> steps = {1e-2, 5e-3, 2.5e-3, 1.25e-3};  // halving ladder
    double noise_floor = 1e-9;   // relative to max(1, ||D||)
    double ratio_lo = 3.5;       // expected Richardson window for O(h^2)
    double ratio_hi = 4.5;
    double tol = kDefaultMembershipTol;
    double tangent_tol = 1e-6;   // rate probes: max relative off-tangent part
    int jobs = 1;
    BirchOptions birch;
};

struct ProbeResult {
    std::vector<double> steps;
    std::vector<Eigen::VectorXd> derivatives;  // central-difference estimate per step
    std::vector<double> difference_norms;      // ||D_j - D_{j+1}||
    std::vector<double> ratios;                // difference_norms[j] / difference_norms[j+1]
    std::vector<bool> at_floor;                // both differences below the noise floor
    bool consistent = false;  // every ratio in window or at floor
    Eigen::VectorXd base_equilibrium;
};

// Central differences of x*(x0 + h d) (target InitialCondition, X* held
// fixed) or of x*(k(h)) along the on-locus curve
//   k(h) = phi(x + h dx, beta + h dbeta)
// obtained by lifting `direction` to the tangent space S x B~(G) at the base
// point phi_inverse(k, x0) (target Rates). A rate direction whose off-tangent
// part exceeds tangent_tol relative is rejected with NotInToricLocus.
ProbeResult smooth_dependence_probe(const EGraph& g, const RateVector& k,
                                    const Eigen::VectorXd& x0, const StoichDecomp& sd,
                                    ProbeTarget target, const Eigen::VectorXd& direction,
                                    const ProbeOptions& opts = {});

}  // namespace toricnet

#endif
