#ifndef TORICNET_FLUXCONE_HPP
#define TORICNET_FLUXCONE_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <utility>

#include "toricnet/kirchhoff.hpp"
#include "toricnet/netmodel.hpp"

namespace toricnet {

// Singular values below this fraction of the largest count as zero in the
// immersion rank check.
inline constexpr double kRankCheckTol = 1e-8;

// Per-vertex flux balance tolerance, relative to the vertex throughput.
inline constexpr double kFluxBalanceTol = 1e-10;

struct FluxVector {
    Eigen::VectorXd values;  // indexed by edge
    bool strictly_positive = false;
};

struct FluxSpace {
    Eigen::MatrixXd balance_matrix;  // m x |E|: +1 incoming, -1 outgoing
    Eigen::MatrixXd basis;           // |E| x dim, orthonormal kernel basis
    int dim = 0;
};

// Kernel of the vertex-balance matrix: the linear span of the
// complex-balanced flux vectors.
FluxSpace flux_space(const EGraph& g, double rank_tol = kDefaultRankTol);

// Max over vertices of |inflow - outflow| / max(1, inflow + outflow).
double flux_balance_error(const EGraph& g, const Eigen::VectorXd& beta);

// Deterministic-by-seed strictly positive balanced flux: one uniform directed
// simple-cycle flow through every edge, combined with weights in [0.5, 1.5].
// Throws NotWeaklyReversible when some edge lies on no directed cycle.
FluxVector sample_flux(const EGraph& g, const FluxSpace& fs, std::uint64_t seed);

// k_e = beta_e / x^{y_src(e)} (computed in log space). Requires x > 0 and
// beta strictly positive; throws UnbalancedFlux when beta violates vertex
// balance beyond tolerance.
RateVector phi_embedding(const Eigen::VectorXd& x, const FluxVector& beta, const EGraph& g);

// Inverse of the embedding on the toric locus: x is the complex-balanced
// equilibrium in the class of x0, beta_e = k_e * x^{y_src(e)}.
std::pair<Eigen::VectorXd, FluxVector> phi_inverse(const EGraph& g, const RateVector& k,
                                                   const Eigen::VectorXd& x0,
                                                   const StoichDecomp& sd,
                                                   double tol = kDefaultMembershipTol);

// Extended map phi-hat: beta_e / x^{y_src(e)} for any real beta, x > 0.
Eigen::VectorXd phi_hat(const Eigen::VectorXd& x, const Eigen::VectorXd& beta,
                        const EGraph& g);

// Analytic Jacobian of the extended map phi-hat at (x, beta):
// row e has entries -(beta_e / x^y) y_j / x_j over x and the single entry
// 1 / x^y in the beta block. beta may be any real vector.
Eigen::MatrixXd phi_hat_jacobian(const Eigen::VectorXd& x, const Eigen::VectorXd& beta,
                                 const EGraph& g);

// Central-difference Jacobian of phi-hat; the independent cross-check for
// phi_hat_jacobian.
Eigen::MatrixXd phi_hat_jacobian_fd(const Eigen::VectorXd& x, const Eigen::VectorXd& beta,
                                    const EGraph& g, double rel_step = 1e-6);

struct RankCheck {
    int rank = 0;
    int expected = 0;
    bool pass = false;
};

// Rank of the Jacobian restricted to the tangent space S x B~(G); passes
// when it equals dim(S) + dim(B~(G)).
RankCheck immersion_rank_check(const Eigen::VectorXd& x, const Eigen::VectorXd& beta,
                               const EGraph& g, const StoichDecomp& sd, const FluxSpace& fs);

}  // namespace toricnet

#endif
