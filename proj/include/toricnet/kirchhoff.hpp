#ifndef TORICNET_KIRCHHOFF_HPP
#define TORICNET_KIRCHHOFF_HPP

#include <Eigen/Dense>
#include <vector>

#include "toricnet/netmodel.hpp"

namespace toricnet {

// Residual threshold for the log-linear membership test.
inline constexpr double kDefaultMembershipTol = 1e-9;

// Tree constants this far below the component maximum are structurally zero
// and signal a component that is not strongly connected.
inline constexpr double kTreeConstantZeroTol = 1e-14;

// Positive rates indexed by edge index.
using RateVector = Eigen::VectorXd;

// Throws std::invalid_argument unless k has |E| strictly positive entries.
void check_rate_vector(const EGraph& g, const RateVector& k);

// Column-Laplacian of one connected component, weighted by rates:
// entry (j,i) is the rate of edge y_i -> y_j (local component ordering),
// diagonal (i,i) is minus the total outflow rate of y_i. Columns sum to zero.
Eigen::MatrixXd kirchhoff_matrix(const EGraph& g, const RateVector& k, int component);

struct KirchhoffData {
    std::vector<Eigen::MatrixXd> matrices;  // one per component
    Eigen::VectorXd tree_constants;         // all m vertices, global indexing
};

// K_i = (-1)^(|V_p|-1) * principal minor of A_k at vertex i. Equals the sum
// over spanning trees of the component directed toward y_i of the product of
// edge rates. Throws NotWeaklyReversible when some K_i is structurally zero.
KirchhoffData kirchhoff_data(const EGraph& g, const RateVector& k);
Eigen::VectorXd tree_constants(const EGraph& g, const RateVector& k);

// Stacked log-linear system over consecutive vertex pairs within each
// component: row (y_i - y_{i+1})^T X = ln(K_i / K_{i+1}).
struct LogBalanceSystem {
    Eigen::MatrixXd delta_y;   // (m - l) x n
    Eigen::VectorXd log_dK;    // m - l
    std::vector<std::pair<int, int>> pairs;  // global vertex index pairs per row
};

LogBalanceSystem log_balance_system(const EGraph& g, const Eigen::VectorXd& K);

struct MembershipResult {
    bool is_member = false;
    Eigen::VectorXd log_solution;  // minimum-norm least-squares X-hat
    double residual = 0.0;
    double tolerance_used = 0.0;
};

// Complex-balance membership: k lies in the toric locus iff the stacked
// log-linear system is consistent (least-squares residual <= tol).
MembershipResult toric_membership(const EGraph& g, const RateVector& k,
                                  double tol = kDefaultMembershipTol);

// Max over vertices of |outflow - inflow| / max(inflow, outflow) for the
// edge fluxes k_e x^{y_src(e)} at state x. Zero exactly at complex-balanced
// states.
double complex_balance_error(const EGraph& g, const RateVector& k,
                             const Eigen::VectorXd& x);

}  // namespace toricnet

#endif
