#ifndef TORICNET_LINCORE_HPP
#define TORICNET_LINCORE_HPP

#include <Eigen/Dense>
#include <vector>

namespace toricnet {

// One rank-tolerance convention library-wide: a singular value counts as
// nonzero when it exceeds rank_tol times the largest singular value.
inline constexpr double kDefaultRankTol = 1e-10;

struct LeastSquaresResult {
    Eigen::VectorXd solution;
    double residual_norm = 0.0;
    int rank = 0;
};

// Number of singular values above rank_tol * sigma_max.
int numerical_rank(const Eigen::VectorXd& singular_values, double rank_tol);

// Orthonormal basis of ker(A). Columns of the returned matrix are the basis
// vectors; zero columns means trivial kernel. Sign-normalized so the entry of
// largest magnitude in each vector is positive (deterministic output).
Eigen::MatrixXd orthonormal_nullspace(const Eigen::MatrixXd& A,
                                      double rank_tol = kDefaultRankTol);

// Minimum-norm least-squares solution of A x = b with residual and rank.
LeastSquaresResult least_squares(const Eigen::MatrixXd& A,
                                 const Eigen::VectorXd& b,
                                 double rank_tol = kDefaultRankTol);

// Determinant of A with row i and column i removed (0-based index).
// A 1x1 input yields the empty determinant, 1.
double principal_minor(const Eigen::MatrixXd& A, int index);

// Determinant via pivoted LU.
double determinant(const Eigen::MatrixXd& A);

// Flip vector signs so the entry of largest magnitude is positive.
void normalize_column_signs(Eigen::MatrixXd& M);

}  // namespace toricnet

#endif
