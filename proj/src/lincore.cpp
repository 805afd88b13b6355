#include "toricnet/lincore.hpp"

#include <cmath>
#include <stdexcept>

namespace toricnet {

int numerical_rank(const Eigen::VectorXd& singular_values, double rank_tol) {
    if (singular_values.size() == 0) return 0;
    const double cut = rank_tol * singular_values(0);
    int rank = 0;
    for (Eigen::Index i = 0; i < singular_values.size(); ++i) {
        if (singular_values(i) > cut) ++rank;
    }
    return rank;
}

void normalize_column_signs(Eigen::MatrixXd& M) {
    for (Eigen::Index j = 0; j < M.cols(); ++j) {
        Eigen::Index imax = 0;
        M.col(j).cwiseAbs().maxCoeff(&imax);
        if (M(imax, j) < 0.0) M.col(j) = -M.col(j);
    }
}

Eigen::MatrixXd orthonormal_nullspace(const Eigen::MatrixXd& A, double rank_tol) {
    if (A.size() == 0) throw std::invalid_argument("orthonormal_nullspace: empty matrix");
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeFullV);
    const int rank = numerical_rank(svd.singularValues(), rank_tol);
    Eigen::MatrixXd kernel = svd.matrixV().rightCols(A.cols() - rank);
    normalize_column_signs(kernel);
    return kernel;
}

LeastSquaresResult least_squares(const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                                 double rank_tol) {
    if (A.rows() != b.size()) throw std::invalid_argument("least_squares: dimension mismatch");
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
    svd.setThreshold(rank_tol);
    LeastSquaresResult out;
    out.solution = svd.solve(b);
    out.residual_norm = (A * out.solution - b).norm();
    out.rank = numerical_rank(svd.singularValues(), rank_tol);
    return out;
}

double determinant(const Eigen::MatrixXd& A) {
    if (A.rows() != A.cols()) throw std::invalid_argument("determinant: matrix not square");
    if (A.rows() == 0) return 1.0;  // empty product
    return Eigen::FullPivLU<Eigen::MatrixXd>(A).determinant();
}

double principal_minor(const Eigen::MatrixXd& A, int index) {
    const Eigen::Index n = A.rows();
    if (n != A.cols()) throw std::invalid_argument("principal_minor: matrix not square");
    if (index < 0 || index >= n) throw std::invalid_argument("principal_minor: index out of range");
    Eigen::MatrixXd sub(n - 1, n - 1);
    for (Eigen::Index r = 0, rs = 0; r < n; ++r) {
        if (r == index) continue;
        for (Eigen::Index c = 0, cs = 0; c < n; ++c) {
            if (c == index) continue;
            sub(rs, cs) = A(r, c);
            ++cs;
        }
        ++rs;
    }
    return determinant(sub);
}

}  // namespace toricnet
