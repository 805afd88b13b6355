#include "toricnet/kirchhoff.hpp"

#include <cmath>
#include <stdexcept>

#include "toricnet/errors.hpp"
#include "toricnet/lincore.hpp"

namespace toricnet {

void check_rate_vector(const EGraph& g, const RateVector& k) {
    if (k.size() != g.edge_count())
        throw std::invalid_argument("rate vector has " + std::to_string(k.size()) +
                                    " entries, network has " +
                                    std::to_string(g.edge_count()) + " reactions");
    for (Eigen::Index e = 0; e < k.size(); ++e) {
        if (!(k(e) > 0.0))
            throw std::invalid_argument("rate constant " + std::to_string(e) +
                                        " must be positive");
    }
}

Eigen::MatrixXd kirchhoff_matrix(const EGraph& g, const RateVector& k, int component) {
    check_rate_vector(g, k);
    if (component < 0 || component >= g.component_count())
        throw std::invalid_argument("component index out of range");
    const std::vector<int>& verts = g.components()[component];
    const int mp = static_cast<int>(verts.size());
    std::vector<int> local(g.vertex_count(), -1);
    for (int i = 0; i < mp; ++i) local[verts[i]] = i;

    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(mp, mp);
    for (const Edge& e : g.edges()) {
        const int li = local[e.source];
        if (li < 0) continue;  // edges never cross components
        const int lj = local[e.target];
        A(lj, li) += k(e.index);
        A(li, li) -= k(e.index);
    }
    return A;
}

KirchhoffData kirchhoff_data(const EGraph& g, const RateVector& k) {
    check_rate_vector(g, k);
    KirchhoffData data;
    data.tree_constants.resize(g.vertex_count());
    for (int p = 0; p < g.component_count(); ++p) {
        const std::vector<int>& verts = g.components()[p];
        const int mp = static_cast<int>(verts.size());
        Eigen::MatrixXd A = kirchhoff_matrix(g, k, p);
        const double sign = (mp - 1) % 2 == 0 ? 1.0 : -1.0;
        for (int i = 0; i < mp; ++i)
            data.tree_constants(verts[i]) = sign * principal_minor(A, i);
        data.matrices.push_back(std::move(A));

        double kmax = 0.0;
        for (int v : verts) kmax = std::max(kmax, data.tree_constants(v));
        for (int v : verts) {
            if (data.tree_constants(v) <= kTreeConstantZeroTol * kmax)
                throw NotWeaklyReversible(
                    "tree constant of vertex '" + g.vertex(v).label +
                    "' is structurally zero; its component is not strongly connected");
        }
    }
    return data;
}

Eigen::VectorXd tree_constants(const EGraph& g, const RateVector& k) {
    return kirchhoff_data(g, k).tree_constants;
}

LogBalanceSystem log_balance_system(const EGraph& g, const Eigen::VectorXd& K) {
    if (K.size() != g.vertex_count())
        throw std::invalid_argument("tree constant vector has wrong size");
    const int rows = g.vertex_count() - g.component_count();
    LogBalanceSystem sys;
    sys.delta_y.resize(rows, g.species_count());
    sys.log_dK.resize(rows);
    int r = 0;
    for (const auto& comp : g.components()) {
        for (size_t t = 0; t + 1 < comp.size(); ++t) {
            const int i = comp[t];
            const int j = comp[t + 1];
            sys.delta_y.row(r) =
                (g.vertex(i).exponents - g.vertex(j).exponents).transpose();
            sys.log_dK(r) = std::log(K(i)) - std::log(K(j));
            sys.pairs.emplace_back(i, j);
            ++r;
        }
    }
    return sys;
}

double complex_balance_error(const EGraph& g, const RateVector& k,
                             const Eigen::VectorXd& x) {
    check_rate_vector(g, k);
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        if (!(x(i) > 0.0))
            throw std::invalid_argument("complex_balance_error: state must be positive");
    }
    const Eigen::VectorXd log_x = x.array().log();
    Eigen::VectorXd flux(g.edge_count());
    for (const Edge& e : g.edges())
        flux(e.index) = k(e.index) * std::exp(g.vertex(e.source).exponents.dot(log_x));
    double worst = 0.0;
    for (int v = 0; v < g.vertex_count(); ++v) {
        double in = 0.0, out = 0.0;
        for (int e : g.in_edges(v)) in += flux(e);
        for (int e : g.out_edges(v)) out += flux(e);
        worst = std::max(worst, std::abs(in - out) / std::max(in, out));
    }
    return worst;
}

MembershipResult toric_membership(const EGraph& g, const RateVector& k, double tol) {
    const Eigen::VectorXd K = tree_constants(g, k);
    const LogBalanceSystem sys = log_balance_system(g, K);

    MembershipResult out;
    out.tolerance_used = tol;
    if (sys.delta_y.rows() == 0) {
        // No constraints (every component a single pair is impossible here,
        // but an edgeless graph is): trivially consistent.
        out.is_member = true;
        out.log_solution = Eigen::VectorXd::Zero(g.species_count());
        return out;
    }
    const LeastSquaresResult ls = least_squares(sys.delta_y, sys.log_dK);
    out.log_solution = ls.solution;
    out.residual = ls.residual_norm;
    out.is_member = ls.residual_norm <= tol;
    return out;
}

}  // namespace toricnet
