#include "toricnet/fluxcone.hpp"

#include <cmath>
#include <deque>
#include <stdexcept>
#include <vector>

#include "toricnet/equilibrium.hpp"
#include "toricnet/errors.hpp"
#include "toricnet/lincore.hpp"

namespace toricnet {

FluxSpace flux_space(const EGraph& g, double rank_tol) {
    FluxSpace fs;
    fs.balance_matrix = Eigen::MatrixXd::Zero(g.vertex_count(), g.edge_count());
    for (const Edge& e : g.edges()) {
        fs.balance_matrix(e.target, e.index) += 1.0;
        fs.balance_matrix(e.source, e.index) -= 1.0;
    }
    if (g.edge_count() == 0) {
        fs.basis.resize(0, 0);
        fs.dim = 0;
        return fs;
    }
    fs.basis = orthonormal_nullspace(fs.balance_matrix, rank_tol);
    fs.dim = static_cast<int>(fs.basis.cols());
    return fs;
}

double flux_balance_error(const EGraph& g, const Eigen::VectorXd& beta) {
    if (beta.size() != g.edge_count())
        throw std::invalid_argument("flux vector has wrong size");
    double worst = 0.0;
    for (int v = 0; v < g.vertex_count(); ++v) {
        double in = 0.0, out = 0.0;
        for (int e : g.in_edges(v)) in += beta(e);
        for (int e : g.out_edges(v)) out += beta(e);
        worst = std::max(worst, std::abs(in - out) / std::max(1.0, in + out));
    }
    return worst;
}

namespace {

// Deterministic uniform draw in [0.5, 1.5); avoids std::uniform_real_distribution
// so identical seeds reproduce identical fluxes on every platform.
double cycle_weight(std::uint64_t& state) {
    state = state * 6364136223846793005ULL + 1442695040888963407ULL;
    const double unit = static_cast<double>(state >> 11) * 0x1.0p-53;
    return 0.5 + unit;
}

// Edge indices of a shortest directed path from `from` to `to`, or empty when
// unreachable (and from != to).
std::vector<int> shortest_path_edges(const EGraph& g, int from, int to) {
    std::vector<int> via_edge(g.vertex_count(), -1);
    std::vector<bool> seen(g.vertex_count(), false);
    std::deque<int> queue{from};
    seen[from] = true;
    while (!queue.empty() && !seen[to]) {
        const int v = queue.front();
        queue.pop_front();
        for (int e : g.out_edges(v)) {
            const int w = g.edge(e).target;
            if (!seen[w]) {
                seen[w] = true;
                via_edge[w] = e;
                queue.push_back(w);
            }
        }
    }
    if (!seen[to]) return {};
    std::vector<int> path;
    for (int v = to; v != from; v = g.edge(via_edge[v]).source)
        path.push_back(via_edge[v]);
    return path;
}

}  // namespace

FluxVector sample_flux(const EGraph& g, const FluxSpace& fs, std::uint64_t seed) {
    (void)fs;  // the kernel basis is not needed; cycles balance by construction
    std::uint64_t state = seed * 0x9E3779B97F4A7C15ULL + 0xD1B54A32D192ED03ULL;
    Eigen::VectorXd beta = Eigen::VectorXd::Zero(g.edge_count());
    for (const Edge& e : g.edges()) {
        // Close the cycle through e with a shortest return path.
        const std::vector<int> back = shortest_path_edges(g, e.target, e.source);
        if (back.empty() && e.target != e.source)
            throw NotWeaklyReversible("edge " + g.vertex(e.source).label + " -> " +
                                      g.vertex(e.target).label +
                                      " lies on no directed cycle; no positive "
                                      "balanced flux exists");
        const double weight = cycle_weight(state);
        beta(e.index) += weight;
        for (int b : back) beta(b) += weight;
    }
    FluxVector out;
    out.values = beta;
    out.strictly_positive = true;
    return out;
}

namespace {

Eigen::VectorXd safe_log(const Eigen::VectorXd& x, const char* what) {
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        if (!(x(i) > 0.0))
            throw NonPositiveState(std::string(what) + " must be strictly positive");
    }
    return x.array().log();
}

}  // namespace

RateVector phi_embedding(const Eigen::VectorXd& x, const FluxVector& beta, const EGraph& g) {
    if (beta.values.size() != g.edge_count())
        throw std::invalid_argument("flux vector has wrong size");
    const Eigen::VectorXd log_x = safe_log(x, "x");
    for (Eigen::Index e = 0; e < beta.values.size(); ++e) {
        if (!(beta.values(e) > 0.0))
            throw std::invalid_argument("phi_embedding requires a strictly positive flux");
    }
    const double balance = flux_balance_error(g, beta.values);
    if (balance > kFluxBalanceTol)
        throw UnbalancedFlux("flux violates vertex balance by " + std::to_string(balance) +
                             " (tolerance " + std::to_string(kFluxBalanceTol) + ")");
    RateVector k(g.edge_count());
    for (const Edge& e : g.edges()) {
        const double log_monomial = g.vertex(e.source).exponents.dot(log_x);
        k(e.index) = std::exp(std::log(beta.values(e.index)) - log_monomial);
    }
    return k;
}

std::pair<Eigen::VectorXd, FluxVector> phi_inverse(const EGraph& g, const RateVector& k,
                                                   const Eigen::VectorXd& x0,
                                                   const StoichDecomp& sd, double tol) {
    const BirchResult eq = equilibrium_from_rates(g, k, x0, sd, tol);
    const Eigen::VectorXd log_x = eq.x_star.array().log();
    FluxVector beta;
    beta.values.resize(g.edge_count());
    for (const Edge& e : g.edges()) {
        const double log_monomial = g.vertex(e.source).exponents.dot(log_x);
        beta.values(e.index) = std::exp(std::log(k(e.index)) + log_monomial);
    }
    beta.strictly_positive = true;
    return {eq.x_star, std::move(beta)};
}

Eigen::VectorXd phi_hat(const Eigen::VectorXd& x, const Eigen::VectorXd& beta,
                        const EGraph& g) {
    if (beta.size() != g.edge_count())
        throw std::invalid_argument("flux vector has wrong size");
    const Eigen::VectorXd log_x = safe_log(x, "x");
    Eigen::VectorXd k(g.edge_count());
    for (const Edge& e : g.edges())
        k(e.index) = beta(e.index) * std::exp(-g.vertex(e.source).exponents.dot(log_x));
    return k;
}

Eigen::MatrixXd phi_hat_jacobian_fd(const Eigen::VectorXd& x, const Eigen::VectorXd& beta,
                                    const EGraph& g, double rel_step) {
    const int n = g.species_count();
    const int cols = n + g.edge_count();
    Eigen::MatrixXd J(g.edge_count(), cols);
    Eigen::VectorXd xp = x, xm = x, bp = beta, bm = beta;
    for (int j = 0; j < cols; ++j) {
        if (j < n) {
            const double h = rel_step * std::max(1.0, std::abs(x(j)));
            xp(j) = x(j) + h;
            xm(j) = x(j) - h;
            J.col(j) = (phi_hat(xp, beta, g) - phi_hat(xm, beta, g)) / (2.0 * h);
            xp(j) = x(j);
            xm(j) = x(j);
        } else {
            const int e = j - n;
            const double h = rel_step * std::max(1.0, std::abs(beta(e)));
            bp(e) = beta(e) + h;
            bm(e) = beta(e) - h;
            J.col(j) = (phi_hat(x, bp, g) - phi_hat(x, bm, g)) / (2.0 * h);
            bp(e) = beta(e);
            bm(e) = beta(e);
        }
    }
    return J;
}

Eigen::MatrixXd phi_hat_jacobian(const Eigen::VectorXd& x, const Eigen::VectorXd& beta,
                                 const EGraph& g) {
    if (beta.size() != g.edge_count())
        throw std::invalid_argument("flux vector has wrong size");
    const Eigen::VectorXd log_x = safe_log(x, "x");
    const int n = g.species_count();
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(g.edge_count(), n + g.edge_count());
    for (const Edge& e : g.edges()) {
        const Eigen::VectorXd& y = g.vertex(e.source).exponents;
        const double inv_monomial = std::exp(-y.dot(log_x));
        for (int j = 0; j < n; ++j)
            J(e.index, j) = -beta(e.index) * inv_monomial * y(j) / x(j);
        J(e.index, n + e.index) = inv_monomial;
    }
    return J;
}

RankCheck immersion_rank_check(const Eigen::VectorXd& x, const Eigen::VectorXd& beta,
                               const EGraph& g, const StoichDecomp& sd,
                               const FluxSpace& fs) {
    const Eigen::MatrixXd J = phi_hat_jacobian(x, beta, g);
    const int n = g.species_count();
    const int cols = sd.s + fs.dim;
    Eigen::MatrixXd tangent = Eigen::MatrixXd::Zero(n + g.edge_count(), cols);
    tangent.topLeftCorner(n, sd.s) = sd.basis_S;
    tangent.bottomRightCorner(g.edge_count(), fs.dim) = fs.basis;

    const Eigen::MatrixXd restricted = J * tangent;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(restricted);
    RankCheck out;
    out.rank = numerical_rank(svd.singularValues(), kRankCheckTol);
    out.expected = cols;
    out.pass = out.rank == out.expected;
    return out;
}

}  // namespace toricnet
