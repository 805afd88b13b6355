// Acceptance suite: runs every acceptance criterion at its pinned tolerance
// and prints one PASS/FAIL line per criterion. Exit code 0 iff all pass.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "testutil.hpp"
#include "toricnet/dynamics.hpp"
#include "toricnet/equilibrium.hpp"
#include "toricnet/fluxcone.hpp"
#include "toricnet/kirchhoff.hpp"
#include "toricnet/netmodel.hpp"

using namespace toricnet;
using testutil::Rng;
using Clock = std::chrono::steady_clock;

namespace {

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct System {
    const char* file;
    double horizon;  // documented integration horizon for the convergence check
};

// Member systems: every file's rate vector lies in the toric locus.
const std::vector<System> kCorpus = {
    {"ab.crn", 20.0},    {"segre.crn", 60.0},  {"3cycle.crn", 30.0},
    {"a2b.crn", 40.0},   {"triangle.crn", 30.0}, {"square.crn", 40.0},
    {"birth.crn", 30.0},
};

bool g_all_pass = true;

void report(int criterion, bool pass, const std::string& detail) {
    std::printf("[%s] criterion %d: %s\n", pass ? "PASS" : "FAIL", criterion,
                detail.c_str());
    g_all_pass = g_all_pass && pass;
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3g", v);
    return buf;
}

// --------------------------------------------------------------------------
// 1. Segre condition: k43 = k34 k21 / k12 is a member, a >=1% perturbation of
//    k43 is not; 1000 random draws in under a second.
// --------------------------------------------------------------------------
void criterion_segre_condition() {
    const EGraph g = testutil::load("segre.crn").graph;
    Rng rng(20260810);
    const int draws = 1000;
    int members = 0, rejected = 0;
    double worst_residual = 0.0;

    const auto t0 = Clock::now();
    for (int i = 0; i < draws; ++i) {
        const double k12 = rng.log_uniform(0.1, 10.0);
        const double k21 = rng.log_uniform(0.1, 10.0);
        const double k34 = rng.log_uniform(0.1, 10.0);
        const double k43 = k34 * k21 / k12;
        Eigen::VectorXd k(4);
        k << k12, k21, k34, k43;
        const MembershipResult m = toric_membership(g, k, 1e-9);
        if (m.is_member) ++members;
        worst_residual = std::max(worst_residual, m.residual);

        k(3) = k43 * (1.0 + 0.01 + 0.04 * rng.unit());  // >= 1% off the locus
        if (!toric_membership(g, k, 1e-9).is_member) ++rejected;
    }
    const double elapsed = seconds_since(t0);

    const bool pass =
        members == draws && rejected == draws && worst_residual <= 1e-9 && elapsed < 1.0;
    report(1, pass,
           "Segre condition: " + std::to_string(members) + "/" + std::to_string(draws) +
               " on-locus members (max residual " + fmt(worst_residual) + "), " +
               std::to_string(rejected) + "/" + std::to_string(draws) +
               " perturbed non-members, " + fmt(elapsed) + " s");
}

// --------------------------------------------------------------------------
// 2. Matrix-tree oracle: tree constants equal rooted spanning-tree sums.
// --------------------------------------------------------------------------
void criterion_matrix_tree() {
    Rng rng(777);
    int checked = 0;
    double worst = 0.0;
    for (const System& sys : kCorpus) {
        const auto net = testutil::load(sys.file);
        for (int draw = 0; draw < 6; ++draw) {
            const Eigen::VectorXd k =
                draw == 0 ? resolve_rates(net)
                          : Eigen::VectorXd(rng.positive_vector(net.graph.edge_count(),
                                                                0.1, 10.0));
            const Eigen::VectorXd K = tree_constants(net.graph, k);
            for (int v = 0; v < net.graph.vertex_count(); ++v) {
                const double brute = oracles::rooted_tree_weight(net.graph, k, v);
                worst = std::max(worst, std::abs(K(v) - brute) / brute);
                ++checked;
            }
        }
    }
    report(2, worst <= 1e-9,
           "matrix-tree oracle: " + std::to_string(checked) +
               " tree constants vs enumeration, max relative error " + fmt(worst));
}

// --------------------------------------------------------------------------
// 3. Equilibrium correctness across the corpus: complex balance at x*,
//    x* in x0 + S, ln x* in X* + S-perp.
// --------------------------------------------------------------------------
void criterion_equilibrium() {
    Rng rng(31337);
    double worst_cb = 0.0, worst_class = 0.0, worst_log = 0.0;
    int solves = 0;
    for (const System& sys : kCorpus) {
        const auto net = testutil::load(sys.file);
        const EGraph& g = net.graph;
        const auto sd = stoich_decomp(g);
        const Eigen::VectorXd k = resolve_rates(net);
        const EquilibriumMap P = equilibrium_from_initial(g, k, sd);
        for (int i = 0; i < 50; ++i) {
            const Eigen::VectorXd x0 = rng.positive_vector(g.species_count(), 0.2, 4.0);
            const BirchResult eq = P(x0);
            worst_cb = std::max(worst_cb, complex_balance_error(g, k, eq.x_star));
            worst_class = std::max(worst_class,
                                   (sd.basis_Sperp.transpose() * (eq.x_star - x0))
                                       .lpNorm<Eigen::Infinity>());
            const Eigen::VectorXd log_gap =
                Eigen::VectorXd(eq.x_star.array().log()) - P.log_equilibrium();
            worst_log = std::max(
                worst_log, (sd.basis_S.transpose() * log_gap).lpNorm<Eigen::Infinity>());
            ++solves;
        }
    }
    const bool pass = worst_cb <= 1e-8 && worst_class <= 1e-9 && worst_log <= 1e-9;
    report(3, pass,
           "equilibrium correctness: " + std::to_string(solves) +
               " solves; complex-balance error " + fmt(worst_cb) +
               " (tol 1e-8), class gap " + fmt(worst_class) + ", log-class gap " +
               fmt(worst_log) + " (tol 1e-9)");
}

// --------------------------------------------------------------------------
// 4. Homeomorphism roundtrip: phi_inverse(phi_embedding(x, beta)) = (x, beta)
//    with x0 = x, 500 samples per network.
// --------------------------------------------------------------------------
void criterion_roundtrip() {
    Rng rng(424242);
    double worst = 0.0;
    int samples = 0;
    for (const System& sys : kCorpus) {
        const EGraph g = testutil::load(sys.file).graph;
        const auto sd = stoich_decomp(g);
        const FluxSpace fs = flux_space(g);
        for (int i = 0; i < 500; ++i) {
            const Eigen::VectorXd x = rng.positive_vector(g.species_count(), 0.25, 4.0);
            FluxVector beta = sample_flux(g, fs, rng.next());
            beta.values *= rng.log_uniform(0.5, 2.0);
            const RateVector k = phi_embedding(x, beta, g);
            const auto [x_back, beta_back] = phi_inverse(g, k, x, sd);
            worst = std::max(worst, (x_back - x).norm() / x.norm());
            worst = std::max(worst,
                             (beta_back.values - beta.values).norm() / beta.values.norm());
            ++samples;
        }
    }
    report(4, worst <= 1e-8,
           "homeomorphism roundtrip: " + std::to_string(samples) +
               " samples, max relative error " + fmt(worst) + " (tol 1e-8)");
}

// --------------------------------------------------------------------------
// 5. Immersion rank and analytic-vs-FD Jacobian at 100 interior points per
//    network.
// --------------------------------------------------------------------------
void criterion_immersion() {
    Rng rng(5150);
    int points = 0, rank_pass = 0;
    double worst_fd = 0.0;
    for (const System& sys : kCorpus) {
        const EGraph g = testutil::load(sys.file).graph;
        const auto sd = stoich_decomp(g);
        const FluxSpace fs = flux_space(g);
        for (int i = 0; i < 100; ++i) {
            const Eigen::VectorXd x = rng.positive_vector(g.species_count(), 0.2, 5.0);
            const FluxVector beta = sample_flux(g, fs, rng.next());
            if (immersion_rank_check(x, beta.values, g, sd, fs).pass) ++rank_pass;
            const Eigen::MatrixXd J = phi_hat_jacobian(x, beta.values, g);
            const Eigen::MatrixXd J_fd = phi_hat_jacobian_fd(x, beta.values, g);
            worst_fd = std::max(
                worst_fd, (J - J_fd).cwiseAbs().maxCoeff() / J.cwiseAbs().maxCoeff());
            ++points;
        }
    }
    const bool pass = rank_pass == points && worst_fd <= 1e-6;
    report(5, pass,
           "immersion rank: " + std::to_string(rank_pass) + "/" + std::to_string(points) +
               " points at full tangent rank; Jacobian FD error " + fmt(worst_fd) +
               " (tol 1e-6)");
}

// --------------------------------------------------------------------------
// 6. Smooth dependence: Richardson ratios of central differences across
//    three halvings. Rate probes on Segre and the 3-cycle move along curved
//    on-locus curves and must show ratios inside [3.5, 4.5]. The x0 response
//    on those two networks is exactly linear (S-perp is spanned by a uniform
//    vector), so their difference ladders sit at the numerical floor; the
//    curved x0 response of a2b supplies the in-window evidence for Thm-style
//    initial-condition smoothness.
// --------------------------------------------------------------------------
struct ProbeCase {
    const char* file;
    ProbeTarget target;
    Eigen::VectorXd direction;
    bool expect_window;  // require genuine in-window ratios (not at floor)
};

void criterion_smooth_dependence() {
    std::vector<ProbeCase> cases;
    {
        // Segre rate probe: generic tangent at k = (2,3,4,6)
        const Eigen::VectorXd normal = testutil::vec({6, -4, -3, 2});
        Eigen::VectorXd d = testutil::vec({1.0, 0.3, -0.4, 0.2});
        d -= normal * (normal.dot(d) / normal.squaredNorm());
        cases.push_back({"segre.crn", ProbeTarget::Rates, d, true});
    }
    cases.push_back({"3cycle.crn", ProbeTarget::Rates,
                     testutil::vec({0.4, -0.3, 0.5}), true});
    cases.push_back({"segre.crn", ProbeTarget::InitialCondition,
                     testutil::vec({0.7, 0.4}), false});
    cases.push_back({"3cycle.crn", ProbeTarget::InitialCondition,
                     testutil::vec({1.0, -0.5, 0.25}), false});
    cases.push_back({"a2b.crn", ProbeTarget::InitialCondition,
                     testutil::vec({1.0, 0.0}), true});

    bool pass = true;
    std::string detail;
    for (const ProbeCase& pc : cases) {
        const auto net = testutil::load(pc.file);
        const auto sd = stoich_decomp(net.graph);
        const Eigen::VectorXd k = resolve_rates(net);
        const Eigen::VectorXd x0 =
            Eigen::VectorXd::Ones(net.graph.species_count());
        const ProbeResult probe = smooth_dependence_probe(
            net.graph, k, x0, sd, pc.target, pc.direction);

        bool case_ok = probe.consistent;
        std::string ratios;
        for (size_t j = 0; j < probe.ratios.size(); ++j) {
            if (pc.expect_window) {
                case_ok = case_ok && !probe.at_floor[j] && probe.ratios[j] >= 3.5 &&
                          probe.ratios[j] <= 4.5;
            }
            if (!ratios.empty()) ratios += ",";
            ratios += probe.at_floor[j] ? "floor" : fmt(probe.ratios[j]);
        }
        pass = pass && case_ok;
        if (!detail.empty()) detail += "; ";
        detail += std::string(pc.file) + "/" +
                  (pc.target == ProbeTarget::Rates ? "rates" : "x0") + " [" + ratios + "]";
    }
    report(6, pass, "smooth dependence, Richardson ratios (window [3.5,4.5]): " + detail);
}

// --------------------------------------------------------------------------
// 7. Dynamics consistency: conservation and convergence to x* from 20 random
//    initial conditions per system.
// --------------------------------------------------------------------------
void criterion_dynamics() {
    Rng rng(600613);
    const double rtol = 1e-8;
    double worst_drift_ratio = 0.0, worst_distance = 0.0;
    int runs = 0;
    const auto t0 = Clock::now();
    for (const System& sys : kCorpus) {
        const auto net = testutil::load(sys.file);
        const EGraph& g = net.graph;
        const auto sd = stoich_decomp(g);
        const Eigen::VectorXd k = resolve_rates(net);
        const EquilibriumMap P = equilibrium_from_initial(g, k, sd);
        for (int i = 0; i < 20; ++i) {
            const Eigen::VectorXd x0 = rng.positive_vector(g.species_count(), 0.25, 2.5);
            IntegrateOptions opts;
            opts.rtol = rtol;
            const Trajectory traj = integrate(g, k, x0, sys.horizon, opts);
            worst_drift_ratio = std::max(
                worst_drift_ratio, traj.conserved_drift / (100.0 * rtol * x0.norm()));
            worst_distance =
                std::max(worst_distance, (traj.states.back() - P(x0).x_star).norm());
            ++runs;
        }
    }
    const double elapsed = seconds_since(t0);
    const bool pass = worst_drift_ratio <= 1.0 && worst_distance <= 1e-6 && elapsed < 60.0;
    report(7, pass,
           "dynamics: " + std::to_string(runs) + " trajectories; conserved drift at " +
               fmt(worst_drift_ratio) + " of budget, final distance to x* " +
               fmt(worst_distance) + " (tol 1e-6), " + fmt(elapsed) + " s");
}

}  // namespace

int main() {
    const auto t0 = Clock::now();
    criterion_segre_condition();
    criterion_matrix_tree();
    criterion_equilibrium();
    criterion_roundtrip();
    criterion_immersion();
    criterion_smooth_dependence();
    criterion_dynamics();
    std::printf("acceptance suite %s in %.1f s\n", g_all_pass ? "PASSED" : "FAILED",
                seconds_since(t0));
    return g_all_pass ? 0 : 1;
}
