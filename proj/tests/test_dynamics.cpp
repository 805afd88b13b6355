#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "testutil.hpp"
#include "toricnet/dynamics.hpp"
#include "toricnet/equilibrium.hpp"
#include "toricnet/errors.hpp"

using namespace toricnet;
using testutil::load;
using testutil::Rng;
using testutil::vec;

TEST_CASE("mass-action right-hand side by hand") {
    const EGraph ab = load("ab.crn").graph;
    // 2*1*(-1,1) + 3*1*(1,-1) = (1,-1)
    CHECK(mass_action_rhs(ab, vec({2, 3}), vec({1, 1})) == vec({1, -1}));

    const EGraph cyc = load("3cycle.crn").graph;
    CHECK(mass_action_rhs(cyc, vec({1, 1, 1}), vec({1, 1, 1})).norm() == 0.0);

    CHECK_THROWS_AS(mass_action_rhs(ab, vec({2, 3}), vec({1, 0})), NonPositiveState);
}

TEST_CASE("rhs vanishes at computed equilibria") {
    Rng rng(11);
    for (const char* name :
         {"ab.crn", "segre.crn", "3cycle.crn", "a2b.crn", "triangle.crn", "square.crn",
          "birth.crn"}) {
        const auto net = load(name);
        const auto sd = stoich_decomp(net.graph);
        const Eigen::VectorXd k = resolve_rates(net);
        const Eigen::VectorXd x0 = rng.positive_vector(net.graph.species_count(), 0.3, 3.0);
        const Eigen::VectorXd x_star = equilibrium_from_rates(net.graph, k, x0, sd).x_star;
        const double scale = mass_action_rhs(net.graph, k, x0).norm() + 1.0;
        CHECK_MESSAGE(mass_action_rhs(net.graph, k, x_star).norm() <= 1e-8 * scale, name);
    }
}

TEST_CASE("segre trajectory reaches the equilibrium") {
    const auto net = load("segre.crn");
    const Eigen::VectorXd k = vec({2, 3, 4, 6});
    const Trajectory traj = integrate(net.graph, k, vec({1, 1}), 50.0);
    CHECK((traj.states.back() - vec({1.2, 0.8})).norm() <= 1e-6);
    CHECK(traj.conserved_drift <= 100.0 * 1e-8 * vec({1, 1}).norm());
    const ConvergenceReport rep = convergence_report(traj, vec({1.2, 0.8}));
    CHECK(rep.final_distance <= 1e-6);
    CHECK(rep.monotone_tail);
}

TEST_CASE("starting at the equilibrium stays there") {
    const auto net = load("segre.crn");
    const Eigen::VectorXd k = vec({2, 3, 4, 6});
    const Trajectory traj = integrate(net.graph, k, vec({1.2, 0.8}), 10.0);
    for (const auto& x : traj.states) CHECK((x - vec({1.2, 0.8})).norm() <= 1e-7);
    const ConvergenceReport rep = convergence_report(traj, vec({1.2, 0.8}));
    CHECK(rep.final_distance <= 1e-8);
}

TEST_CASE("positivity guard near the orthant boundary") {
    const auto net = load("ab.crn");
    const Eigen::VectorXd k = vec({2, 3});
    const Trajectory traj = integrate(net.graph, k, vec({2.0, 0.0001}), 20.0);
    for (const auto& x : traj.states) CHECK(x.minCoeff() > 0.0);
    // conservation total 2.0001 splits 3:2
    const Eigen::VectorXd want = (2.0001 / 5.0) * vec({3.0, 2.0});
    CHECK((traj.states.back() - want).norm() <= 1e-6);
}

TEST_CASE("zero horizon produces the single-row trajectory") {
    const auto net = load("ab.crn");
    const Trajectory traj = integrate(net.graph, vec({2, 3}), vec({1, 1}), 0.0);
    REQUIRE(traj.times.size() == 1);
    CHECK(traj.states[0] == vec({1, 1}));
    std::ostringstream os;
    write_trajectory_csv(traj, os);
    CHECK(os.str() == "t,x1,x2\n0,1,1\n");
}

TEST_CASE("trajectories conserve S-perp projections and stay positive") {
    Rng rng(23);
    for (const char* name : {"segre.crn", "3cycle.crn", "a2b.crn", "triangle.crn"}) {
        const auto net = load(name);
        const auto sd = stoich_decomp(net.graph);
        const Eigen::VectorXd k = resolve_rates(net);
        for (int i = 0; i < 3; ++i) {
            const Eigen::VectorXd x0 =
                rng.positive_vector(net.graph.species_count(), 0.25, 2.5);
            const Trajectory traj = integrate(net.graph, k, x0, 20.0);
            CHECK_MESSAGE(traj.conserved_drift <= 100.0 * 1e-8 * x0.norm(), name);
            for (const auto& x : traj.states) CHECK(x.minCoeff() > 0.0);
        }
    }
}

TEST_CASE("trajectories converge to the computed equilibrium (local stability)") {
    Rng rng(37);
    struct Case {
        const char* name;
        double horizon;
    };
    for (const Case c : {Case{"ab.crn", 10.0}, Case{"segre.crn", 50.0},
                         Case{"3cycle.crn", 20.0}, Case{"a2b.crn", 30.0},
                         Case{"triangle.crn", 20.0}, Case{"square.crn", 30.0},
                         Case{"birth.crn", 20.0}}) {
        const auto net = load(c.name);
        const auto sd = stoich_decomp(net.graph);
        const Eigen::VectorXd k = resolve_rates(net);
        for (int i = 0; i < 3; ++i) {
            const Eigen::VectorXd x0 =
                rng.positive_vector(net.graph.species_count(), 0.25, 2.5);
            const Eigen::VectorXd x_star =
                equilibrium_from_rates(net.graph, k, x0, sd).x_star;
            const Trajectory traj = integrate(net.graph, k, x0, c.horizon);
            CHECK_MESSAGE((traj.states.back() - x_star).norm() <= 1e-6, c.name);
        }
    }
}

TEST_CASE("csv export shape") {
    const auto net = load("3cycle.crn");
    const Trajectory traj = integrate(net.graph, vec({1, 2, 3}), vec({1, 1, 1}), 1.0);
    std::ostringstream os;
    write_trajectory_csv(traj, os);
    std::istringstream is(os.str());
    std::string header;
    std::getline(is, header);
    CHECK(header == "t,x1,x2,x3");
    size_t rows = 0;
    std::string line;
    while (std::getline(is, line))
        if (!line.empty()) ++rows;
    CHECK(rows == traj.times.size());
}
