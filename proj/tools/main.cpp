#include <CLI11.hpp>
#include <iostream>

#include "toricnet/cli.hpp"
#include "toricnet/errors.hpp"

namespace {

using toricnet::cli::Options;

void add_network_arg(CLI::App* sub, Options& opt) {
    sub->add_option("network", opt.network, "reaction network file (.crn)")
        ->required()
        ->check(CLI::ExistingFile);
    sub->add_option("--set", opt.set_bindings,
                    "bind a $name rate placeholder, as name=value (repeatable)");
    sub->add_option("--rank-tol", opt.rank_tol,
                    "relative singular-value threshold for numerical rank")
        ->capture_default_str();
}

void add_rates_arg(CLI::App* sub, Options& opt) {
    sub->add_option("--rates", opt.rates,
                    "rate constants: comma list in edge order, or name=value pairs "
                    "for $placeholders");
    sub->add_option("--tol", opt.tol, "toric membership residual tolerance")
        ->capture_default_str();
}

void add_solver_args(CLI::App* sub, Options& opt) {
    sub->add_option("--grad-tol", opt.grad_tol,
                    "Birch solver convergence tolerance on the gradient max-norm")
        ->capture_default_str();
    sub->add_option("--max-iter", opt.max_iter, "Birch solver iteration cap")
        ->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "toricnet: complex-balanced mass-action networks. Decides toric-locus\n"
        "membership, computes complex-balanced equilibria in invariant polyhedra,\n"
        "and verifies the flux-cone embedding of the toric locus."};
    app.require_subcommand(1);
    argv = app.ensure_utf8(argv);

    Options opt;

    CLI::App* info = app.add_subcommand(
        "info", "network summary: species, vertices, reactions, components, dims");
    add_network_arg(info, opt);

    CLI::App* check =
        app.add_subcommand("check", "toric-locus membership test (exit 0 member, 2 not)");
    add_network_arg(check, opt);
    add_rates_arg(check, opt);

    CLI::App* eq = app.add_subcommand(
        "eq", "complex-balanced equilibrium in the invariant polyhedron of --x0");
    add_network_arg(eq, opt);
    add_rates_arg(eq, opt);
    add_solver_args(eq, opt);
    eq->add_option("--x0", opt.x0, "initial condition, comma list")->required();

    CLI::App* embed = app.add_subcommand(
        "embed", "rate vector phi(x, beta) with Jacobian and immersion-rank checks");
    add_network_arg(embed, opt);
    embed->add_option("--x", opt.x, "positive state, comma list")->required();
    embed->add_option("--beta", opt.beta, "balanced positive flux, comma list");
    embed
        ->add_option("--sample-seed", opt.seed,
                     "seed for a sampled flux (default: TORICNET_SEED or 0)")
        ->each([&opt](const std::string&) { opt.seed_given = true; });
    embed->add_option("--tol", opt.tol, "toric membership residual tolerance")
        ->capture_default_str();

    CLI::App* simulate =
        app.add_subcommand("simulate", "integrate the mass-action ODE, optionally to CSV");
    add_network_arg(simulate, opt);
    add_rates_arg(simulate, opt);
    simulate->add_option("--x0", opt.x0, "initial condition, comma list")->required();
    simulate->add_option("--t-end", opt.t_end, "integration horizon")->required();
    simulate->add_option("--out", opt.out_csv, "trajectory CSV path");
    simulate->add_option("--rtol", opt.rtol, "relative integration tolerance")
        ->capture_default_str();
    simulate->add_option("--atol", opt.atol, "absolute integration tolerance")
        ->capture_default_str();

    CLI::App* probe = app.add_subcommand(
        "probe", "central-difference smoothness probe of the equilibrium map");
    add_network_arg(probe, opt);
    add_rates_arg(probe, opt);
    add_solver_args(probe, opt);
    probe->add_option("--x0", opt.x0, "base initial condition, comma list")->required();
    probe->add_option("--direction", opt.direction, "probe direction, comma list")
        ->required();
    probe->add_option("--target", opt.target, "x0 | rates")->capture_default_str();
    probe->add_option("--h0", opt.h0, "largest step size")->capture_default_str();
    probe->add_option("--steps", opt.steps, "number of halved step sizes")
        ->capture_default_str();
    probe->add_option("--jobs", opt.jobs, "parallel evaluations for the step grid")
        ->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    try {
        nlohmann::json report;
        const int code =
            toricnet::cli::run_command(app.get_subcommands().front()->get_name(), opt, report);
        std::cout << report.dump(2) << "\n";
        return code;
    } catch (const toricnet::NotInToricLocus& e) {
        std::cerr << "error: " << e.what() << "\n";
        return toricnet::cli::kExitNegative;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return toricnet::cli::kExitError;
    }
}
