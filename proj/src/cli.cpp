#include "toricnet/cli.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "toricnet/dynamics.hpp"
#include "toricnet/equilibrium.hpp"
#include "toricnet/errors.hpp"
#include "toricnet/fluxcone.hpp"
#include "toricnet/kirchhoff.hpp"
#include "toricnet/netmodel.hpp"
#include "toricnet/netmodel_json.hpp"

namespace toricnet::cli {

namespace {

using nlohmann::json;

std::string read_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw Error("cannot open network file '" + path + "'");
    std::ostringstream os;
    os << is.rdbuf();
    return os.str();
}

std::vector<std::string> split_commas(const std::string& s) {
    std::vector<std::string> parts;
    std::string cur;
    for (char c : s) {
        if (c == ',') {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!cur.empty() || !parts.empty()) parts.push_back(cur);
    return parts;
}

double parse_double(const std::string& s, const char* what) {
    try {
        size_t used = 0;
        const double v = std::stod(s, &used);
        if (used != s.size()) throw std::invalid_argument("");
        return v;
    } catch (const std::exception&) {
        throw std::invalid_argument(std::string("invalid ") + what + " value '" + s + "'");
    }
}

Eigen::VectorXd parse_vector(const std::string& s, const char* what) {
    const auto parts = split_commas(s);
    Eigen::VectorXd v(static_cast<Eigen::Index>(parts.size()));
    for (size_t i = 0; i < parts.size(); ++i)
        v(static_cast<Eigen::Index>(i)) = parse_double(parts[i], what);
    return v;
}

std::map<std::string, double> parse_bindings(const std::vector<std::string>& entries) {
    std::map<std::string, double> bindings;
    for (const std::string& entry : entries) {
        const size_t eq = entry.find('=');
        if (eq == std::string::npos || eq == 0)
            throw std::invalid_argument("binding '" + entry + "' is not name=value");
        bindings[entry.substr(0, eq)] =
            parse_double(entry.substr(eq + 1), "binding");
    }
    return bindings;
}

struct LoadedNetwork {
    ParsedNetwork net;
    std::map<std::string, double> bindings;
};

LoadedNetwork load_network(const Options& opt) {
    LoadedNetwork loaded{parse_network(read_file(opt.network)),
                         parse_bindings(opt.set_bindings)};
    return loaded;
}

// --rates: either a positional comma list in edge order, or name=value pairs
// binding $placeholders from the DSL.
RateVector resolve_cli_rates(const LoadedNetwork& loaded, const Options& opt) {
    std::map<std::string, double> bindings = loaded.bindings;
    if (!opt.rates.empty()) {
        const auto parts = split_commas(opt.rates);
        const bool named = opt.rates.find('=') != std::string::npos;
        if (named) {
            for (const std::string& p : parts) {
                const size_t eq = p.find('=');
                if (eq == std::string::npos || eq == 0)
                    throw std::invalid_argument("rate binding '" + p + "' is not name=value");
                bindings[p.substr(0, eq)] = parse_double(p.substr(eq + 1), "rate");
            }
        } else {
            if (static_cast<int>(parts.size()) != loaded.net.graph.edge_count())
                throw std::invalid_argument(
                    "--rates needs " + std::to_string(loaded.net.graph.edge_count()) +
                    " values in edge order, got " + std::to_string(parts.size()));
            Eigen::VectorXd k(loaded.net.graph.edge_count());
            for (size_t i = 0; i < parts.size(); ++i)
                k(static_cast<Eigen::Index>(i)) = parse_double(parts[i], "rate");
            check_rate_vector(loaded.net.graph, k);
            return k;
        }
    }
    return resolve_rates(loaded.net, bindings);
}

json vec_json(const Eigen::VectorXd& v) {
    return std::vector<double>(v.data(), v.data() + v.size());
}

json checked(double value, double tolerance) {
    return json{{"value", value}, {"tolerance", tolerance}};
}

json base_report(const char* command, const Options& opt) {
    json report;
    report["command"] = command;
    report["inputs"] = json{{"network", opt.network}};
    report["diagnostics"] =
        json{{"tol", opt.tol}, {"rank_tol", opt.rank_tol}};
    report["results"] = json::object();
    return report;
}

json membership_json(const MembershipResult& member) {
    return json{{"is_member", member.is_member},
                {"residual", checked(member.residual, member.tolerance_used)},
                {"log_solution", vec_json(member.log_solution)}};
}

std::uint64_t effective_seed(const Options& opt) {
    if (opt.seed_given) return opt.seed;
    if (const char* env = std::getenv("TORICNET_SEED")) {
        try {
            return std::stoull(env);
        } catch (const std::exception&) {
            throw std::invalid_argument("TORICNET_SEED is not an unsigned integer");
        }
    }
    return 0;
}

}  // namespace

int cmd_info(const Options& opt, json& report) {
    const LoadedNetwork loaded = load_network(opt);
    const EGraph& g = loaded.net.graph;
    report = base_report("info", opt);

    json& res = report["results"];
    res["species"] = g.species_count();
    res["vertices"] = g.vertex_count();
    res["edges"] = g.edge_count();
    res["components"] = g.component_count();
    res["weakly_reversible"] = g.weakly_reversible();
    json names = json::array();
    for (const Species& sp : g.species()) names.push_back(sp.name);
    res["species_names"] = names;
    json labels = json::array();
    for (const Vertex& v : g.vertices()) labels.push_back(v.label);
    res["vertex_labels"] = labels;
    if (g.edge_count() > 0) {
        res["stoich_dim"] = stoich_decomp(g, opt.rank_tol).s;
        res["flux_dim"] = flux_space(g, opt.rank_tol).dim;
    } else {
        res["stoich_dim"] = 0;
        res["flux_dim"] = 0;
    }
    res["graph"] = egraph_to_json(g);
    return kExitOk;
}

int cmd_check(const Options& opt, json& report) {
    const LoadedNetwork loaded = load_network(opt);
    const EGraph& g = loaded.net.graph;
    const RateVector k = resolve_cli_rates(loaded, opt);
    report = base_report("check", opt);
    report["inputs"]["rates"] = vec_json(k);

    const MembershipResult member = toric_membership(g, k, opt.tol);
    report["results"] = membership_json(member);
    report["results"]["tree_constants"] = vec_json(tree_constants(g, k));
    return member.is_member ? kExitOk : kExitNegative;
}

int cmd_eq(const Options& opt, json& report) {
    const LoadedNetwork loaded = load_network(opt);
    const EGraph& g = loaded.net.graph;
    const RateVector k = resolve_cli_rates(loaded, opt);
    const Eigen::VectorXd x0 = parse_vector(opt.x0, "x0");
    report = base_report("eq", opt);
    report["inputs"]["rates"] = vec_json(k);
    report["inputs"]["x0"] = vec_json(x0);
    report["diagnostics"]["grad_tol"] = opt.grad_tol;
    report["diagnostics"]["max_iter"] = opt.max_iter;

    const StoichDecomp sd = stoich_decomp(g, opt.rank_tol);
    const MembershipResult member = toric_membership(g, k, opt.tol);
    const LogEquilibrium log_eq = solve_log_equilibrium(g, k, sd, opt.tol);
    BirchOptions birch;
    birch.grad_tol = opt.grad_tol;
    birch.max_iter = opt.max_iter;
    const BirchResult eq = birch_solve(log_eq.X_star, x0, sd, birch);

    json& res = report["results"];
    res["membership_residual"] = checked(member.residual, opt.tol);
    res["X_star"] = vec_json(log_eq.X_star);
    res["method"] = to_string(log_eq.method);
    res["rows_used"] = log_eq.system_rows_used;
    res["x_star"] = vec_json(eq.x_star);
    res["w"] = vec_json(eq.w);
    res["iterations"] = eq.iterations;
    res["final_grad_norm"] = checked(eq.final_grad_norm, opt.grad_tol);
    res["complex_balance_error"] = checked(complex_balance_error(g, k, eq.x_star), 1e-8);
    res["rhs_norm"] = mass_action_rhs(g, k, eq.x_star).norm();
    return kExitOk;
}

int cmd_embed(const Options& opt, json& report) {
    const LoadedNetwork loaded = load_network(opt);
    const EGraph& g = loaded.net.graph;
    const Eigen::VectorXd x = parse_vector(opt.x, "x");
    report = base_report("embed", opt);
    report["inputs"]["x"] = vec_json(x);

    const FluxSpace fs = flux_space(g, opt.rank_tol);
    FluxVector beta;
    if (!opt.beta.empty()) {
        beta.values = parse_vector(opt.beta, "beta");
        beta.strictly_positive = (beta.values.array() > 0.0).all();
        report["inputs"]["beta"] = vec_json(beta.values);
    } else {
        const std::uint64_t seed = effective_seed(opt);
        beta = sample_flux(g, fs, seed);
        report["inputs"]["beta"] = vec_json(beta.values);
        report["inputs"]["sample_seed"] = seed;
    }

    const RateVector k = phi_embedding(x, beta, g);
    const StoichDecomp sd = stoich_decomp(g, opt.rank_tol);
    const MembershipResult member = toric_membership(g, k, opt.tol);

    const Eigen::MatrixXd J = phi_hat_jacobian(x, beta.values, g);
    const Eigen::MatrixXd J_fd = phi_hat_jacobian_fd(x, beta.values, g);
    const double jac_scale = std::max(1e-300, J.cwiseAbs().maxCoeff());
    const double fd_error = (J - J_fd).cwiseAbs().maxCoeff() / jac_scale;

    const RankCheck rank = immersion_rank_check(x, beta.values, g, sd, fs);

    json& res = report["results"];
    res["rates"] = vec_json(k);
    res["membership"] = membership_json(member);
    res["jacobian_fd_error"] = checked(fd_error, 1e-6);
    res["immersion_rank"] =
        json{{"rank", rank.rank}, {"expected", rank.expected}, {"pass", rank.pass}};
    res["flux_dim"] = fs.dim;
    res["stoich_dim"] = sd.s;
    return member.is_member && rank.pass ? kExitOk : kExitNegative;
}

int cmd_simulate(const Options& opt, json& report) {
    const LoadedNetwork loaded = load_network(opt);
    const EGraph& g = loaded.net.graph;
    const RateVector k = resolve_cli_rates(loaded, opt);
    const Eigen::VectorXd x0 = parse_vector(opt.x0, "x0");
    report = base_report("simulate", opt);
    report["inputs"]["rates"] = vec_json(k);
    report["inputs"]["x0"] = vec_json(x0);
    report["inputs"]["t_end"] = opt.t_end;
    report["diagnostics"]["rtol"] = opt.rtol;
    report["diagnostics"]["atol"] = opt.atol;

    IntegrateOptions iopts;
    iopts.rtol = opt.rtol;
    iopts.atol = opt.atol;
    iopts.rank_tol = opt.rank_tol;
    const Trajectory traj = integrate(g, k, x0, opt.t_end, iopts);

    json& res = report["results"];
    res["accepted_steps"] = traj.accepted_steps;
    res["rejected_steps"] = traj.rejected_steps;
    res["final_time"] = traj.times.back();
    res["final_state"] = vec_json(traj.states.back());
    res["conserved_drift"] = checked(traj.conserved_drift, 100.0 * opt.rtol * x0.norm());

    const MembershipResult member = toric_membership(g, k, opt.tol);
    res["membership"] = membership_json(member);
    if (member.is_member) {
        const StoichDecomp sd = stoich_decomp(g, opt.rank_tol);
        const BirchResult eq = equilibrium_from_rates(g, k, x0, sd, opt.tol);
        const ConvergenceReport conv = convergence_report(traj, eq.x_star);
        res["equilibrium"] = json{{"x_star", vec_json(eq.x_star)},
                                  {"final_distance", checked(conv.final_distance, 1e-6)},
                                  {"monotone_tail", conv.monotone_tail}};
    } else {
        res["note"] = "rates are not in the toric locus; no equilibrium comparison";
    }

    if (!opt.out_csv.empty()) {
        std::ofstream os(opt.out_csv);
        if (!os) throw Error("cannot open output file '" + opt.out_csv + "'");
        write_trajectory_csv(traj, os);
        res["csv"] = opt.out_csv;
    }
    return kExitOk;
}

int cmd_probe(const Options& opt, json& report) {
    const LoadedNetwork loaded = load_network(opt);
    const EGraph& g = loaded.net.graph;
    const RateVector k = resolve_cli_rates(loaded, opt);
    const Eigen::VectorXd x0 = parse_vector(opt.x0, "x0");
    const Eigen::VectorXd direction = parse_vector(opt.direction, "direction");
    report = base_report("probe", opt);
    report["inputs"]["rates"] = vec_json(k);
    report["inputs"]["x0"] = vec_json(x0);
    report["inputs"]["direction"] = vec_json(direction);
    report["inputs"]["target"] = opt.target;
    report["diagnostics"]["h0"] = opt.h0;
    report["diagnostics"]["steps"] = opt.steps;
    report["diagnostics"]["jobs"] = opt.jobs;

    ProbeTarget target;
    if (opt.target == "x0") {
        target = ProbeTarget::InitialCondition;
    } else if (opt.target == "rates") {
        target = ProbeTarget::Rates;
    } else {
        throw std::invalid_argument("--target must be 'x0' or 'rates'");
    }

    ProbeOptions popts;
    popts.tol = opt.tol;
    popts.jobs = opt.jobs;
    popts.birch.grad_tol = opt.grad_tol;
    popts.birch.max_iter = opt.max_iter;
    if (opt.steps < 2) throw std::invalid_argument("--steps must be at least 2");
    popts.steps.clear();
    for (int j = 0; j < opt.steps; ++j) popts.steps.push_back(opt.h0 * std::pow(0.5, j));

    const StoichDecomp sd = stoich_decomp(g, opt.rank_tol);
    const ProbeResult probe = smooth_dependence_probe(g, k, x0, sd, target, direction, popts);

    json& res = report["results"];
    res["steps"] = probe.steps;
    json derivatives = json::array();
    for (const auto& d : probe.derivatives) derivatives.push_back(vec_json(d));
    res["derivatives"] = derivatives;
    res["difference_norms"] = probe.difference_norms;
    json ratios = json::array();
    for (size_t j = 0; j < probe.ratios.size(); ++j) {
        json r;
        r["at_floor"] = static_cast<bool>(probe.at_floor[j]);
        if (std::isfinite(probe.ratios[j])) r["value"] = probe.ratios[j];
        ratios.push_back(r);
    }
    res["richardson_ratios"] = ratios;
    res["ratio_window"] = {popts.ratio_lo, popts.ratio_hi};
    res["consistent"] = probe.consistent;
    res["base_equilibrium"] = vec_json(probe.base_equilibrium);
    return kExitOk;
}

int run_command(const std::string& name, const Options& opt, json& report) {
    if (name == "info") return cmd_info(opt, report);
    if (name == "check") return cmd_check(opt, report);
    if (name == "eq") return cmd_eq(opt, report);
    if (name == "embed") return cmd_embed(opt, report);
    if (name == "simulate") return cmd_simulate(opt, report);
    if (name == "probe") return cmd_probe(opt, report);
    throw std::invalid_argument("unknown command '" + name + "'");
}

}  // namespace toricnet::cli
