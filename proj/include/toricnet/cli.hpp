#ifndef TORICNET_CLI_HPP
#define TORICNET_CLI_HPP

#include <cstdint>
#include <json.hpp>
#include <string>
#include <vector>

namespace toricnet::cli {

// Exit codes shared by every command: 0 success / member, 2 definite
// negative, 1 error.
inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitNegative = 2;

struct Options {
    std::string network;
    std::string rates;                       // comma list: positional or name=value
    std::vector<std::string> set_bindings;   // name=value for $placeholders
    std::string x0;
    std::string x;
    std::string beta;
    std::string direction;
    double tol = 1e-9;
    double rank_tol = 1e-10;
    double grad_tol = 1e-12;
    int max_iter = 200;
    double rtol = 1e-8;
    double atol = 1e-10;
    double t_end = 50.0;
    std::string out_csv;
    std::uint64_t seed = 0;
    bool seed_given = false;
    std::string target = "x0";  // probe target: x0 | rates
    double h0 = 1e-2;
    int steps = 4;
    int jobs = 1;
};

int cmd_info(const Options& opt, nlohmann::json& report);
int cmd_check(const Options& opt, nlohmann::json& report);
int cmd_eq(const Options& opt, nlohmann::json& report);
int cmd_embed(const Options& opt, nlohmann::json& report);
int cmd_simulate(const Options& opt, nlohmann::json& report);
int cmd_probe(const Options& opt, nlohmann::json& report);

// Dispatch by command name; throws std::invalid_argument for unknown names.
int run_command(const std::string& name, const Options& opt, nlohmann::json& report);

}  // namespace toricnet::cli

#endif
