#ifndef TORICNET_TESTS_TESTUTIL_HPP
#define TORICNET_TESTS_TESTUTIL_HPP

#include <Eigen/Dense>
#include <fstream>
#include <sstream>
#include <string>

#include "toricnet/netmodel.hpp"

#ifndef TORICNET_DATA_DIR
#error "TORICNET_DATA_DIR must be defined by the build"
#endif

namespace testutil {

inline std::string data_file(const std::string& name) {
    return std::string(TORICNET_DATA_DIR) + "/" + name;
}

inline std::string slurp(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open " + path);
    std::ostringstream os;
    os << is.rdbuf();
    return os.str();
}

inline toricnet::ParsedNetwork load(const std::string& name) {
    return toricnet::parse_network(slurp(data_file(name)));
}

inline Eigen::VectorXd vec(std::initializer_list<double> vals) {
    Eigen::VectorXd v(static_cast<Eigen::Index>(vals.size()));
    Eigen::Index i = 0;
    for (double x : vals) v(i++) = x;
    return v;
}

// splitmix64; deterministic across platforms, unlike <random> distributions.
struct Rng {
    std::uint64_t state;
    explicit Rng(std::uint64_t seed) : state(seed) {}
    std::uint64_t next() {
        state += 0x9E3779B97F4A7C15ULL;
        std::uint64_t z = state;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }
    double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }
    double log_uniform(double lo, double hi) {
        return std::exp(uniform(std::log(lo), std::log(hi)));
    }
    Eigen::VectorXd positive_vector(Eigen::Index n, double lo, double hi) {
        Eigen::VectorXd v(n);
        for (Eigen::Index i = 0; i < n; ++i) v(i) = log_uniform(lo, hi);
        return v;
    }
};

}  // namespace testutil

#endif
