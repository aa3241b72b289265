// errors.hpp — exception types shared by all modules.
#pragma once

#include <stdexcept>
#include <string>

namespace sfqc {

// Eigen-solver breakdown, non-real current elements after gauge fixing, unstable dynamics.
struct NumericalFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// |δ₊ − δ₋| vanishes: the two-resonance decomposition does not exist.
struct BifurcationError : std::domain_error {
    using std::domain_error::domain_error;
};

// Time-domain integration did not reach a clean steady oscillation.
struct OracleTimeout : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Projection residual too large: nonlinearity or transient contamination.
struct NonlinearityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ConfigError : std::runtime_error {
    ConfigError(std::string key_, int line_, const std::string& what)
        : std::runtime_error(describe(key_, line_, what)), key(std::move(key_)), line(line_) {}

    std::string key;
    int line;

private:
    static std::string describe(const std::string& key, int line, const std::string& what) {
        std::string s;
        if (line > 0) s += "line " + std::to_string(line) + ": ";
        if (!key.empty()) s += "key '" + key + "': ";
        return s + what;
    }
};

} // namespace sfqc
