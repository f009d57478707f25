#pragma once

#include <stdexcept>
#include <string>

namespace nlss {

// Bad run parameters or malformed configuration files. CLI exit code 2.
struct config_error : std::runtime_error {
    explicit config_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Library misuse: mismatched grids, unsynchronized times, empty inputs.
struct usage_error : std::runtime_error {
    explicit usage_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Iterative solver failed to reach its tolerance.
struct convergence_error : std::runtime_error {
    explicit convergence_error(const std::string& msg) : std::runtime_error(msg) {}
};

// NaN detection, boundary-mass guard trips and friends. CLI exit code 3.
struct numerical_error : std::runtime_error {
    explicit numerical_error(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace nlss
