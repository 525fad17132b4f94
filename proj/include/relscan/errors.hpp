#pragma once

#include <stdexcept>
#include <string>

namespace relscan {

// Bad user input: malformed files, out-of-range parameters, impossible configs.
// CLI maps this to exit code 2.
struct invalid_input : std::runtime_error {
    explicit invalid_input(const std::string& what) : std::runtime_error(what) {}
};

// sigma2_hat == 0 (e.g. constant series). Downstream decision rules cannot be
// scaled; CLI maps this to exit code 3.
struct degenerate_variance : std::runtime_error {
    explicit degenerate_variance(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace relscan
