#pragma once

#include <stdexcept>

namespace clusterham {

// Error categories map 1:1 onto CLI exit codes (2 usage, 3 convergence,
// 4 resource guard).

struct InvalidArgument : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ConvergenceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ResourceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace clusterham
