#pragma once

#include <stdexcept>
#include <string>

namespace findex {

// Raised for unreadable/malformed inputs and bad configuration. CLI exit code 1.
struct input_error : std::runtime_error {
    explicit input_error(const std::string& what) : std::runtime_error(what) {}
};

// Raised for numerical failures (non-convergence, degenerate data). CLI exit code 2.
struct numeric_error : std::runtime_error {
    explicit numeric_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace findex
