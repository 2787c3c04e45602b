#pragma once

#include <stdexcept>
#include <string>

namespace fglab {

// Bad user input (malformed spec files, invalid parameters).  CLI exit code 1.
struct input_error : std::runtime_error {
    explicit input_error(const std::string& msg) : std::runtime_error(msg) {}
};

// A computation finished but contradicts an asserted algebraic fact.
// These are the most valuable failures and must not look like crashes.  CLI exit code 2.
struct claim_error : std::runtime_error {
    explicit claim_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Degree/arity/memory caps too small to answer the question.  CLI exit code 3.
struct cap_error : std::runtime_error {
    explicit cap_error(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace fglab
