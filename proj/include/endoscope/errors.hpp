#pragma once

#include <stdexcept>
#include <string>

namespace endoscope {

// Bad parameters / unsatisfied preconditions (CLI exit code 2).
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// A verified identity failed to hold (CLI exit code 1).
struct CheckFailure : std::runtime_error {
    explicit CheckFailure(const std::string& msg) : std::runtime_error(msg) {}
};

// Truncated p-adic arithmetic left the retained digit window.
struct WindowOverflow : std::runtime_error {
    explicit WindowOverflow(const std::string& msg) : std::runtime_error(msg) {}
};

// A decision (valuation threshold, residue extraction) needs digits that
// were not retained.
struct InsufficientPrecision : std::runtime_error {
    explicit InsufficientPrecision(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace endoscope
