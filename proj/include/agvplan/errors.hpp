#pragma once

#include <stdexcept>

namespace agv {

// Input data violates a documented invariant (bad scenario, infeasible
// endpoints, degenerate geometry). Maps to CLI exit code 1.
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Unreadable or malformed scenario document. Maps to CLI exit code 3.
class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace agv
