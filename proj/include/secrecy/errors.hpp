#pragma once

#include <stdexcept>
#include <string>

namespace secrecy {

// Invalid user-supplied configuration (bad key, out-of-range value, conflict).
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed request: empty grids, mismatched profile shapes.
class UsageError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Argument outside a function's mathematical domain.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// An internal consistency condition failed (e.g. p_e_EA > d_A).
class ContractViolation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

}  // namespace secrecy
