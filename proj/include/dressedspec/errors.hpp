// errors.hpp: exception types; the CLI maps them onto exit codes

#pragma once

#include <stdexcept>
#include <string>

namespace dressedspec {

// Invalid input: violated preconditions, bad geometry, malformed config.
class DomainError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// A computation ran but its result failed a certificate (residual, uniqueness, ...).
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace dressedspec
