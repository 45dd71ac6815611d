#pragma once

#include <stdexcept>
#include <string>

namespace nblab {

// Textual input (zero tables, multiset files, numeric literals) failed to parse.
class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// An operation was called outside its stated domain.
class PreconditionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// A requested tolerance or convergence target cannot be met.
class ConvergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// |zeta| fell below the underflow guard on the critical line; quadrature
// must switch to singular handling instead of evaluating the integrand.
class ZeroProximityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace nblab
