#ifndef VSHELL_ERRORS_HPP
#define VSHELL_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace vshell {

/// Malformed input: bad vectors, non-graded posets, inconsistent orders.
class InvalidInput : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A configured budget (chain count, search nodes, time, memo size, faces) ran out.
class BudgetExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A construction produced something that failed its own certificate check.
class VerificationFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace vshell

#endif
