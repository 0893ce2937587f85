#pragma once

#include <stdexcept>
#include <string>

namespace fullgroup {

/// Base of every error the library reports on bad inputs or unmet
/// preconditions. Internal invariant failures throw std::logic_error instead.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Text or structure that does not denote a valid object (bad encoding,
/// mixed bases, pieces that do not form a bisection).
class MalformedInput : public Error {
public:
    using Error::Error;
};

/// A well-formed request whose mathematical precondition fails, e.g. a
/// comparison asked for with mu(A) >= mu(B) on the odometer.
class PreconditionViolation : public Error {
public:
    using Error::Error;
};

/// A certificate or witness that does not check out.
class VerificationFailure : public Error {
public:
    using Error::Error;
};

namespace detail {

[[noreturn]] inline void internal_error(const std::string& what) {
    throw std::logic_error("fullgroup internal invariant violated: " + what);
}

inline void ensure(bool cond, const char* what) {
    if (!cond) internal_error(what);
}

}  // namespace detail
}  // namespace fullgroup
