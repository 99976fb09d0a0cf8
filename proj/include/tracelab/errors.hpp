#pragma once

#include <stdexcept>
#include <string>

namespace tracelab {

// Base class for all library errors so callers can catch one type.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct NotPrimeError : Error {
    explicit NotPrimeError(const std::string& msg) : Error(msg) {}
};
struct TooLargeError : Error {
    explicit TooLargeError(const std::string& msg) : Error(msg) {}
};
struct LengthMismatchError : Error {
    explicit LengthMismatchError(const std::string& msg) : Error(msg) {}
};
struct CostCapExceededError : Error {
    explicit CostCapExceededError(const std::string& msg) : Error(msg) {}
};
struct NotDisjointError : Error {
    explicit NotDisjointError(const std::string& msg) : Error(msg) {}
};
struct OrderViolationError : Error {
    explicit OrderViolationError(const std::string& msg) : Error(msg) {}
};
struct ContextMismatchError : Error {
    explicit ContextMismatchError(const std::string& msg) : Error(msg) {}
};
struct NotASubgroupError : Error {
    explicit NotASubgroupError(const std::string& msg) : Error(msg) {}
};
struct NotInvolutionError : Error {
    explicit NotInvolutionError(const std::string& msg) : Error(msg) {}
};
struct ProfileMismatchError : Error {
    explicit ProfileMismatchError(const std::string& msg) : Error(msg) {}
};
struct PrimeTooSmallError : Error {
    explicit PrimeTooSmallError(const std::string& msg) : Error(msg) {}
};
struct CapExceededError : Error {
    explicit CapExceededError(const std::string& msg) : Error(msg) {}
};
struct ParseError : Error {
    explicit ParseError(const std::string& msg) : Error(msg) {}
};
struct ValidationError : Error {
    explicit ValidationError(const std::string& msg) : Error(msg) {}
};

} // namespace tracelab
