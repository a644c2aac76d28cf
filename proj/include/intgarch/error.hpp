#pragma once

#include <stdexcept>
#include <string>

namespace intgarch {

/// Process exit codes shared by the library error types and the CLI.
enum class ErrorCode : int {
    Ok = 0,
    BadInput = 2,
    Numerical = 3,
    NonConvergence = 4,
};

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
    [[nodiscard]] ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

/// Precondition or schema violation in caller-supplied data.
class InvalidInput : public Error {
public:
    explicit InvalidInput(const std::string& what) : Error(ErrorCode::BadInput, what) {}
};

/// Overflow, singular matrices, nonexistent moments.
class NumericalError : public Error {
public:
    explicit NumericalError(const std::string& what) : Error(ErrorCode::Numerical, what) {}
};

class ConvergenceError : public Error {
public:
    explicit ConvergenceError(const std::string& what) : Error(ErrorCode::NonConvergence, what) {}
};

}  // namespace intgarch
