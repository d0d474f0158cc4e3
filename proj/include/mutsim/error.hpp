#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace mutsim {

enum class ErrorCode {
    InvalidArgument,
    UnknownKey,
    MalformedValue,
    ConstraintViolation,
    NonDivisible,
    GridMismatch,
    NoConvergence,
    Overflow,
    ReplicateFailures,
    Io,
};

std::string_view to_string(ErrorCode code);

// Process exit status for an error: 1 validation, 2 numerical failure.
int exit_status(ErrorCode code);

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitNumerical = 2;
inline constexpr int kExitVerification = 3;

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message) : std::runtime_error(message), code_(code) {}

    // Config errors carry the offending key and its line (0 = command-line flag).
    Error(ErrorCode code, const std::string& message, std::string key, std::size_t line)
        : std::runtime_error(message), code_(code), key_(std::move(key)), line_(line) {}

    ErrorCode code() const noexcept { return code_; }
    const std::string& key() const noexcept { return key_; }
    std::size_t line() const noexcept { return line_; }

    // {"error":"...","message":"...",["key":...,"line":...]}
    std::string to_json() const;

private:
    ErrorCode code_;
    std::string key_;
    std::size_t line_ = 0;
};

}  // namespace mutsim
