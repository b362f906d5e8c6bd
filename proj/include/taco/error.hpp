#pragma once

#include <stdexcept>
#include <string>

namespace taco {

/// Failure classes map one-to-one onto the CLI exit codes.
enum class ErrorKind {
    Validation,  ///< bad input, violated precondition (exit 2)
    Provider,    ///< model provider / transport failure (exit 3)
    ParseFatal,  ///< model output failed strict parsing (exit 4)
    Io,          ///< filesystem trouble (exit 2)
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, std::string code, const std::string& message)
        : std::runtime_error(message), kind_(kind), code_(std::move(code)) {}

    ErrorKind kind() const noexcept { return kind_; }
    /// Stable machine-readable identifier, e.g. "EMPTY_CORPUS".
    const std::string& code() const noexcept { return code_; }

private:
    ErrorKind kind_;
    std::string code_;
};

inline Error validation_error(std::string code, const std::string& message) {
    return Error(ErrorKind::Validation, std::move(code), message);
}

inline Error io_error(std::string code, const std::string& message) {
    return Error(ErrorKind::Io, std::move(code), message);
}

int exit_code_for(ErrorKind kind) noexcept;

}  // namespace taco
