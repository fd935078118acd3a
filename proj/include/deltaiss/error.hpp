#pragma once

#include <stdexcept>
#include <string>

namespace deltaiss {

enum class ErrorKind {
    InvalidInput,   // malformed values, non-finite entries, bad flags
    Dimension,      // incompatible matrix/vector shapes
    Unsupported,    // a form the library deliberately does not handle
    Singular,       // matrix inversion / solve failed
    Diverged,       // simulation produced non-finite state
    Io,             // file read/write/parse failures
};

/// Library-wide exception carrying a coarse error category so callers
/// (notably the CLI) can map failures to stable exit codes.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(message), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
    throw Error(kind, message);
}

} // namespace deltaiss
