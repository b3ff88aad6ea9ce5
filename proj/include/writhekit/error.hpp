#pragma once

#include <stdexcept>
#include <string>

namespace writhekit {

enum class ErrorKind {
    InvalidArgument,   // precondition on inputs violated
    NotEmbedded,       // self-intersection or singular integrand
    Degenerate,        // zero tangent, antipodal step, ill-defined geometry
    InvariantViolated, // an internal construction certificate failed
    Io,                // unreadable or malformed file
};

inline const char* to_string(ErrorKind k) {
    switch (k) {
        case ErrorKind::InvalidArgument: return "invalid_argument";
        case ErrorKind::NotEmbedded: return "not_embedded";
        case ErrorKind::Degenerate: return "degenerate";
        case ErrorKind::InvariantViolated: return "invariant_violated";
        case ErrorKind::Io: return "io";
    }
    return "unknown";
}

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

inline void require(bool cond, ErrorKind kind, const std::string& what) {
    if (!cond) fail(kind, what);
}

}  // namespace writhekit
