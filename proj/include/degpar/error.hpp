#pragma once

#include <stdexcept>
#include <string>

namespace degpar {

/// Broad failure categories. The CLI maps them onto exit codes.
enum class ErrorKind {
    Precondition,  // caller violated a documented contract
    Config,        // malformed or inconsistent configuration
    Numerical,     // CFL violation, NaN/Inf, divergence
    Audit,         // a verification harness found a violated property
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

inline void require(bool cond, const std::string& what) {
    if (!cond) fail(ErrorKind::Precondition, what);
}

}  // namespace degpar
