#pragma once

#include <stdexcept>
#include <string>

namespace qvae {

enum class ErrorCode {
    invalid_argument,
    resource_limit,
    numeric_failure,
    infeasible_compression,
    io_error,
    cache_integrity,
    internal,
};

/// Exception carrying a machine-readable code plus a human-readable message.
class Error : public std::runtime_error {
  public:
    Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
    ErrorCode code() const noexcept { return code_; }

  private:
    ErrorCode code_;
};

[[noreturn]] inline void raise(ErrorCode code, const std::string& what) { throw Error(code, what); }

inline const char* error_code_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::invalid_argument: return "invalid-argument";
        case ErrorCode::resource_limit: return "resource-limit";
        case ErrorCode::numeric_failure: return "numeric-failure";
        case ErrorCode::infeasible_compression: return "infeasible-compression";
        case ErrorCode::io_error: return "io-error";
        case ErrorCode::cache_integrity: return "cache-integrity";
        case ErrorCode::internal: return "internal";
    }
    return "unknown";
}

}  // namespace qvae
