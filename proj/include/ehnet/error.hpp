#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ehnet {

enum class ErrorCode {
    NonStochastic,
    OutOfRange,
    NonPositiveInput,
    InvalidState,
    NoConvergence,
    DimensionMismatch,
    PreconditionViolated,
    ApproximationDomain,
    Overflow,
    AmbiguousCase,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Thrown by every library operation that rejects its input.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

} // namespace ehnet
