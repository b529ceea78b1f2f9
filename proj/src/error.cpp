#include "ehnet/error.hpp"

namespace ehnet {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
    case ErrorCode::NonStochastic: return "NonStochastic";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::NonPositiveInput: return "NonPositiveInput";
    case ErrorCode::InvalidState: return "InvalidState";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::PreconditionViolated: return "PreconditionViolated";
    case ErrorCode::ApproximationDomain: return "ApproximationDomain";
    case ErrorCode::Overflow: return "Overflow";
    case ErrorCode::AmbiguousCase: return "AmbiguousCase";
    }
    return "Unknown";
}

} // namespace ehnet
