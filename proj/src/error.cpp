#include "evshape/error.hpp"

namespace evshape {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NegativeMass: return "NegativeMass";
    case ErrorCode::MassSumViolation: return "MassSumViolation";
    case ErrorCode::NegativeSupport: return "NegativeSupport";
    case ErrorCode::EmptyObservations: return "EmptyObservations";
    case ErrorCode::SubprobabilitySampling: return "SubprobabilitySampling";
    case ErrorCode::SubprobabilityInput: return "SubprobabilityInput";
    case ErrorCode::NoViolationAt: return "NoViolationAt";
    case ErrorCode::NoViolation: return "NoViolation";
    case ErrorCode::NonzeroTail: return "NonzeroTail";
    case ErrorCode::NegativeObservation: return "NegativeObservation";
    case ErrorCode::MissingTracker: return "MissingTracker";
    case ErrorCode::InfiniteRange: return "InfiniteRange";
    case ErrorCode::BadAlpha: return "BadAlpha";
    case ErrorCode::ZeroPhi: return "ZeroPhi";
    case ErrorCode::AlreadyRejected: return "AlreadyRejected";
    case ErrorCode::BadInterval: return "BadInterval";
    case ErrorCode::AtomPresent: return "AtomPresent";
    case ErrorCode::UnboundedTail: return "UnboundedTail";
    case ErrorCode::UnboundedSupport: return "UnboundedSupport";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& detail)
    : std::runtime_error(std::string(to_string(code)) + ": " + detail), code_(code) {}

}  // namespace evshape
