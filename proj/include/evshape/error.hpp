#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace evshape {

enum class ErrorCode {
  NegativeMass,
  MassSumViolation,
  NegativeSupport,
  EmptyObservations,
  SubprobabilitySampling,
  SubprobabilityInput,
  NoViolationAt,
  NoViolation,
  NonzeroTail,
  NegativeObservation,
  MissingTracker,
  InfiniteRange,
  BadAlpha,
  ZeroPhi,
  AlreadyRejected,
  BadInterval,
  AtomPresent,
  UnboundedTail,
  UnboundedSupport,
  ParseError,
  ConfigError,
};

std::string_view to_string(ErrorCode code);

// Every failure raised by the library carries one of the codes above.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace evshape
