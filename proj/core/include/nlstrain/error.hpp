#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace nlstrain {

enum class ErrorCode {
  InvalidArgument,
  ConditionViolated,
  InvalidPair,
  NoBoundState,
  NotConverged,
  CertificateUnbounded,
  NoKink,
  QuadratureSingular,
  GridTooSmall,
  NonFinite,
  InsufficientSamples,
  DegenerateFit,
  QuadratureUnderResolved,
  Validation,
};

std::string_view to_string(ErrorCode code);

/// Numerical failures that are part of an operation's contract.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace nlstrain
