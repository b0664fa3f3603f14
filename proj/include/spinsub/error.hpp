#pragma once

#include <stdexcept>
#include <string>

namespace spinsub {

enum class ErrorCode {
  DegenerateExpansion,
  NotExpansive,
  InvalidDigitSet,
  DomainTooLarge,
  InsufficientPrecision,
  InvalidArgument,
  NotPrimitive,
  RankDeficient,
  NoGroupStructure,
  Config,
};

/// Exception carrying a machine-checkable code next to the message.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace spinsub
