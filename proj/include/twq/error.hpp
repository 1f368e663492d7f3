#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace twq {

enum class ErrorCode {
  MixedUnits,
  EmptyDomain,
  InvalidInterval,
  InvalidInstant,
  IncomparableUnits,
  NotCoarser,
  NotFiner,
  MissingAttribute,
  TypeMismatch,
  UnknownClass,
  UnknownSourceClass,
  UnresolvedReference,
  DuplicateSourceObject,
  PredicateTypeError,
  UnboundVariable,
  NonMonotonicTimestamp,
  MappingError,
  OverlapDetected,
  NoArchiveFilter,
  BlockCollision,
  SelectionNotPast,
  KindMismatch,
  IdentityOnStates,
  UnknownAttribute,
  AttributeNameClash,
  OverlappingStates,
  EmptySeries,
  SyntaxError,
  UnsupportedEvent,
  UnsupportedAction,
  RuleEvaluationError,
  IoError,
  FormatError,
  LockError,
};

std::string_view error_code_name(ErrorCode code);

/// Every failure raised by the engine. The code identifies the contract that
/// was violated; the message carries the details.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace twq
