#include "twq/error.hpp"

namespace twq {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::MixedUnits: return "MixedUnits";
    case ErrorCode::EmptyDomain: return "EmptyDomain";
    case ErrorCode::InvalidInterval: return "InvalidInterval";
    case ErrorCode::InvalidInstant: return "InvalidInstant";
    case ErrorCode::IncomparableUnits: return "IncomparableUnits";
    case ErrorCode::NotCoarser: return "NotCoarser";
    case ErrorCode::NotFiner: return "NotFiner";
    case ErrorCode::MissingAttribute: return "MissingAttribute";
    case ErrorCode::TypeMismatch: return "TypeMismatch";
    case ErrorCode::UnknownClass: return "UnknownClass";
    case ErrorCode::UnknownSourceClass: return "UnknownSourceClass";
    case ErrorCode::UnresolvedReference: return "UnresolvedReference";
    case ErrorCode::DuplicateSourceObject: return "DuplicateSourceObject";
    case ErrorCode::PredicateTypeError: return "PredicateTypeError";
    case ErrorCode::UnboundVariable: return "UnboundVariable";
    case ErrorCode::NonMonotonicTimestamp: return "NonMonotonicTimestamp";
    case ErrorCode::MappingError: return "MappingError";
    case ErrorCode::OverlapDetected: return "OverlapDetected";
    case ErrorCode::NoArchiveFilter: return "NoArchiveFilter";
    case ErrorCode::BlockCollision: return "BlockCollision";
    case ErrorCode::SelectionNotPast: return "SelectionNotPast";
    case ErrorCode::KindMismatch: return "KindMismatch";
    case ErrorCode::IdentityOnStates: return "IdentityOnStates";
    case ErrorCode::UnknownAttribute: return "UnknownAttribute";
    case ErrorCode::AttributeNameClash: return "AttributeNameClash";
    case ErrorCode::OverlappingStates: return "OverlappingStates";
    case ErrorCode::EmptySeries: return "EmptySeries";
    case ErrorCode::SyntaxError: return "SyntaxError";
    case ErrorCode::UnsupportedEvent: return "UnsupportedEvent";
    case ErrorCode::UnsupportedAction: return "UnsupportedAction";
    case ErrorCode::RuleEvaluationError: return "RuleEvaluationError";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::FormatError: return "FormatError";
    case ErrorCode::LockError: return "LockError";
  }
  return "Error";
}

}  // namespace twq
