#include "holx/error.hpp"

namespace holx {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::DuplicateId: return "DuplicateId";
    case ErrorCode::InvalidState: return "InvalidState";
    case ErrorCode::EmptyConstituentList: return "EmptyConstituentList";
    case ErrorCode::DuplicateConstituent: return "DuplicateConstituent";
    case ErrorCode::RetiredConstituent: return "RetiredConstituent";
    case ErrorCode::UnknownHolon: return "UnknownHolon";
    case ErrorCode::NotFound: return "NotFound";
    case ErrorCode::EmptyPartList: return "EmptyPartList";
    case ErrorCode::TimeRegression: return "TimeRegression";
    case ErrorCode::XmlSyntax: return "XmlSyntax";
    case ErrorCode::SchemaViolation: return "SchemaViolation";
    case ErrorCode::ReferenceError: return "ReferenceError";
    case ErrorCode::InvalidModel: return "InvalidModel";
    case ErrorCode::Io: return "Io";
    case ErrorCode::InvalidHorizon: return "InvalidHorizon";
    case ErrorCode::OutOfHorizon: return "OutOfHorizon";
    case ErrorCode::UnknownProcess: return "UnknownProcess";
    case ErrorCode::UnknownItem: return "UnknownItem";
    case ErrorCode::RetiredHolon: return "RetiredHolon";
    case ErrorCode::CapabilityMissing: return "CapabilityMissing";
    case ErrorCode::ConsumedItemAbsent: return "ConsumedItemAbsent";
    case ErrorCode::DomainFault: return "DomainFault";
    case ErrorCode::InvalidMapping: return "InvalidMapping";
    case ErrorCode::UnknownSourceElement: return "UnknownSourceElement";
    case ErrorCode::UnknownTargetElement: return "UnknownTargetElement";
    case ErrorCode::DuplicateRuleId: return "DuplicateRuleId";
    case ErrorCode::SchemaViolationInOutput: return "SchemaViolationInOutput";
    case ErrorCode::SourceMismatch: return "SourceMismatch";
    case ErrorCode::UnknownMetaModel: return "UnknownMetaModel";
  }
  return "Unknown";
}

}  // namespace holx
