#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace holx {

enum class ErrorCode {
  // holon-core
  DuplicateId,
  InvalidState,
  EmptyConstituentList,
  DuplicateConstituent,
  RetiredConstituent,
  UnknownHolon,
  NotFound,
  EmptyPartList,
  TimeRegression,
  // model-io
  XmlSyntax,
  SchemaViolation,
  ReferenceError,
  InvalidModel,
  Io,
  // interop-analysis
  InvalidHorizon,
  OutOfHorizon,
  UnknownProcess,
  UnknownItem,
  // execution
  RetiredHolon,
  CapabilityMissing,
  ConsumedItemAbsent,
  DomainFault,
  // transform-engine
  InvalidMapping,
  UnknownSourceElement,
  UnknownTargetElement,
  DuplicateRuleId,
  SchemaViolationInOutput,
  SourceMismatch,
  UnknownMetaModel,
};

std::string_view to_string(ErrorCode code);

// Every failure raised by the library. `subject` carries the offending id,
// item, capability, document path or "line:column", depending on the code.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message, std::string subject = {})
      : std::runtime_error(message), code_(code), subject_(std::move(subject)) {}

  ErrorCode code() const noexcept { return code_; }
  const std::string& subject() const noexcept { return subject_; }

 private:
  ErrorCode code_;
  std::string subject_;
};

}  // namespace holx
