#pragma once

#include <string>
#include <vector>

#include "holx/model.hpp"

namespace holx {

// Model-wide constraint codes:
//   E-H-001  elementary holon with constituents
//   E-H-002  constituent (genealogy) cycle
//   E-H-003  composite holon without constituents
//   E-M-001  dangling reference (process, holon, type, instance, resource,
//            reference term, ledger entry, scenario target)
//   E-S-001  state time regression
//   E-S-002  repeated attribute name within a state
//   E-S-003  time-class attribute that is neither a timestamp nor an
//            integral duration in ms
//   E-P-001  ItemRef not declared by its holon type
//   E-R-001  duplicate id or name where uniqueness is required
//   E-F-001  flow with both endpoints external
//   E-I-001  instance with end before start or inconsistent elapsed time
//   E-I-002  instance whose used resources miss a required capability
//   E-L-001  holon checksum differs from its ledger entry
//   E-V-001  malformed identifier
struct Violation {
  std::string code;
  std::string subject;
  std::string message;

  auto operator<=>(const Violation&) const = default;
};

// Pure; the result is sorted by (code, subject, message).
std::vector<Violation> validate(const SystemModel& model);

}  // namespace holx
