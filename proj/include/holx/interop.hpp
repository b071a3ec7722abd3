#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "holx/model.hpp"
#include "holx/precedence.hpp"

namespace holx {

enum class WitnessKind { predecessor, external_flow, self };

std::string_view to_string(WitnessKind k);

// What satisfied a consumed item: a preceding producer process, an external
// flow declaring the item, or the consuming process producing it itself.
struct Witness {
  WitnessKind kind = WitnessKind::predecessor;
  Id id;  // process id, or flow id for external_flow

  bool operator==(const Witness&) const = default;
};

struct InteropVerdict {
  Id process;
  bool interoperable = true;  // iff unmatched is empty
  std::vector<ItemRef> unmatched;
  std::map<ItemRef, Witness> producers;

  bool operator==(const InteropVerdict&) const = default;
};

// A process is interoperable with its system when every item it consumes is
// produced by one of its predecessors. Occurrence 1 is checked. Candidate
// witnesses, in order of preference:
//   1. processes Q with Q@1 < P@1 producing the item (lowest id first),
//   2. external flows into P or a predecessor of P declaring the item
//      (lowest flow id first),
//   3. P itself, when it produces the item.
// Throws UnknownProcess.
InteropVerdict check_process_interop(const SystemModel& model, const PrecedenceRelation& rel, const Id& process);

struct SystemInterop {
  std::map<Id, InteropVerdict> verdicts;
  bool overall = true;
};

// Throws InvalidHorizon, InvalidModel.
SystemInterop check_system_interop(const SystemModel& model, int horizon);

// Levels of conceptual interoperability, by metadata presence:
//   >=1  the process declares an interface (consumes or produces)
//   >=2  every interface item is bound to a registered reference term
//   >=3  a behavior model is named
//   >=4  conceptual links exist and all their endpoints are declared
// The level is the longest satisfied prefix.
struct LcimLevel {
  int level = 0;
  std::vector<std::string> justification;  // one line per satisfied predicate
};

LcimLevel classify_lcim(const SystemModel& model, const Id& process);

enum class PairClass { horizontal, vertical };

std::string_view to_string(PairClass c);

// Same enterprise level: horizontal. Throws UnknownProcess.
PairClass classify_pair(const SystemModel& model, const Id& p, const Id& q);

// Throws UnknownItem when no holon type declares the item.
std::set<Id> producers_of(const SystemModel& model, const ItemRef& item);
std::set<Id> consumers_of(const SystemModel& model, const ItemRef& item);

}  // namespace holx
