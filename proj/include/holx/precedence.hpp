#pragma once

#include <compare>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "holx/model.hpp"

namespace holx {

// The occurrence-th execution of a process.
struct OccNode {
  Id process;
  int occurrence = 1;

  auto operator<=>(const OccNode&) const = default;
};

std::string to_string(const OccNode& n);  // "P1@2"

using OccPair = std::pair<OccNode, OccNode>;

// Occurrence-indexed precedence over the processes of a model, up to a
// horizon K. Generating edges:
//   forward flow p->q:  p@i -> q@i      for 1 <= i <= K
//   back flow p->q:     p@i -> q@(i+1)  for 1 <= i <  K
//   every process p:    p@i -> p@(i+1)  for 1 <= i <  K
// The relation is the transitive closure, a strict partial order.
class PrecedenceRelation {
 public:
  int horizon() const { return horizon_; }
  const std::vector<Id>& processes() const { return processes_; }
  // Flow ids classified as cycle-closing.
  const std::set<Id>& back_edges() const { return back_edges_; }
  // Generating edges, sorted.
  const std::vector<OccPair>& edges() const { return edges_; }
  // All pairs of the closure, sorted.
  std::vector<OccPair> pairs() const;

  bool has_process(const Id& p) const;
  // No range checks; unknown nodes are unrelated.
  bool contains(const OccNode& a, const OccNode& b) const;

 private:
  friend PrecedenceRelation build_precedence(const SystemModel& model, int horizon);

  int index(const OccNode& n) const;

  int horizon_ = 1;
  std::vector<Id> processes_;
  std::set<Id> back_edges_;
  std::vector<OccPair> edges_;
  std::vector<std::vector<bool>> closure_;
};

// Back flows are the retreating edges of a depth-first traversal that starts
// from externally fed processes, then from every remaining process, always
// in lexicographic id order; out-flows are visited by (target, flow id).
// Throws InvalidHorizon (K < 1), InvalidModel (validate() not clean).
PrecedenceRelation build_precedence(const SystemModel& model, int horizon);

// Throws UnknownProcess, OutOfHorizon.
bool precedes(const PrecedenceRelation& rel, const OccNode& a, const OccNode& b);

}  // namespace holx
