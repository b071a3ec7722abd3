#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "holx/model.hpp"

namespace holx {

// Operations on the holon store of a model. All of them either succeed
// completely or throw holx::Error leaving the model untouched.

struct ElementaryHolonSpec {
  Id id;
  Id type;
  std::vector<Property> properties;
  HolonState initial_state;
};

// Registers an elementary holon and a ledger entry holding `descriptor`.
// Throws DuplicateId, InvalidState.
Holon new_elementary(SystemModel& model, ElementaryHolonSpec spec, std::string_view physical_descriptor);

struct AssemblySpec {
  Id id;
  Id type;
  std::vector<Id> constituents;
  Id instance;
  HolonState state;
};

// Builds a composite from live holons and retires them. A single constituent
// models the transformation of one holon into a new one. The new ledger
// entry merges the constituents' descriptors. The composing instance records
// the constituents' head states as inputs and the new state as output.
// Throws EmptyConstituentList, DuplicateConstituent, UnknownHolon,
// RetiredConstituent, NotFound (instance), DuplicateId, InvalidState.
Holon assemble(SystemModel& model, AssemblySpec spec);

struct PartSpec {
  Id id;
  std::string descriptor;
};

// Splits a live holon into composite parts whose sole constituent is the
// source. Each part inherits the source's type and head attributes; its
// first state is stamped with the instance end time.
// Throws NotFound, RetiredConstituent, EmptyPartList, DuplicateId.
std::vector<Holon> disassemble(SystemModel& model, const Id& source, const Id& instance, std::vector<PartSpec> parts);

// Throws NotFound, RetiredHolon, TimeRegression, InvalidState.
Holon append_state(SystemModel& model, const Id& holon, HolonState state, const Id& instance);

struct GenealogyNode {
  Id holon;
  std::optional<Id> instance;  // instance that composed this node into its parent
  std::vector<GenealogyNode> children;

  std::size_t depth() const;
};

// Constituent DAG unfolded into a tree. Throws NotFound, InvalidModel on a
// constituent cycle.
GenealogyNode genealogy(const SystemModel& model, const Id& holon);

// Leaves of the unfolded tree, in visiting order (duplicates kept).
std::vector<Id> genealogy_leaves(const GenealogyNode& root);

}  // namespace holx
