#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "holx/digest.hpp"
#include "holx/scalar.hpp"
#include "holx/time.hpp"

namespace holx {

// Case-sensitive nonempty token without whitespace.
using Id = std::string;

// Flow endpoint standing for the environment of the modelled system.
inline constexpr std::string_view kExternal = "@external";

bool is_valid_id(std::string_view id);

enum class AttributeClass { space, shape, time };
enum class HolonKind { elementary, composite };
enum class ResourceKind { material, software, human };
enum class EnterpriseLevel { L1, L2, L3 };
enum class FlowKind { data, information, energy, material };
enum class ItemKind { attribute, property };

std::string_view to_string(AttributeClass v);
std::string_view to_string(HolonKind v);
std::string_view to_string(ResourceKind v);
std::string_view to_string(EnterpriseLevel v);
std::string_view to_string(FlowKind v);
std::string_view to_string(ItemKind v);

std::optional<AttributeClass> parse_attribute_class(std::string_view s);
std::optional<HolonKind> parse_holon_kind(std::string_view s);
std::optional<ResourceKind> parse_resource_kind(std::string_view s);
std::optional<EnterpriseLevel> parse_enterprise_level(std::string_view s);
std::optional<FlowKind> parse_flow_kind(std::string_view s);
std::optional<ItemKind> parse_item_kind(std::string_view s);

// ---------------------------------------------------------------------------
// Holons

struct Attribute {
  std::string name;
  AttributeClass cls = AttributeClass::space;
  Scalar value;
  std::optional<std::string> unit;

  bool operator==(const Attribute&) const = default;
};

// A time-class attribute holds either a timestamp or an integral duration
// expressed as a number with unit "ms".
bool is_valid_time_value(const Attribute& a);

struct HolonState {
  Id id;
  Timestamp at;
  std::vector<Attribute> attributes;
  std::optional<Id> produced_by;

  const Attribute* attribute(std::string_view name) const;
  bool operator==(const HolonState&) const = default;
};

struct Property {
  std::string name;
  Scalar value;

  bool operator==(const Property&) const = default;
};

struct PhysicalPartRef {
  Id ledger_entry;
  Digest checksum = 0;

  bool operator==(const PhysicalPartRef&) const = default;
};

struct Constituent {
  Id holon;
  Id instance;  // the composing process instance

  bool operator==(const Constituent&) const = default;
};

struct Holon {
  Id id;
  Id type;
  HolonKind kind = HolonKind::elementary;
  std::vector<Property> properties;
  std::vector<HolonState> states;
  PhysicalPartRef physical;
  std::vector<Constituent> constituents;
  bool retired = false;

  const HolonState* head() const { return states.empty() ? nullptr : &states.back(); }
  const Property* property(std::string_view name) const;
  bool operator==(const Holon&) const = default;
};

// ---------------------------------------------------------------------------
// Processes and their environment

struct ItemRef {
  Id holon_type;
  std::string item;
  ItemKind kind = ItemKind::attribute;

  auto operator<=>(const ItemRef&) const = default;
};

// "Type.item" plus "(property)" for property items; used in reports.
std::string to_string(const ItemRef& ref);

struct ConceptualLink {
  ItemRef a;
  ItemRef b;

  auto operator<=>(const ConceptualLink&) const = default;
};

struct LcimMetadata {
  std::map<ItemRef, Id> reference_bindings;
  std::optional<Id> behavior_model;
  std::set<ConceptualLink> conceptual_links;

  bool empty() const { return reference_bindings.empty() && !behavior_model && conceptual_links.empty(); }
  bool operator==(const LcimMetadata&) const = default;
};

struct Process {
  Id id;
  std::string name;
  EnterpriseLevel level = EnterpriseLevel::L1;
  std::set<ItemRef> consumes;
  std::set<ItemRef> produces;
  std::set<std::string> required_capabilities;
  LcimMetadata lcim;

  bool operator==(const Process&) const = default;
};

struct Flow {
  Id id;
  Id from;
  Id to;
  FlowKind kind = FlowKind::material;
  std::optional<Id> carries;
  std::set<ItemRef> declared_items;

  bool from_external() const { return from == kExternal; }
  bool to_external() const { return to == kExternal; }
  bool operator==(const Flow&) const = default;
};

struct Actor {
  Id id;
  std::string name;
  bool internal = true;

  bool operator==(const Actor&) const = default;
};

struct Site {
  Id id;
  std::string name;
  std::optional<std::string> geo;

  bool operator==(const Site&) const = default;
};

struct Resource {
  Id id;
  ResourceKind kind = ResourceKind::material;
  std::set<std::string> provides;

  bool operator==(const Resource&) const = default;
};

struct ItemDecl {
  std::string name;
  ItemKind kind = ItemKind::attribute;
  std::optional<AttributeClass> cls;  // attributes only

  bool operator==(const ItemDecl&) const = default;
};

struct HolonType {
  Id id;
  std::vector<ItemDecl> items;

  const ItemDecl* find(std::string_view name, ItemKind kind) const;
  bool operator==(const HolonType&) const = default;
};

struct HolonStateRef {
  Id holon;
  Id state;

  bool operator==(const HolonStateRef&) const = default;
};

struct ProcessInstance {
  Id id;
  Id process;
  int occurrence = 1;
  std::vector<HolonStateRef> inputs;
  std::vector<HolonStateRef> outputs;
  Timestamp start;
  Timestamp end;
  std::set<Id> used;
  Duration elapsed;

  bool operator==(const ProcessInstance&) const = default;
};

// ---------------------------------------------------------------------------
// Physical ledger

struct LedgerEntry {
  std::string descriptor;
  Digest checksum = 0;

  bool operator==(const LedgerEntry&) const = default;
};

struct LedgerEvent {
  Id entry;
  Digest before = 0;
  Digest after = 0;
  std::string cause;

  bool operator==(const LedgerEvent&) const = default;
};

// Store of physical descriptors. Every entry's checksum equals the digest of
// its descriptor; the mutation history only grows.
class PhysicalLedger {
 public:
  bool contains(const Id& entry) const { return entries_.count(entry) != 0; }
  const LedgerEntry* find(const Id& entry) const;
  const std::map<Id, LedgerEntry>& entries() const { return entries_; }
  const std::vector<LedgerEvent>& history() const { return history_; }

  // Returns the checksum of the stored descriptor.
  Digest create(const Id& entry, std::string descriptor, std::string cause);
  Digest rewrite(const Id& entry, std::string descriptor, std::string cause);

  // Replaces a descriptor without recording history. Test hook for
  // simulating a physical change the information system never saw.
  void overwrite_out_of_band(const Id& entry, std::string descriptor);

  // Entries are equal; history is runtime-only and not compared.
  bool operator==(const PhysicalLedger& other) const { return entries_ == other.entries_; }

 private:
  std::map<Id, LedgerEntry> entries_;
  std::vector<LedgerEvent> history_;
};

// ---------------------------------------------------------------------------
// Simulation scenarios

enum class FaultPoint { pre_info, post_info_pre_physical, post_physical_pre_commit };

std::string_view to_string(FaultPoint p);
std::optional<FaultPoint> parse_fault_point(std::string_view s);

struct RunDirective {
  Id process;
  std::vector<Id> inputs;
  std::vector<Id> resources;
  std::optional<FaultPoint> fault;

  bool operator==(const RunDirective&) const = default;
};

// A stepping clock: the n-th reading is clock_start + n * clock_step.
struct Scenario {
  Id id;
  Timestamp clock_start;
  Duration clock_step{1000};
  std::vector<RunDirective> runs;

  bool operator==(const Scenario&) const = default;
};

// ---------------------------------------------------------------------------

struct SystemModel {
  std::vector<Site> sites;
  std::vector<Actor> actors;
  std::vector<Resource> resources;
  std::vector<HolonType> holon_types;
  std::set<Id> reference_registry;
  std::vector<Holon> holons;
  std::vector<Process> processes;
  std::vector<Flow> flows;
  std::vector<ProcessInstance> instances;
  std::vector<Scenario> scenarios;
  PhysicalLedger ledger;

  const Holon* find_holon(std::string_view id) const;
  Holon* find_holon(std::string_view id);
  const Process* find_process(std::string_view id) const;
  const Flow* find_flow(std::string_view id) const;
  const Resource* find_resource(std::string_view id) const;
  const HolonType* find_holon_type(std::string_view id) const;
  const ProcessInstance* find_instance(std::string_view id) const;
  const Scenario* find_scenario(std::string_view id) const;

  // True when `ref` names an item declared by its holon type.
  bool resolves(const ItemRef& ref) const;

  bool operator==(const SystemModel&) const = default;
};

// Copy with every id-keyed collection sorted by id, properties and state
// attributes sorted by name, and declared items sorted. State histories,
// constituent lists and instance input/output lists keep their order.
SystemModel canonicalize(SystemModel model);

// Equality up to the canonical ordering above.
bool structurally_equal(const SystemModel& a, const SystemModel& b);

}  // namespace holx
