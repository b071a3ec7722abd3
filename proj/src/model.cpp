#include "holx/model.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <tuple>

namespace holx {

namespace {

template <typename Enum, std::size_t N>
std::optional<Enum> parse_enum(std::string_view s, const std::array<Enum, N>& values) {
  for (Enum v : values) {
    if (to_string(v) == s) return v;
  }
  return std::nullopt;
}

template <typename T>
auto find_by_id(T& items, std::string_view id) -> decltype(&items.front()) {
  auto it = std::find_if(items.begin(), items.end(), [&](const auto& x) { return x.id == id; });
  return it == items.end() ? nullptr : &*it;
}

template <typename T>
void sort_by_id(std::vector<T>& items) {
  std::stable_sort(items.begin(), items.end(), [](const T& a, const T& b) { return a.id < b.id; });
}

}  // namespace

bool is_valid_id(std::string_view id) {
  if (id.empty()) return false;
  return std::none_of(id.begin(), id.end(), [](unsigned char c) { return c <= 0x20 || c == 0x7f; });
}

std::string_view to_string(AttributeClass v) {
  switch (v) {
    case AttributeClass::space: return "space";
    case AttributeClass::shape: return "shape";
    case AttributeClass::time: return "time";
  }
  return "?";
}

std::string_view to_string(HolonKind v) { return v == HolonKind::elementary ? "elementary" : "composite"; }

std::string_view to_string(ResourceKind v) {
  switch (v) {
    case ResourceKind::material: return "material";
    case ResourceKind::software: return "software";
    case ResourceKind::human: return "human";
  }
  return "?";
}

std::string_view to_string(EnterpriseLevel v) {
  switch (v) {
    case EnterpriseLevel::L1: return "L1";
    case EnterpriseLevel::L2: return "L2";
    case EnterpriseLevel::L3: return "L3";
  }
  return "?";
}

std::string_view to_string(FlowKind v) {
  switch (v) {
    case FlowKind::data: return "data";
    case FlowKind::information: return "information";
    case FlowKind::energy: return "energy";
    case FlowKind::material: return "material";
  }
  return "?";
}

std::string_view to_string(ItemKind v) { return v == ItemKind::attribute ? "attribute" : "property"; }

std::string_view to_string(FaultPoint p) {
  switch (p) {
    case FaultPoint::pre_info: return "pre-info";
    case FaultPoint::post_info_pre_physical: return "post-info-pre-physical";
    case FaultPoint::post_physical_pre_commit: return "post-physical-pre-commit";
  }
  return "?";
}

std::optional<AttributeClass> parse_attribute_class(std::string_view s) {
  return parse_enum(s, std::array{AttributeClass::space, AttributeClass::shape, AttributeClass::time});
}
std::optional<HolonKind> parse_holon_kind(std::string_view s) {
  return parse_enum(s, std::array{HolonKind::elementary, HolonKind::composite});
}
std::optional<ResourceKind> parse_resource_kind(std::string_view s) {
  return parse_enum(s, std::array{ResourceKind::material, ResourceKind::software, ResourceKind::human});
}
std::optional<EnterpriseLevel> parse_enterprise_level(std::string_view s) {
  return parse_enum(s, std::array{EnterpriseLevel::L1, EnterpriseLevel::L2, EnterpriseLevel::L3});
}
std::optional<FlowKind> parse_flow_kind(std::string_view s) {
  return parse_enum(s, std::array{FlowKind::data, FlowKind::information, FlowKind::energy, FlowKind::material});
}
std::optional<ItemKind> parse_item_kind(std::string_view s) {
  return parse_enum(s, std::array{ItemKind::attribute, ItemKind::property});
}
std::optional<FaultPoint> parse_fault_point(std::string_view s) {
  return parse_enum(s, std::array{FaultPoint::pre_info, FaultPoint::post_info_pre_physical,
                                  FaultPoint::post_physical_pre_commit});
}

bool is_valid_time_value(const Attribute& a) {
  if (a.value.is_timestamp()) return true;
  if (a.value.is_number() && a.unit == "ms") {
    const double v = a.value.as_number();
    return std::trunc(v) == v;
  }
  return false;
}

const Attribute* HolonState::attribute(std::string_view name) const {
  auto it = std::find_if(attributes.begin(), attributes.end(), [&](const Attribute& a) { return a.name == name; });
  return it == attributes.end() ? nullptr : &*it;
}

const Property* Holon::property(std::string_view name) const {
  auto it = std::find_if(properties.begin(), properties.end(), [&](const Property& p) { return p.name == name; });
  return it == properties.end() ? nullptr : &*it;
}

std::string to_string(const ItemRef& ref) {
  std::string out = ref.holon_type + "." + ref.item;
  if (ref.kind == ItemKind::property) out += "(property)";
  return out;
}

const ItemDecl* HolonType::find(std::string_view name, ItemKind kind) const {
  auto it = std::find_if(items.begin(), items.end(),
                         [&](const ItemDecl& d) { return d.name == name && d.kind == kind; });
  return it == items.end() ? nullptr : &*it;
}

const LedgerEntry* PhysicalLedger::find(const Id& entry) const {
  auto it = entries_.find(entry);
  return it == entries_.end() ? nullptr : &it->second;
}

Digest PhysicalLedger::create(const Id& entry, std::string descriptor, std::string cause) {
  if (entries_.count(entry)) throw std::logic_error("ledger entry already exists: " + entry);
  const Digest d = digest(descriptor);
  entries_.emplace(entry, LedgerEntry{std::move(descriptor), d});
  history_.push_back(LedgerEvent{entry, 0, d, std::move(cause)});
  return d;
}

Digest PhysicalLedger::rewrite(const Id& entry, std::string descriptor, std::string cause) {
  auto it = entries_.find(entry);
  if (it == entries_.end()) throw std::logic_error("unknown ledger entry: " + entry);
  const Digest before = it->second.checksum;
  const Digest after = digest(descriptor);
  it->second = LedgerEntry{std::move(descriptor), after};
  history_.push_back(LedgerEvent{entry, before, after, std::move(cause)});
  return after;
}

void PhysicalLedger::overwrite_out_of_band(const Id& entry, std::string descriptor) {
  auto it = entries_.find(entry);
  if (it == entries_.end()) throw std::logic_error("unknown ledger entry: " + entry);
  const Digest d = digest(descriptor);
  it->second = LedgerEntry{std::move(descriptor), d};
}

const Holon* SystemModel::find_holon(std::string_view id) const { return find_by_id(holons, id); }
Holon* SystemModel::find_holon(std::string_view id) { return find_by_id(holons, id); }
const Process* SystemModel::find_process(std::string_view id) const { return find_by_id(processes, id); }
const Flow* SystemModel::find_flow(std::string_view id) const { return find_by_id(flows, id); }
const Resource* SystemModel::find_resource(std::string_view id) const { return find_by_id(resources, id); }
const HolonType* SystemModel::find_holon_type(std::string_view id) const { return find_by_id(holon_types, id); }
const ProcessInstance* SystemModel::find_instance(std::string_view id) const { return find_by_id(instances, id); }
const Scenario* SystemModel::find_scenario(std::string_view id) const { return find_by_id(scenarios, id); }

bool SystemModel::resolves(const ItemRef& ref) const {
  const HolonType* type = find_holon_type(ref.holon_type);
  return type != nullptr && type->find(ref.item, ref.kind) != nullptr;
}

SystemModel canonicalize(SystemModel model) {
  sort_by_id(model.sites);
  sort_by_id(model.actors);
  sort_by_id(model.resources);
  sort_by_id(model.holon_types);
  for (auto& type : model.holon_types) {
    std::stable_sort(type.items.begin(), type.items.end(), [](const ItemDecl& a, const ItemDecl& b) {
      return std::tie(a.name, a.kind) < std::tie(b.name, b.kind);
    });
  }
  sort_by_id(model.holons);
  for (auto& holon : model.holons) {
    std::stable_sort(holon.properties.begin(), holon.properties.end(),
                     [](const Property& a, const Property& b) { return a.name < b.name; });
    for (auto& state : holon.states) {
      std::stable_sort(state.attributes.begin(), state.attributes.end(),
                       [](const Attribute& a, const Attribute& b) { return a.name < b.name; });
    }
  }
  sort_by_id(model.processes);
  sort_by_id(model.flows);
  sort_by_id(model.instances);
  sort_by_id(model.scenarios);
  return model;
}

bool structurally_equal(const SystemModel& a, const SystemModel& b) { return canonicalize(a) == canonicalize(b); }

}  // namespace holx
