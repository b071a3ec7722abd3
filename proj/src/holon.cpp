#include "holx/holon.hpp"

#include <algorithm>
#include <set>

#include "holx/error.hpp"

namespace holx {

namespace {

Id ledger_id_for(const Id& holon) { return "L-" + holon; }

void check_state(const HolonState& state) {
  std::set<std::string_view> names;
  for (const auto& a : state.attributes) {
    if (a.name.empty()) throw Error(ErrorCode::InvalidState, "state '" + state.id + "' has an unnamed attribute", state.id);
    if (!names.insert(a.name).second) {
      throw Error(ErrorCode::InvalidState, "state '" + state.id + "' repeats attribute '" + a.name + "'", a.name);
    }
  }
  if (!is_valid_id(state.id)) throw Error(ErrorCode::InvalidState, "state id '" + state.id + "' is not a valid id", state.id);
}

void sort_attributes(HolonState& state) {
  std::sort(state.attributes.begin(), state.attributes.end(),
            [](const Attribute& a, const Attribute& b) { return a.name < b.name; });
}

void require_new_holon_id(const SystemModel& model, const Id& id) {
  if (!is_valid_id(id)) throw Error(ErrorCode::InvalidState, "'" + id + "' is not a valid holon id", id);
  if (model.find_holon(id) || model.ledger.contains(ledger_id_for(id))) {
    throw Error(ErrorCode::DuplicateId, "holon '" + id + "' already exists", id);
  }
}

ProcessInstance* find_instance(SystemModel& model, const Id& id) {
  auto it = std::find_if(model.instances.begin(), model.instances.end(),
                         [&](const ProcessInstance& i) { return i.id == id; });
  return it == model.instances.end() ? nullptr : &*it;
}

void unfold(const SystemModel& model, const Id& id, std::optional<Id> instance, std::vector<Id>& path,
            GenealogyNode& out) {
  const Holon* h = model.find_holon(id);
  if (!h) throw Error(ErrorCode::NotFound, "holon '" + id + "' does not exist", id);
  if (std::find(path.begin(), path.end(), id) != path.end()) {
    throw Error(ErrorCode::InvalidModel, "constituent cycle through holon '" + id + "'", id);
  }
  out.holon = id;
  out.instance = std::move(instance);
  path.push_back(id);
  for (const auto& c : h->constituents) {
    GenealogyNode child;
    unfold(model, c.holon, c.instance, path, child);
    out.children.push_back(std::move(child));
  }
  path.pop_back();
}

void collect_leaves(const GenealogyNode& node, std::vector<Id>& out) {
  if (node.children.empty()) {
    out.push_back(node.holon);
    return;
  }
  for (const auto& c : node.children) collect_leaves(c, out);
}

}  // namespace

Holon new_elementary(SystemModel& model, ElementaryHolonSpec spec, std::string_view physical_descriptor) {
  require_new_holon_id(model, spec.id);
  check_state(spec.initial_state);
  std::set<std::string_view> names;
  for (const auto& p : spec.properties) {
    if (!names.insert(p.name).second) {
      throw Error(ErrorCode::InvalidState, "holon '" + spec.id + "' repeats property '" + p.name + "'", p.name);
    }
  }

  Holon h;
  h.id = spec.id;
  h.type = std::move(spec.type);
  h.kind = HolonKind::elementary;
  h.properties = std::move(spec.properties);
  std::sort(h.properties.begin(), h.properties.end(),
            [](const Property& a, const Property& b) { return a.name < b.name; });
  sort_attributes(spec.initial_state);
  h.states.push_back(std::move(spec.initial_state));
  h.physical.ledger_entry = ledger_id_for(h.id);
  h.physical.checksum =
      model.ledger.create(h.physical.ledger_entry, std::string(physical_descriptor), "create " + h.id);
  model.holons.push_back(h);
  return h;
}

Holon assemble(SystemModel& model, AssemblySpec spec) {
  if (spec.constituents.empty()) {
    throw Error(ErrorCode::EmptyConstituentList, "assembly of '" + spec.id + "' has no constituents", spec.id);
  }
  std::set<Id> seen;
  for (const auto& c : spec.constituents) {
    if (!seen.insert(c).second) {
      throw Error(ErrorCode::DuplicateConstituent, "holon '" + c + "' listed twice in assembly", c);
    }
    const Holon* h = model.find_holon(c);
    if (!h) throw Error(ErrorCode::UnknownHolon, "holon '" + c + "' does not exist", c);
    if (h->retired) throw Error(ErrorCode::RetiredConstituent, "holon '" + c + "' is already retired", c);
  }
  if (!model.find_instance(spec.instance)) {
    throw Error(ErrorCode::NotFound, "process instance '" + spec.instance + "' does not exist", spec.instance);
  }
  require_new_holon_id(model, spec.id);
  check_state(spec.state);

  std::string merged = "assembly";
  for (const auto& c : spec.constituents) {
    const Holon* h = model.find_holon(c);
    merged += ":" + digest_hex(model.ledger.find(h->physical.ledger_entry)->checksum);
  }

  // Everything below is infallible apart from allocation.
  ProcessInstance* instance = find_instance(model, spec.instance);
  Holon composite;
  composite.id = spec.id;
  composite.type = std::move(spec.type);
  composite.kind = HolonKind::composite;
  for (const auto& c : spec.constituents) {
    Holon* h = model.find_holon(c);
    h->retired = true;
    composite.constituents.push_back(Constituent{c, spec.instance});
    if (const HolonState* head = h->head()) instance->inputs.push_back(HolonStateRef{c, head->id});
  }
  spec.state.produced_by = spec.instance;
  sort_attributes(spec.state);
  instance->outputs.push_back(HolonStateRef{composite.id, spec.state.id});
  composite.states.push_back(std::move(spec.state));
  composite.physical.ledger_entry = ledger_id_for(composite.id);
  composite.physical.checksum = model.ledger.create(composite.physical.ledger_entry, std::move(merged),
                                                    "assemble " + composite.id + " by " + spec.instance);
  model.holons.push_back(composite);
  return composite;
}

std::vector<Holon> disassemble(SystemModel& model, const Id& source, const Id& instance_id,
                               std::vector<PartSpec> parts) {
  const Holon* src = model.find_holon(source);
  if (!src) throw Error(ErrorCode::NotFound, "holon '" + source + "' does not exist", source);
  if (src->retired) throw Error(ErrorCode::RetiredConstituent, "holon '" + source + "' is already retired", source);
  if (parts.empty()) throw Error(ErrorCode::EmptyPartList, "disassembly of '" + source + "' lists no parts", source);
  const ProcessInstance* inst = model.find_instance(instance_id);
  if (!inst) throw Error(ErrorCode::NotFound, "process instance '" + instance_id + "' does not exist", instance_id);
  std::set<Id> ids;
  for (const auto& p : parts) {
    require_new_holon_id(model, p.id);
    if (!ids.insert(p.id).second) throw Error(ErrorCode::DuplicateId, "part id '" + p.id + "' repeated", p.id);
  }
  const HolonState* head = src->head();
  if (head && inst->end < head->at) {
    throw Error(ErrorCode::TimeRegression, "instance '" + instance_id + "' ends before the head state of '" + source + "'",
                source);
  }

  std::vector<Holon> out;
  const Id type = src->type;
  const std::vector<Attribute> attrs = head ? head->attributes : std::vector<Attribute>{};
  const Id head_id = head ? head->id : Id{};
  const Timestamp at = inst->end;

  model.find_holon(source)->retired = true;
  ProcessInstance* instance = find_instance(model, instance_id);
  if (!head_id.empty()) instance->inputs.push_back(HolonStateRef{source, head_id});
  for (auto& p : parts) {
    Holon part;
    part.id = p.id;
    part.type = type;
    part.kind = HolonKind::composite;
    part.constituents.push_back(Constituent{source, instance_id});
    HolonState state;
    state.id = instance_id;
    state.at = at;
    state.attributes = attrs;
    state.produced_by = instance_id;
    part.states.push_back(std::move(state));
    instance->outputs.push_back(HolonStateRef{part.id, instance_id});
    part.physical.ledger_entry = ledger_id_for(part.id);
    part.physical.checksum = model.ledger.create(part.physical.ledger_entry, std::move(p.descriptor),
                                                 "disassemble " + source + " by " + instance_id);
    model.holons.push_back(part);
    out.push_back(std::move(part));
  }
  return out;
}

Holon append_state(SystemModel& model, const Id& holon_id, HolonState state, const Id& instance) {
  Holon* h = model.find_holon(holon_id);
  if (!h) throw Error(ErrorCode::NotFound, "holon '" + holon_id + "' does not exist", holon_id);
  if (h->retired) throw Error(ErrorCode::RetiredHolon, "holon '" + holon_id + "' is retired", holon_id);
  check_state(state);
  if (const HolonState* head = h->head(); head && state.at < head->at) {
    throw Error(ErrorCode::TimeRegression,
                "state '" + state.id + "' at " + format_iso8601(state.at) + " precedes head state of '" + holon_id + "'",
                holon_id);
  }
  for (const auto& s : h->states) {
    if (s.id == state.id) throw Error(ErrorCode::DuplicateId, "holon '" + holon_id + "' already has state '" + s.id + "'", s.id);
  }
  state.produced_by = instance;
  sort_attributes(state);
  h->states.push_back(std::move(state));
  return *h;
}

std::size_t GenealogyNode::depth() const {
  std::size_t d = 0;
  for (const auto& c : children) d = std::max(d, c.depth());
  return d + 1;
}

GenealogyNode genealogy(const SystemModel& model, const Id& holon) {
  GenealogyNode root;
  std::vector<Id> path;
  unfold(model, holon, std::nullopt, path, root);
  return root;
}

std::vector<Id> genealogy_leaves(const GenealogyNode& root) {
  std::vector<Id> out;
  collect_leaves(root, out);
  return out;
}

}  // namespace holx
