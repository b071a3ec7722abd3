#include "holx/execution.hpp"

#include <algorithm>
#include <set>
#include <tuple>

#include "holx/error.hpp"
#include "holx/holon.hpp"

namespace holx {

namespace {

[[noreturn]] void injected(FaultPoint p) {
  throw Error(ErrorCode::DomainFault,
              "injected fault at " + std::string(to_string(p)) + "; informational and physical changes rolled back",
              std::string(to_string(p)));
}

void maybe_fail(const FaultPlan& plan, FaultPoint here) {
  if (plan.fail_at == here) injected(here);
}

bool holds_item(const Holon& h, const ItemRef& item) {
  if (h.type != item.holon_type) return false;
  if (item.kind == ItemKind::property) return h.property(item.item) != nullptr;
  const HolonState* head = h.head();
  return head && head->attribute(item.item) != nullptr;
}

Id fresh_instance_id(const SystemModel& m, const Id& process, int occurrence) {
  const Id base = process + "#" + std::to_string(occurrence);
  Id id = base;
  for (int n = 2; m.find_instance(id); ++n) id = base + "~" + std::to_string(n);
  return id;
}

}  // namespace

Store::Store(SystemModel model) : root_(std::make_shared<const SystemModel>(std::move(model))) {}

std::shared_ptr<const SystemModel> Store::snapshot() const {
  std::lock_guard lock(root_mutex_);
  return root_;
}

void Store::publish(std::shared_ptr<const SystemModel> next) {
  std::lock_guard lock(root_mutex_);
  root_ = std::move(next);
}

ProcessInstance Store::run_instance(const RunRequest& req, Clock& clock, const FaultPlan& fault) {
  std::lock_guard writer(writer_);
  const auto current = snapshot();
  const SystemModel& m = *current;

  const Process* process = m.find_process(req.process);
  if (!process) throw Error(ErrorCode::UnknownProcess, "unknown process '" + req.process + "'", req.process);

  std::set<Id> seen;
  std::vector<const Holon*> inputs;
  for (const auto& id : req.inputs) {
    const Holon* h = m.find_holon(id);
    if (!h) throw Error(ErrorCode::UnknownHolon, "holon '" + id + "' does not exist", id);
    if (h->retired) throw Error(ErrorCode::RetiredHolon, "holon '" + id + "' is retired", id);
    if (!seen.insert(id).second) throw Error(ErrorCode::DuplicateId, "holon '" + id + "' is listed twice", id);
    inputs.push_back(h);
  }

  std::set<std::string> provided;
  for (const auto& rid : req.resources) {
    const Resource* r = m.find_resource(rid);
    if (!r) throw Error(ErrorCode::NotFound, "resource '" + rid + "' does not exist", rid);
    provided.insert(r->provides.begin(), r->provides.end());
  }
  for (const auto& cap : process->required_capabilities) {
    if (!provided.count(cap)) {
      throw Error(ErrorCode::CapabilityMissing,
                  "process '" + process->id + "' needs capability '" + cap + "' that no supplied resource provides", cap);
    }
  }

  for (const auto& item : process->consumes) {
    if (process->produces.count(item)) continue;
    const bool present = std::any_of(inputs.begin(), inputs.end(), [&](const Holon* h) { return holds_item(*h, item); });
    if (!present) {
      throw Error(ErrorCode::ConsumedItemAbsent,
                  "process '" + process->id + "' consumes " + to_string(item) + " but no input holon carries it",
                  to_string(item));
    }
  }

  maybe_fail(fault, FaultPoint::pre_info);

  // Stage: everything below mutates a private copy only.
  auto staged = std::make_shared<SystemModel>(m);
  const Timestamp start = clock.now();
  const Timestamp end = clock.now();
  const int occurrence =
      1 + static_cast<int>(std::count_if(m.instances.begin(), m.instances.end(),
                                         [&](const ProcessInstance& i) { return i.process == process->id; }));

  ProcessInstance instance;
  instance.id = fresh_instance_id(m, process->id, occurrence);
  instance.process = process->id;
  instance.occurrence = occurrence;
  instance.start = start;
  instance.end = end;
  instance.elapsed = end - start;
  instance.used.insert(req.resources.begin(), req.resources.end());
  if (end < start) throw Error(ErrorCode::TimeRegression, "clock ran backwards during instance " + instance.id);

  const std::string token = process->id + "#" + std::to_string(occurrence);
  const HolonType* type_decl = nullptr;

  // Informational sub-process.
  for (const Holon* input : inputs) {
    Holon& h = *staged->find_holon(input->id);
    type_decl = staged->find_holon_type(h.type);
    HolonState next;
    next.id = instance.id;
    next.at = end;
    if (const HolonState* head = h.head()) next.attributes = head->attributes;
    for (const auto& item : process->produces) {
      if (item.holon_type != h.type) continue;
      if (item.kind == ItemKind::property) {
        auto it = std::find_if(h.properties.begin(), h.properties.end(),
                               [&](const Property& p) { return p.name == item.item; });
        if (it != h.properties.end()) it->value = Scalar::parse(token);
        else h.properties.push_back(Property{item.item, Scalar::parse(token)});
        continue;
      }
      const ItemDecl* decl = type_decl ? type_decl->find(item.item, ItemKind::attribute) : nullptr;
      Attribute a;
      a.name = item.item;
      a.cls = decl && decl->cls ? *decl->cls : AttributeClass::shape;
      a.value = a.cls == AttributeClass::time ? Scalar::timestamp(item.item == "start" ? start : end)
                                              : Scalar::parse(token);
      auto it = std::find_if(next.attributes.begin(), next.attributes.end(),
                             [&](const Attribute& x) { return x.name == a.name; });
      if (it != next.attributes.end()) *it = std::move(a);
      else next.attributes.push_back(std::move(a));
    }
    std::sort(h.properties.begin(), h.properties.end(),
              [](const Property& a, const Property& b) { return a.name < b.name; });
    instance.inputs.push_back(HolonStateRef{h.id, h.head() ? h.head()->id : Id{}});
    instance.outputs.push_back(HolonStateRef{h.id, next.id});
    append_state(*staged, h.id, std::move(next), instance.id);
  }
  instance.inputs.erase(std::remove_if(instance.inputs.begin(), instance.inputs.end(),
                                       [](const HolonStateRef& r) { return r.state.empty(); }),
                        instance.inputs.end());

  maybe_fail(fault, FaultPoint::post_info_pre_physical);

  // Physical sub-process: process-control level processes transform
  // material; higher levels only touch information.
  if (process->level == EnterpriseLevel::L1) {
    for (const Holon* input : inputs) {
      Holon& h = *staged->find_holon(input->id);
      const LedgerEntry* entry = staged->ledger.find(h.physical.ledger_entry);
      const std::string descriptor = digest_hex(digest(entry ? entry->descriptor : std::string{})) + ":" + token;
      h.physical.checksum = staged->ledger.rewrite(h.physical.ledger_entry, descriptor, instance.id);
    }
  }
  staged->instances.push_back(instance);

  maybe_fail(fault, FaultPoint::post_physical_pre_commit);

  publish(std::move(staged));
  return instance;
}

bool sync_check(const SystemModel& model, const Id& holon) {
  const Holon* h = model.find_holon(holon);
  if (!h) throw Error(ErrorCode::NotFound, "holon '" + holon + "' does not exist", holon);
  const LedgerEntry* entry = model.ledger.find(h->physical.ledger_entry);
  return entry && entry->checksum == h->physical.checksum;
}

std::vector<TraceEntry> trace(const SystemModel& model, const Id& holon) {
  const GenealogyNode root = genealogy(model, holon);
  std::set<Id> lineage;
  std::vector<const GenealogyNode*> stack{&root};
  while (!stack.empty()) {
    const GenealogyNode* n = stack.back();
    stack.pop_back();
    lineage.insert(n->holon);
    for (const auto& c : n->children) stack.push_back(&c);
  }

  std::vector<TraceEntry> out;
  for (const auto& id : lineage) {
    const Holon* h = model.find_holon(id);
    for (const auto& s : h->states) {
      if (!s.produced_by) continue;
      const ProcessInstance* inst = model.find_instance(*s.produced_by);
      if (!inst) continue;
      out.push_back(TraceEntry{*inst, id, s.id});
    }
  }
  std::sort(out.begin(), out.end(), [](const TraceEntry& a, const TraceEntry& b) {
    return std::tie(a.instance.start, a.instance.id, a.holon, a.state) <
           std::tie(b.instance.start, b.instance.id, b.holon, b.state);
  });
  return out;
}

}  // namespace holx
