#include "holx/interop.hpp"

#include <algorithm>

#include "holx/error.hpp"

namespace holx {

namespace {

const Process& require_process(const SystemModel& model, const Id& id) {
  const Process* p = model.find_process(id);
  if (!p) throw Error(ErrorCode::UnknownProcess, "unknown process '" + id + "'", id);
  return *p;
}

}  // namespace

std::string_view to_string(WitnessKind k) {
  switch (k) {
    case WitnessKind::predecessor: return "predecessor";
    case WitnessKind::external_flow: return "external";
    case WitnessKind::self: return "self";
  }
  return "?";
}

std::string_view to_string(PairClass c) { return c == PairClass::horizontal ? "horizontal" : "vertical"; }

InteropVerdict check_process_interop(const SystemModel& model, const PrecedenceRelation& rel, const Id& id) {
  const Process& p = require_process(model, id);
  const OccNode target{id, 1};

  // Predecessor processes, in id order.
  std::vector<const Process*> predecessors;
  for (const auto& q : model.processes) {
    if (q.id != id && rel.contains(OccNode{q.id, 1}, target)) predecessors.push_back(&q);
  }
  std::sort(predecessors.begin(), predecessors.end(), [](const Process* a, const Process* b) { return a->id < b->id; });

  // External flows into P or one of its predecessors, in id order.
  std::vector<const Flow*> boundary;
  for (const auto& f : model.flows) {
    if (!f.from_external() || f.to_external()) continue;
    if (f.to == id || rel.contains(OccNode{f.to, 1}, target)) boundary.push_back(&f);
  }
  std::sort(boundary.begin(), boundary.end(), [](const Flow* a, const Flow* b) { return a->id < b->id; });

  InteropVerdict verdict;
  verdict.process = id;
  for (const auto& item : p.consumes) {
    std::optional<Witness> w;
    for (const Process* q : predecessors) {
      if (q->produces.count(item)) {
        w = Witness{WitnessKind::predecessor, q->id};
        break;
      }
    }
    if (!w) {
      for (const Flow* f : boundary) {
        if (f->declared_items.count(item)) {
          w = Witness{WitnessKind::external_flow, f->id};
          break;
        }
      }
    }
    if (!w && p.produces.count(item)) w = Witness{WitnessKind::self, id};
    if (w) verdict.producers.emplace(item, *w);
    else verdict.unmatched.push_back(item);
  }
  verdict.interoperable = verdict.unmatched.empty();
  return verdict;
}

SystemInterop check_system_interop(const SystemModel& model, int horizon) {
  const PrecedenceRelation rel = build_precedence(model, horizon);
  SystemInterop out;
  for (const auto& p : model.processes) {
    auto v = check_process_interop(model, rel, p.id);
    out.overall = out.overall && v.interoperable;
    out.verdicts.emplace(p.id, std::move(v));
  }
  return out;
}

LcimLevel classify_lcim(const SystemModel& model, const Id& id) {
  const Process& p = require_process(model, id);
  LcimLevel out;

  std::set<ItemRef> interface = p.consumes;
  interface.insert(p.produces.begin(), p.produces.end());
  if (interface.empty()) return out;
  out.level = 1;
  out.justification.push_back("L1 documented data: interface declares " + std::to_string(interface.size()) + " item(s)");

  const bool aligned = std::all_of(interface.begin(), interface.end(), [&](const ItemRef& r) {
    auto it = p.lcim.reference_bindings.find(r);
    return it != p.lcim.reference_bindings.end() && model.reference_registry.count(it->second) != 0;
  });
  if (!aligned) return out;
  out.level = 2;
  out.justification.push_back("L2 aligned static data: every interface item is bound to a reference term");

  if (!p.lcim.behavior_model) return out;
  out.level = 3;
  out.justification.push_back("L3 aligned dynamic data: behavior model '" + *p.lcim.behavior_model + "'");

  const auto& links = p.lcim.conceptual_links;
  const bool harmonized = !links.empty() && std::all_of(links.begin(), links.end(), [&](const ConceptualLink& l) {
    return model.resolves(l.a) && model.resolves(l.b);
  });
  if (!harmonized) return out;
  out.level = 4;
  out.justification.push_back("L4 harmonized data semantic: " + std::to_string(links.size()) +
                              " conceptual link(s) with declared endpoints");
  return out;
}

PairClass classify_pair(const SystemModel& model, const Id& p, const Id& q) {
  const Process& a = require_process(model, p);
  const Process& b = require_process(model, q);
  return a.level == b.level ? PairClass::horizontal : PairClass::vertical;
}

std::set<Id> producers_of(const SystemModel& model, const ItemRef& item) {
  if (!model.resolves(item)) throw Error(ErrorCode::UnknownItem, "item " + to_string(item) + " is not declared", to_string(item));
  std::set<Id> out;
  for (const auto& p : model.processes) {
    if (p.produces.count(item)) out.insert(p.id);
  }
  return out;
}

std::set<Id> consumers_of(const SystemModel& model, const ItemRef& item) {
  if (!model.resolves(item)) throw Error(ErrorCode::UnknownItem, "item " + to_string(item) + " is not declared", to_string(item));
  std::set<Id> out;
  for (const auto& p : model.processes) {
    if (p.consumes.count(item)) out.insert(p.id);
  }
  return out;
}

}  // namespace holx
