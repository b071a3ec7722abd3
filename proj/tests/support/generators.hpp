#pragma once

// Random model generators shared by the property and acceptance tests.

#include <algorithm>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "holx/execution.hpp"
#include "holx/holon.hpp"
#include "holx/model.hpp"
#include "holx/validate.hpp"

namespace holx::testgen {

using Rng = std::mt19937_64;

inline int uniform(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }
inline bool chance(Rng& rng, double p) { return std::bernoulli_distribution(p)(rng); }

template <typename T>
const T& pick(Rng& rng, const std::vector<T>& v) {
  return v[static_cast<std::size_t>(uniform(rng, 0, static_cast<int>(v.size()) - 1))];
}

template <typename T>
std::vector<T> subset(Rng& rng, const std::vector<T>& v, double p) {
  std::vector<T> out;
  for (const auto& x : v) {
    if (chance(rng, p)) out.push_back(x);
  }
  return out;
}

inline const Timestamp kEpoch{1714550400000};  // 2024-05-01T08:00:00Z

// Text that never reads as a number or a timestamp, with markup-hostile
// characters mixed in.
inline std::string random_text(Rng& rng) {
  static const std::vector<std::string> pieces = {"steel", "blue", "a&b", "<x>", "q\"uote", "it's", "tab\there",
                                                  "line\nbreak", "ünï", "  pad ", "ok"};
  std::string s = "t-" + pick(rng, pieces);
  if (chance(rng, 0.3)) s += pick(rng, pieces);
  return s;
}

inline Scalar random_scalar(Rng& rng) {
  switch (uniform(rng, 0, 3)) {
    case 0: return Scalar::number(uniform(rng, -1000, 1000));
    case 1: return Scalar::number(std::uniform_real_distribution<double>(-1e6, 1e6)(rng));
    case 2: return Scalar::timestamp(Timestamp{kEpoch.ms + uniform(rng, 0, 1'000'000) * 7});
    default: return Scalar::parse(random_text(rng));
  }
}

inline Attribute random_attribute(Rng& rng, const ItemDecl& decl) {
  Attribute a;
  a.name = decl.name;
  a.cls = decl.cls.value_or(AttributeClass::shape);
  if (a.cls == AttributeClass::time) {
    if (chance(rng, 0.5)) {
      a.value = Scalar::timestamp(Timestamp{kEpoch.ms - uniform(rng, 0, 86'400'000)});
    } else {
      a.value = Scalar::number(uniform(rng, 0, 3'600'000));
      a.unit = "ms";
    }
  } else {
    a.value = random_scalar(rng);
    if (chance(rng, 0.4)) a.unit = pick(rng, std::vector<std::string>{"mm", "kg", "degC", "um"});
  }
  return a;
}

struct ModelParams {
  int max_types = 3;
  int max_items = 5;  // per type
  int max_holons = 5;
  int max_processes = 5;
  int max_flows = 8;
  int max_runs = 6;          // run_instance attempts
  int max_compositions = 2;  // assemble/disassemble attempts
  bool scenarios = true;
  bool lcim = true;
};

inline std::vector<ItemRef> all_item_refs(const SystemModel& m) {
  std::vector<ItemRef> out;
  for (const auto& t : m.holon_types) {
    for (const auto& d : t.items) out.push_back(ItemRef{t.id, d.name, d.kind});
  }
  return out;
}

inline void require_valid(const SystemModel& m) {
  const auto v = validate(m);
  if (!v.empty()) {
    throw std::logic_error("generator produced an invalid model: " + v.front().code + " " + v.front().subject + " " +
                           v.front().message);
  }
}

inline bool capabilities_available(const SystemModel& m, const Process& proc) {
  for (const auto& c : proc.required_capabilities) {
    const bool found = std::any_of(m.resources.begin(), m.resources.end(),
                                   [&](const Resource& r) { return r.provides.count(c) != 0; });
    if (!found) return false;
  }
  return true;
}

// Process instance anchoring a composition; it uses every resource.
inline ProcessInstance& add_manual_instance(SystemModel& m, const Id& process, Timestamp start, Timestamp end) {
  ProcessInstance inst;
  int occ = 1;
  for (const auto& i : m.instances) occ += i.process == process ? 1 : 0;
  inst.id = process + "#" + std::to_string(occ);
  for (int n = 2; m.find_instance(inst.id); ++n) inst.id = process + "#" + std::to_string(occ) + "~" + std::to_string(n);
  inst.process = process;
  inst.occurrence = occ;
  inst.start = start;
  inst.end = end;
  inst.elapsed = end - start;
  for (const auto& r : m.resources) inst.used.insert(r.id);
  m.instances.push_back(inst);
  return m.instances.back();
}

// A valid model exercising every section. Instances come from real
// run_instance calls and compositions from assemble/disassemble.
inline SystemModel random_model(Rng& rng, const ModelParams& p = {}) {
  SystemModel m;
  for (int i = 0, n = uniform(rng, 0, 2); i < n; ++i) {
    Site s{"S" + std::to_string(i), "Site " + random_text(rng), std::nullopt};
    if (chance(rng, 0.5)) s.geo = "45." + std::to_string(uniform(rng, 0, 999)) + ",4.8";
    m.sites.push_back(s);
  }
  for (int i = 0, n = uniform(rng, 0, 2); i < n; ++i) {
    m.actors.push_back(Actor{"A" + std::to_string(i), "Actor " + std::to_string(i), chance(rng, 0.5)});
  }
  const std::vector<std::string> capabilities = {"cut", "weld", "paint", "inspect"};
  for (int i = 0, n = uniform(rng, 0, 3); i < n; ++i) {
    Resource r{"R" + std::to_string(i), static_cast<ResourceKind>(uniform(rng, 0, 2)), {}};
    for (const auto& c : subset(rng, capabilities, 0.4)) r.provides.insert(c);
    m.resources.push_back(r);
  }
  for (int t = 0, nt = uniform(rng, 1, p.max_types); t < nt; ++t) {
    HolonType type{"T" + std::to_string(t), {}};
    for (int i = 0, ni = uniform(rng, 1, p.max_items); i < ni; ++i) {
      ItemDecl d;
      d.name = "i" + std::to_string(i);
      d.kind = chance(rng, 0.25) ? ItemKind::property : ItemKind::attribute;
      if (d.kind == ItemKind::attribute) d.cls = static_cast<AttributeClass>(uniform(rng, 0, 2));
      type.items.push_back(d);
    }
    m.holon_types.push_back(type);
  }
  for (int i = 0, n = uniform(rng, 0, 3); i < n; ++i) m.reference_registry.insert("term:" + std::to_string(i));

  for (int h = 0, nh = uniform(rng, 0, p.max_holons); h < nh; ++h) {
    const HolonType& type = pick(rng, m.holon_types);
    ElementaryHolonSpec spec;
    spec.id = "H" + std::to_string(h);
    spec.type = type.id;
    spec.initial_state.id = "s0";
    spec.initial_state.at = Timestamp{kEpoch.ms - uniform(rng, 0, 3'600'000)};
    for (const auto& d : type.items) {
      if (d.kind == ItemKind::property) {
        if (chance(rng, 0.8)) spec.properties.push_back(Property{d.name, random_scalar(rng)});
      } else if (chance(rng, 0.7)) {
        spec.initial_state.attributes.push_back(random_attribute(rng, d));
      }
    }
    new_elementary(m, spec, "descriptor of " + spec.id + " " + random_text(rng));
  }

  const auto refs = all_item_refs(m);
  for (int i = 0, n = uniform(rng, 0, p.max_processes); i < n; ++i) {
    Process proc;
    proc.id = "P" + std::to_string(i);
    proc.name = "Process " + std::to_string(i);
    proc.level = static_cast<EnterpriseLevel>(uniform(rng, 0, 2));
    for (const auto& r : subset(rng, refs, 0.3)) proc.consumes.insert(r);
    for (const auto& r : subset(rng, refs, 0.3)) proc.produces.insert(r);
    for (const auto& c : subset(rng, capabilities, 0.15)) proc.required_capabilities.insert(c);
    if (p.lcim && chance(rng, 0.5)) {
      std::vector<Id> terms(m.reference_registry.begin(), m.reference_registry.end());
      if (!terms.empty()) {
        for (const auto& r : proc.consumes) {
          if (chance(rng, 0.7)) proc.lcim.reference_bindings[r] = pick(rng, terms);
        }
        for (const auto& r : proc.produces) {
          if (chance(rng, 0.7)) proc.lcim.reference_bindings[r] = pick(rng, terms);
        }
      }
      if (chance(rng, 0.5)) proc.lcim.behavior_model = "bm:" + proc.id;
      if (chance(rng, 0.5)) proc.lcim.conceptual_links.insert(ConceptualLink{pick(rng, refs), pick(rng, refs)});
    }
    m.processes.push_back(proc);
  }

  std::vector<Id> endpoints;
  for (const auto& proc : m.processes) endpoints.push_back(proc.id);
  if (!endpoints.empty()) {
    for (int i = 0, n = uniform(rng, 0, p.max_flows); i < n; ++i) {
      Flow f;
      f.id = "F" + std::to_string(i);
      f.from = chance(rng, 0.25) ? Id(kExternal) : pick(rng, endpoints);
      f.to = f.from != kExternal && chance(rng, 0.15) ? Id(kExternal) : pick(rng, endpoints);
      f.kind = static_cast<FlowKind>(uniform(rng, 0, 3));
      if (chance(rng, 0.5)) f.carries = pick(rng, m.holon_types).id;
      for (const auto& r : subset(rng, refs, f.from_external() ? 0.4 : 0.1)) f.declared_items.insert(r);
      m.flows.push_back(f);
    }
  }

  // Execution history from the real executor.
  if (!m.processes.empty() && !m.holons.empty()) {
    Store store(m);
    SteppingClock clock(Timestamp{kEpoch.ms + 60'000}, Duration{uniform(rng, 0, 5000)});
    for (int i = 0; i < p.max_runs; ++i) {
      RunRequest req;
      req.process = pick(rng, m.processes).id;
      for (const auto& h : m.holons) {
        if (chance(rng, 0.4)) req.inputs.push_back(h.id);
      }
      for (const auto& r : m.resources) {
        if (chance(rng, 0.6)) req.resources.push_back(r.id);
      }
      try {
        store.run_instance(req, clock);
      } catch (const Error&) {
      }
    }
    m = *store.snapshot();
  }

  // Compositions.
  Timestamp t{kEpoch.ms + 10'000'000};
  std::vector<Id> runnable;
  for (const auto& proc : m.processes) {
    if (capabilities_available(m, proc)) runnable.push_back(proc.id);
  }
  for (int i = 0; i < p.max_compositions && !runnable.empty(); ++i) {
    std::vector<Id> live;
    for (const auto& h : m.holons) {
      if (!h.retired) live.push_back(h.id);
    }
    if (live.empty()) break;
    const Id process = pick(rng, runnable);
    const Timestamp end{t.ms + 1000};
    if (chance(rng, 0.6)) {
      std::shuffle(live.begin(), live.end(), rng);
      live.resize(static_cast<std::size_t>(uniform(rng, 1, std::min<int>(3, static_cast<int>(live.size())))));
      const Id inst = add_manual_instance(m, process, t, end).id;
      AssemblySpec spec;
      spec.id = "C" + std::to_string(i);
      spec.type = pick(rng, m.holon_types).id;
      spec.constituents = live;
      spec.instance = inst;
      spec.state.id = "assembled";
      spec.state.at = end;
      assemble(m, spec);
    } else {
      const Id inst = add_manual_instance(m, process, t, end).id;
      std::vector<PartSpec> parts;
      for (int k = 0, n = uniform(rng, 1, 3); k < n; ++k) {
        parts.push_back(PartSpec{"D" + std::to_string(i) + "-" + std::to_string(k), "part " + std::to_string(k)});
      }
      disassemble(m, pick(rng, live), inst, parts);
    }
    t = Timestamp{end.ms + 1000};
  }

  if (p.scenarios && chance(rng, 0.5) && !m.processes.empty()) {
    Scenario sc;
    sc.id = "SC0";
    sc.clock_start = Timestamp{kEpoch.ms + 20'000'000};
    sc.clock_step = Duration{uniform(rng, 0, 2000)};
    for (int i = 0, n = uniform(rng, 0, 3); i < n; ++i) {
      RunDirective d;
      d.process = pick(rng, m.processes).id;
      for (const auto& h : m.holons) {
        if (chance(rng, 0.3)) d.inputs.push_back(h.id);
      }
      for (const auto& r : m.resources) {
        if (chance(rng, 0.3)) d.resources.push_back(r.id);
      }
      if (chance(rng, 0.3)) d.fault = static_cast<FaultPoint>(uniform(rng, 0, 2));
      sc.runs.push_back(d);
    }
    m.scenarios.push_back(sc);
  }

  require_valid(m);
  return m;
}

// Dataflow topology over a single holon type: processes with random
// interfaces and flows (external feeds and self loops included).
struct TopologyParams {
  int max_processes = 8;
  int max_flows = 14;
  int max_items = 12;
};

inline SystemModel random_topology(Rng& rng, const TopologyParams& p = {}) {
  SystemModel m;
  const int n_items = uniform(rng, 1, p.max_items);
  const int n_types = uniform(rng, 1, std::min(3, n_items));
  for (int t = 0; t < n_types; ++t) m.holon_types.push_back(HolonType{"T" + std::to_string(t), {}});
  for (int i = 0; i < n_items; ++i) {
    auto& type = m.holon_types[static_cast<std::size_t>(i % n_types)];
    ItemDecl d;
    d.name = "x" + std::to_string(i);
    d.kind = chance(rng, 0.2) ? ItemKind::property : ItemKind::attribute;
    if (d.kind == ItemKind::attribute) d.cls = AttributeClass::shape;
    type.items.push_back(d);
  }
  const auto refs = all_item_refs(m);
  const int n_proc = uniform(rng, 1, p.max_processes);
  for (int i = 0; i < n_proc; ++i) {
    Process proc;
    proc.id = "P" + std::to_string(i);
    proc.name = proc.id;
    for (const auto& r : subset(rng, refs, 0.2)) proc.consumes.insert(r);
    for (const auto& r : subset(rng, refs, 0.2)) proc.produces.insert(r);
    m.processes.push_back(proc);
  }
  for (int i = 0, n = uniform(rng, 0, p.max_flows); i < n; ++i) {
    Flow f;
    f.id = (i < 10 ? "F0" : "F") + std::to_string(i);
    const bool external_in = chance(rng, 0.2);
    f.from = external_in ? Id(kExternal) : pick(rng, m.processes).id;
    f.to = !external_in && chance(rng, 0.1) ? Id(kExternal) : pick(rng, m.processes).id;
    if (f.from_external()) {
      for (const auto& r : subset(rng, refs, 0.25)) f.declared_items.insert(r);
    }
    m.flows.push_back(f);
  }
  require_valid(m);
  return m;
}

}  // namespace holx::testgen
