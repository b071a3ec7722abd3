#include "holx/validate.hpp"

#include <algorithm>
#include <map>
#include <queue>
#include <set>

namespace holx {

namespace {

class Checker {
 public:
  explicit Checker(const SystemModel& m) : m_(m) {}

  std::vector<Violation> run() {
    check_ids();
    check_holon_types();
    check_holons();
    check_genealogy_cycles();
    check_processes();
    check_flows();
    check_instances();
    check_scenarios();
    std::sort(out_.begin(), out_.end());
    out_.erase(std::unique(out_.begin(), out_.end()), out_.end());
    return std::move(out_);
  }

 private:
  void add(std::string code, const std::string& subject, std::string message) {
    out_.push_back(Violation{std::move(code), subject, std::move(message)});
  }

  template <typename T>
  void unique_ids(const std::vector<T>& items, std::string_view what) {
    std::set<std::string_view> seen;
    for (const auto& x : items) {
      if (!is_valid_id(x.id)) add("E-V-001", x.id, std::string(what) + " id '" + x.id + "' is not a valid identifier");
      if (!seen.insert(x.id).second) add("E-R-001", x.id, "duplicate " + std::string(what) + " id '" + x.id + "'");
    }
  }

  void check_ids() {
    unique_ids(m_.sites, "site");
    unique_ids(m_.actors, "actor");
    unique_ids(m_.resources, "resource");
    unique_ids(m_.holon_types, "holon type");
    unique_ids(m_.holons, "holon");
    unique_ids(m_.processes, "process");
    unique_ids(m_.flows, "flow");
    unique_ids(m_.instances, "instance");
    unique_ids(m_.scenarios, "scenario");
    for (const auto& t : m_.reference_registry) {
      if (!is_valid_id(t)) add("E-V-001", t, "reference term '" + t + "' is not a valid identifier");
    }
  }

  void item_ref(const ItemRef& ref, const std::string& subject, std::string_view where) {
    if (!m_.resolves(ref)) {
      add("E-P-001", subject, std::string(where) + " item " + to_string(ref) + " is not declared by holon type '" +
                                  ref.holon_type + "'");
    }
  }

  void check_holon_types() {
    for (const auto& t : m_.holon_types) {
      std::set<std::pair<std::string_view, ItemKind>> seen;
      for (const auto& d : t.items) {
        if (!seen.insert({d.name, d.kind}).second) {
          add("E-R-001", t.id, "holon type '" + t.id + "' declares " + std::string(to_string(d.kind)) + " '" + d.name +
                                   "' twice");
        }
      }
    }
  }

  void check_holons() {
    std::set<std::string_view> ledger_refs;
    for (const auto& h : m_.holons) {
      if (!m_.find_holon_type(h.type)) add("E-M-001", h.id, "holon '" + h.id + "' has unknown type '" + h.type + "'");
      if (h.kind == HolonKind::elementary && !h.constituents.empty()) {
        add("E-H-001", h.id, "elementary holon '" + h.id + "' has constituents");
      }
      if (h.kind == HolonKind::composite && h.constituents.empty()) {
        add("E-H-003", h.id, "composite holon '" + h.id + "' has no constituents");
      }
      for (const auto& c : h.constituents) {
        if (!m_.find_holon(c.holon)) {
          add("E-M-001", h.id, "holon '" + h.id + "' lists unknown constituent '" + c.holon + "'");
        }
        if (!m_.find_instance(c.instance)) {
          add("E-M-001", h.id, "holon '" + h.id + "' was composed by unknown instance '" + c.instance + "'");
        }
      }
      std::set<std::string_view> props;
      for (const auto& p : h.properties) {
        if (!props.insert(p.name).second) add("E-R-001", h.id, "holon '" + h.id + "' repeats property '" + p.name + "'");
      }
      std::set<std::string_view> state_ids;
      const HolonState* prev = nullptr;
      for (const auto& s : h.states) {
        if (!is_valid_id(s.id)) add("E-V-001", h.id, "state id '" + s.id + "' of holon '" + h.id + "' is not valid");
        if (!state_ids.insert(s.id).second) add("E-R-001", h.id, "holon '" + h.id + "' repeats state '" + s.id + "'");
        if (prev && s.at < prev->at) {
          add("E-S-001", h.id, "state '" + s.id + "' of holon '" + h.id + "' is earlier than state '" + prev->id + "'");
        }
        prev = &s;
        std::set<std::string_view> names;
        for (const auto& a : s.attributes) {
          if (!names.insert(a.name).second) {
            add("E-S-002", h.id, "state '" + s.id + "' of holon '" + h.id + "' repeats attribute '" + a.name + "'");
          }
          if (a.cls == AttributeClass::time && !is_valid_time_value(a)) {
            add("E-S-003", h.id, "time attribute '" + a.name + "' in state '" + s.id + "' of holon '" + h.id +
                                     "' is neither a timestamp nor a duration in ms");
          }
        }
        if (s.produced_by && !m_.find_instance(*s.produced_by)) {
          add("E-M-001", h.id, "state '" + s.id + "' of holon '" + h.id + "' names unknown instance '" +
                                   *s.produced_by + "'");
        }
      }
      const LedgerEntry* entry = m_.ledger.find(h.physical.ledger_entry);
      if (!entry) {
        add("E-M-001", h.id, "holon '" + h.id + "' references missing ledger entry '" + h.physical.ledger_entry + "'");
      } else if (entry->checksum != h.physical.checksum) {
        add("E-L-001", h.id, "holon '" + h.id + "' checksum " + digest_hex(h.physical.checksum) +
                                 " differs from ledger " + digest_hex(entry->checksum));
      }
      if (!ledger_refs.insert(h.physical.ledger_entry).second) {
        add("E-R-001", h.id, "ledger entry '" + h.physical.ledger_entry + "' is shared by several holons");
      }
    }
  }

  // Kahn's algorithm over holon -> constituent edges; whatever cannot be
  // ordered lies on or behind a cycle.
  void check_genealogy_cycles() {
    std::map<std::string_view, int> indegree;
    std::map<std::string_view, std::vector<std::string_view>> edges;
    for (const auto& h : m_.holons) indegree.emplace(h.id, 0);
    for (const auto& h : m_.holons) {
      for (const auto& c : h.constituents) {
        if (!indegree.count(c.holon)) continue;
        edges[h.id].push_back(c.holon);
        ++indegree[c.holon];
      }
    }
    std::queue<std::string_view> ready;
    for (const auto& [id, d] : indegree) {
      if (d == 0) ready.push(id);
    }
    while (!ready.empty()) {
      const auto id = ready.front();
      ready.pop();
      indegree.erase(id);
      for (auto next : edges[id]) {
        if (--indegree[next] == 0) ready.push(next);
      }
    }
    for (const auto& [id, d] : indegree) {
      add("E-H-002", std::string(id), "holon '" + std::string(id) + "' lies on a constituent cycle");
    }
  }

  void check_processes() {
    for (const auto& p : m_.processes) {
      for (const auto& r : p.consumes) item_ref(r, p.id, "consumed");
      for (const auto& r : p.produces) item_ref(r, p.id, "produced");
      for (const auto& [ref, term] : p.lcim.reference_bindings) {
        item_ref(ref, p.id, "bound");
        if (!m_.reference_registry.count(term)) {
          add("E-M-001", p.id, "binding of " + to_string(ref) + " names unregistered term '" + term + "'");
        }
      }
      for (const auto& link : p.lcim.conceptual_links) {
        item_ref(link.a, p.id, "linked");
        item_ref(link.b, p.id, "linked");
      }
    }
  }

  void endpoint(const Flow& f, const Id& end, std::string_view role) {
    if (end == kExternal) return;
    if (!m_.find_process(end)) {
      add("E-M-001", f.id, "flow '" + f.id + "' " + std::string(role) + " unknown process '" + end + "'");
    }
  }

  void check_flows() {
    for (const auto& f : m_.flows) {
      endpoint(f, f.from, "starts at");
      endpoint(f, f.to, "ends at");
      if (f.from_external() && f.to_external()) add("E-F-001", f.id, "flow '" + f.id + "' has two external endpoints");
      if (f.carries && !m_.find_holon_type(*f.carries)) {
        add("E-M-001", f.id, "flow '" + f.id + "' carries unknown holon type '" + *f.carries + "'");
      }
      for (const auto& r : f.declared_items) item_ref(r, f.id, "declared");
    }
  }

  void state_ref(const ProcessInstance& i, const HolonStateRef& ref) {
    const Holon* h = m_.find_holon(ref.holon);
    if (!h) {
      add("E-M-001", i.id, "instance '" + i.id + "' references unknown holon '" + ref.holon + "'");
      return;
    }
    const bool found =
        std::any_of(h->states.begin(), h->states.end(), [&](const HolonState& s) { return s.id == ref.state; });
    if (!found) {
      add("E-M-001", i.id, "instance '" + i.id + "' references unknown state '" + ref.state + "' of '" + ref.holon + "'");
    }
  }

  void check_instances() {
    for (const auto& i : m_.instances) {
      const Process* p = m_.find_process(i.process);
      if (!p) add("E-M-001", i.id, "instance '" + i.id + "' runs unknown process '" + i.process + "'");
      if (i.end < i.start) add("E-I-001", i.id, "instance '" + i.id + "' ends before it starts");
      if (i.elapsed != i.end - i.start) add("E-I-001", i.id, "instance '" + i.id + "' elapsed time is not end - start");
      if (i.occurrence < 1) add("E-I-001", i.id, "instance '" + i.id + "' has a non-positive occurrence");
      for (const auto& r : i.inputs) state_ref(i, r);
      for (const auto& r : i.outputs) state_ref(i, r);
      std::set<std::string_view> provided;
      for (const auto& rid : i.used) {
        const Resource* r = m_.find_resource(rid);
        if (!r) {
          add("E-M-001", i.id, "instance '" + i.id + "' used unknown resource '" + rid + "'");
          continue;
        }
        provided.insert(r->provides.begin(), r->provides.end());
      }
      if (p) {
        for (const auto& cap : p->required_capabilities) {
          if (!provided.count(cap)) {
            add("E-I-002", i.id, "instance '" + i.id + "' used no resource providing '" + cap + "'");
          }
        }
      }
    }
  }

  void check_scenarios() {
    for (const auto& s : m_.scenarios) {
      for (const auto& run : s.runs) {
        if (!m_.find_process(run.process)) {
          add("E-M-001", s.id, "scenario '" + s.id + "' runs unknown process '" + run.process + "'");
        }
        for (const auto& h : run.inputs) {
          if (!m_.find_holon(h)) add("E-M-001", s.id, "scenario '" + s.id + "' feeds unknown holon '" + h + "'");
        }
        for (const auto& r : run.resources) {
          if (!m_.find_resource(r)) add("E-M-001", s.id, "scenario '" + s.id + "' uses unknown resource '" + r + "'");
        }
      }
    }
  }

  const SystemModel& m_;
  std::vector<Violation> out_;
};

}  // namespace

std::vector<Violation> validate(const SystemModel& model) { return Checker(model).run(); }

}  // namespace holx
