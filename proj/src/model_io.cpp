#include "holx/model_io.hpp"

#include <charconv>
#include <limits>
#include <fstream>
#include <sstream>

#include "holx/error.hpp"
#include "holx/resources.hpp"
#include "holx/validate.hpp"

namespace holx {

namespace {

using xml::Element;

// ---------------------------------------------------------------------------
// Writing

Element item_ref_element(std::string name, const ItemRef& r) {
  Element e(std::move(name));
  e.set("type", r.holon_type).set("item", r.item).set("kind", std::string(to_string(r.kind)));
  return e;
}

Element write_holon(const Holon& h, const PhysicalLedger& ledger) {
  Element e("holon");
  e.set("id", h.id).set("type", h.type).set("kind", std::string(to_string(h.kind)));
  e.set("retired", h.retired ? "true" : "false");
  for (const auto& p : h.properties) e.add(Element("property")).set("name", p.name).set("value", p.value.to_string());
  for (const auto& s : h.states) {
    Element se("state");
    se.set("id", s.id).set("at", format_iso8601(s.at));
    if (s.produced_by) se.set("produced-by", *s.produced_by);
    for (const auto& a : s.attributes) {
      Element ae("attribute");
      ae.set("name", a.name).set("class", std::string(to_string(a.cls))).set("value", a.value.to_string());
      if (a.unit) ae.set("unit", *a.unit);
      se.add(std::move(ae));
    }
    e.add(std::move(se));
  }
  Element phys("physical");
  phys.set("ledger", h.physical.ledger_entry).set("checksum", digest_hex(h.physical.checksum));
  const LedgerEntry* entry = ledger.find(h.physical.ledger_entry);
  phys.set("descriptor", entry ? hex_encode(entry->descriptor) : std::string{});
  e.add(std::move(phys));
  for (const auto& c : h.constituents) e.add(Element("constituent")).set("ref", c.holon).set("instance", c.instance);
  return e;
}

Element write_process(const Process& p) {
  Element e("process");
  e.set("id", p.id).set("name", p.name).set("level", std::string(to_string(p.level)));
  for (const auto& r : p.consumes) e.add(item_ref_element("consumes", r));
  for (const auto& r : p.produces) e.add(item_ref_element("produces", r));
  for (const auto& c : p.required_capabilities) e.add(Element("requires")).set("capability", c);
  if (!p.lcim.empty()) {
    Element l("lcim");
    for (const auto& [ref, term] : p.lcim.reference_bindings) l.add(item_ref_element("binding", ref)).set("term", term);
    if (p.lcim.behavior_model) l.add(Element("behavior")).set("ref", *p.lcim.behavior_model);
    for (const auto& link : p.lcim.conceptual_links) {
      Element le("link");
      le.set("a-type", link.a.holon_type).set("a-item", link.a.item).set("a-kind", std::string(to_string(link.a.kind)));
      le.set("b-type", link.b.holon_type).set("b-item", link.b.item).set("b-kind", std::string(to_string(link.b.kind)));
      l.add(std::move(le));
    }
    e.add(std::move(l));
  }
  return e;
}

// ---------------------------------------------------------------------------
// Reading

class Reader {
 public:
  SystemModel read(const Element& root) {
    holonic_schema().check(root);
    const std::string base = "/" + root.name;
    for (const auto& section : root.children) {
      const std::string path = base + "/" + section.name;
      for (const auto& el : section.children) {
        const std::string p = path + "/" + el.name;
        if (el.name == "site") read_site(el);
        else if (el.name == "actor") read_actor(el);
        else if (el.name == "resource") read_resource(el);
        else if (el.name == "holon-type") read_holon_type(el, p);
        else if (el.name == "term") m_.reference_registry.insert(req(el, "id"));
        else if (el.name == "holon") read_holon(el, p);
        else if (el.name == "process") read_process(el);
        else if (el.name == "flow") read_flow(el);
        else if (el.name == "instance") read_instance(el, p);
        else if (el.name == "scenario") read_scenario(el, p);
      }
    }
    return std::move(m_);
  }

 private:
  [[noreturn]] static void fail(const Element& el, const std::string& path, const std::string& what) {
    throw Error(ErrorCode::SchemaViolation,
                what + " at " + path + " (line " + std::to_string(el.line) + ", column " + std::to_string(el.column) + ")",
                path);
  }

  // Schema check has already guaranteed required attributes are present.
  static const std::string& req(const Element& el, std::string_view key) { return *el.attribute(key); }

  static std::optional<std::string> opt(const Element& el, std::string_view key) {
    const auto* v = el.attribute(key);
    return v ? std::optional<std::string>(*v) : std::nullopt;
  }

  static Timestamp timestamp(const Element& el, std::string_view key, const std::string& path) {
    auto t = parse_iso8601(req(el, key));
    if (!t) fail(el, path + "/@" + std::string(key), "malformed timestamp '" + req(el, key) + "'");
    return *t;
  }

  static std::int64_t integer(const Element& el, std::string_view key, const std::string& path) {
    const std::string& s = req(el, key);
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) {
      fail(el, path + "/@" + std::string(key), "malformed integer '" + s + "'");
    }
    return v;
  }

  static ItemRef item_ref(const Element& el, const std::string& prefix = {}) {
    return ItemRef{req(el, prefix + "type"), req(el, prefix + "item"), *parse_item_kind(req(el, prefix + "kind"))};
  }

  void read_site(const Element& el) { m_.sites.push_back(Site{req(el, "id"), req(el, "name"), opt(el, "geo")}); }

  void read_actor(const Element& el) {
    m_.actors.push_back(Actor{req(el, "id"), req(el, "name"), req(el, "internal") == "true"});
  }

  void read_resource(const Element& el) {
    Resource r{req(el, "id"), *parse_resource_kind(req(el, "kind")), {}};
    for (const auto& c : el.children) r.provides.insert(req(c, "capability"));
    m_.resources.push_back(std::move(r));
  }

  void read_holon_type(const Element& el, const std::string& path) {
    HolonType t{req(el, "id"), {}};
    for (const auto& c : el.children) {
      ItemDecl d{req(c, "name"), *parse_item_kind(req(c, "kind")), std::nullopt};
      if (const auto* cls = c.attribute("class")) {
        if (d.kind == ItemKind::property) fail(c, path + "/item/@class", "property items carry no class");
        d.cls = parse_attribute_class(*cls);
      } else if (d.kind == ItemKind::attribute) {
        fail(c, path + "/item/@class", "attribute items need a class");
      }
      t.items.push_back(std::move(d));
    }
    m_.holon_types.push_back(std::move(t));
  }

  void read_holon(const Element& el, const std::string& path) {
    Holon h;
    h.id = req(el, "id");
    h.type = req(el, "type");
    h.kind = *parse_holon_kind(req(el, "kind"));
    h.retired = req(el, "retired") == "true";
    bool have_physical = false;
    for (const auto& c : el.children) {
      const std::string cp = path + "/" + c.name;
      if (c.name == "property") {
        h.properties.push_back(Property{req(c, "name"), Scalar::parse(req(c, "value"))});
      } else if (c.name == "state") {
        HolonState s;
        s.id = req(c, "id");
        s.at = timestamp(c, "at", cp);
        s.produced_by = opt(c, "produced-by");
        for (const auto& a : c.children) {
          s.attributes.push_back(Attribute{req(a, "name"), *parse_attribute_class(req(a, "class")),
                                           Scalar::parse(req(a, "value")), opt(a, "unit")});
        }
        h.states.push_back(std::move(s));
      } else if (c.name == "physical") {
        if (have_physical) fail(c, cp, "holon has more than one physical part");
        have_physical = true;
        h.physical.ledger_entry = req(c, "ledger");
        auto checksum = parse_digest_hex(req(c, "checksum"));
        if (!checksum) fail(c, cp + "/@checksum", "malformed checksum '" + req(c, "checksum") + "'");
        h.physical.checksum = *checksum;
        auto descriptor = hex_decode(req(c, "descriptor"));
        if (!descriptor) fail(c, cp + "/@descriptor", "descriptor is not lowercase hex");
        if (const LedgerEntry* existing = m_.ledger.find(h.physical.ledger_entry)) {
          if (existing->descriptor != *descriptor) fail(c, cp + "/@ledger", "conflicting descriptors for one ledger entry");
        } else {
          m_.ledger.create(h.physical.ledger_entry, std::move(*descriptor), "load " + h.id);
        }
      } else if (c.name == "constituent") {
        h.constituents.push_back(Constituent{req(c, "ref"), req(c, "instance")});
      }
    }
    if (!have_physical) fail(el, path + "/physical", "holon '" + h.id + "' has no physical part");
    m_.holons.push_back(std::move(h));
  }

  void read_process(const Element& el) {
    Process p;
    p.id = req(el, "id");
    p.name = req(el, "name");
    p.level = *parse_enterprise_level(req(el, "level"));
    for (const auto& c : el.children) {
      if (c.name == "consumes") p.consumes.insert(item_ref(c));
      else if (c.name == "produces") p.produces.insert(item_ref(c));
      else if (c.name == "requires") p.required_capabilities.insert(req(c, "capability"));
      else if (c.name == "lcim") {
        for (const auto& l : c.children) {
          if (l.name == "binding") p.lcim.reference_bindings[item_ref(l)] = req(l, "term");
          else if (l.name == "behavior") p.lcim.behavior_model = req(l, "ref");
          else if (l.name == "link") p.lcim.conceptual_links.insert(ConceptualLink{item_ref(l, "a-"), item_ref(l, "b-")});
        }
      }
    }
    m_.processes.push_back(std::move(p));
  }

  void read_flow(const Element& el) {
    Flow f;
    f.id = req(el, "id");
    f.from = req(el, "from");
    f.to = req(el, "to");
    f.kind = *parse_flow_kind(req(el, "kind"));
    f.carries = opt(el, "carries");
    for (const auto& c : el.children) f.declared_items.insert(item_ref(c));
    m_.flows.push_back(std::move(f));
  }

  void read_instance(const Element& el, const std::string& path) {
    ProcessInstance i;
    i.id = req(el, "id");
    i.process = req(el, "process");
    const auto occ = integer(el, "occurrence", path);
    if (occ < 1 || occ > std::numeric_limits<int>::max()) fail(el, path + "/@occurrence", "occurrence must be positive");
    i.occurrence = static_cast<int>(occ);
    i.start = timestamp(el, "start", path);
    i.end = timestamp(el, "end", path);
    i.elapsed = Duration{integer(el, "elapsed", path)};
    for (const auto& c : el.children) {
      if (c.name == "input") i.inputs.push_back(HolonStateRef{req(c, "holon"), req(c, "state")});
      else if (c.name == "output") i.outputs.push_back(HolonStateRef{req(c, "holon"), req(c, "state")});
      else if (c.name == "used") i.used.insert(req(c, "resource"));
    }
    m_.instances.push_back(std::move(i));
  }

  void read_scenario(const Element& el, const std::string& path) {
    Scenario s;
    s.id = req(el, "id");
    s.clock_start = timestamp(el, "clock-start", path);
    s.clock_step = Duration{integer(el, "clock-step", path)};
    if (s.clock_step.ms < 0) fail(el, path + "/@clock-step", "clock step must not be negative");
    for (const auto& r : el.children) {
      RunDirective run;
      run.process = req(r, "process");
      if (const auto* f = r.attribute("fault")) run.fault = parse_fault_point(*f);
      for (const auto& c : r.children) {
        if (c.name == "input") run.inputs.push_back(req(c, "holon"));
        else if (c.name == "use") run.resources.push_back(req(c, "resource"));
      }
      s.runs.push_back(std::move(run));
    }
    m_.scenarios.push_back(std::move(s));
  }

  SystemModel m_;
};

}  // namespace

const Schema& holonic_schema() {
  static const Schema schema = Schema::from_text(builtin_resource("schemas/holonic.schema.xml"));
  return schema;
}

xml::Element to_document(const SystemModel& input) {
  const SystemModel m = canonicalize(input);
  Element root("holonic-model");
  root.set("version", "1");
  auto& sites = root.add(Element("sites"));
  for (const auto& s : m.sites) {
    auto& e = sites.add(Element("site"));
    e.set("id", s.id).set("name", s.name);
    if (s.geo) e.set("geo", *s.geo);
  }
  auto& actors = root.add(Element("actors"));
  for (const auto& a : m.actors) {
    actors.add(Element("actor")).set("id", a.id).set("name", a.name).set("internal", a.internal ? "true" : "false");
  }
  auto& resources = root.add(Element("resources"));
  for (const auto& r : m.resources) {
    auto& e = resources.add(Element("resource"));
    e.set("id", r.id).set("kind", std::string(to_string(r.kind)));
    for (const auto& c : r.provides) e.add(Element("provides")).set("capability", c);
  }
  auto& types = root.add(Element("holon-types"));
  for (const auto& t : m.holon_types) {
    auto& e = types.add(Element("holon-type"));
    e.set("id", t.id);
    for (const auto& d : t.items) {
      auto& ie = e.add(Element("item"));
      ie.set("name", d.name).set("kind", std::string(to_string(d.kind)));
      if (d.cls) ie.set("class", std::string(to_string(*d.cls)));
    }
  }
  auto& registry = root.add(Element("reference-registry"));
  for (const auto& t : m.reference_registry) registry.add(Element("term")).set("id", t);
  auto& holons = root.add(Element("holons"));
  for (const auto& h : m.holons) holons.add(write_holon(h, m.ledger));
  auto& processes = root.add(Element("processes"));
  for (const auto& p : m.processes) processes.add(write_process(p));
  auto& flows = root.add(Element("flows"));
  for (const auto& f : m.flows) {
    auto& e = flows.add(Element("flow"));
    e.set("id", f.id).set("from", f.from).set("to", f.to).set("kind", std::string(to_string(f.kind)));
    if (f.carries) e.set("carries", *f.carries);
    for (const auto& r : f.declared_items) e.add(item_ref_element("declared", r));
  }
  auto& instances = root.add(Element("instances"));
  for (const auto& i : m.instances) {
    auto& e = instances.add(Element("instance"));
    e.set("id", i.id).set("process", i.process).set("occurrence", std::to_string(i.occurrence));
    e.set("start", format_iso8601(i.start)).set("end", format_iso8601(i.end));
    e.set("elapsed", std::to_string(i.elapsed.ms));
    for (const auto& r : i.inputs) e.add(Element("input")).set("holon", r.holon).set("state", r.state);
    for (const auto& r : i.outputs) e.add(Element("output")).set("holon", r.holon).set("state", r.state);
    for (const auto& r : i.used) e.add(Element("used")).set("resource", r);
  }
  if (!m.scenarios.empty()) {
    auto& scenarios = root.add(Element("scenarios"));
    for (const auto& s : m.scenarios) {
      auto& e = scenarios.add(Element("scenario"));
      e.set("id", s.id).set("clock-start", format_iso8601(s.clock_start));
      e.set("clock-step", std::to_string(s.clock_step.ms));
      for (const auto& run : s.runs) {
        auto& re = e.add(Element("run"));
        re.set("process", run.process);
        if (run.fault) re.set("fault", std::string(to_string(*run.fault)));
        for (const auto& h : run.inputs) re.add(Element("input")).set("holon", h);
        for (const auto& r : run.resources) re.add(Element("use")).set("resource", r);
      }
    }
  }
  return root;
}

SystemModel model_from_document(const xml::Element& doc) {
  SystemModel m = Reader{}.read(doc);
  for (const auto& v : validate(m)) {
    if (v.code == "E-M-001") throw Error(ErrorCode::ReferenceError, "dangling reference: " + v.message, v.subject);
  }
  return m;
}

SystemModel parse_model(std::string_view document_bytes) { return model_from_document(xml::parse(document_bytes)); }

std::string serialize_model(const SystemModel& model) {
  const auto violations = validate(model);
  if (!violations.empty()) {
    std::string msg = "model has " + std::to_string(violations.size()) + " violation(s):";
    for (const auto& v : violations) msg += "\n  " + v.code + " " + v.subject + ": " + v.message;
    throw Error(ErrorCode::InvalidModel, msg);
  }
  return xml::write(to_document(model));
}

std::string snapshot_bytes(const SystemModel& model) {
  std::string out = xml::write(to_document(model));
  out += "# ledger history\n";
  for (const auto& e : model.ledger.history()) {
    out += e.entry + " " + digest_hex(e.before) + " " + digest_hex(e.after) + " " + e.cause + "\n";
  }
  return out;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot read '" + path.string() + "'", path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, std::string_view bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::Io, "cannot write '" + path.string() + "'", path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::Io, "failed writing '" + path.string() + "'", path.string());
}

SystemModel load_model(const std::filesystem::path& path) { return parse_model(read_file(path)); }

}  // namespace holx
