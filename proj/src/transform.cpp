#include "holx/transform.hpp"

#include <algorithm>
#include <set>

#include "holx/model_io.hpp"
#include "holx/resources.hpp"
#include "holx/validate.hpp"

namespace holx {

namespace {

[[noreturn]] void bad_mapping(const std::string& msg, const std::string& subject = {}) {
  throw Error(ErrorCode::InvalidMapping, "invalid mapping: " + msg, subject);
}

const std::string& required_attr(const xml::Element& el, std::string_view name) {
  const auto* v = el.attribute(name);
  if (!v || v->empty()) bad_mapping("<" + el.name + "> needs attribute '" + std::string(name) + "'");
  return *v;
}

MetaModelId read_meta_model(const xml::Element& doc, std::string_view attr) {
  MetaModelId id;
  id.id = required_attr(doc, attr);
  if (const auto* level = doc.attribute(std::string(attr) + "-level")) {
    auto l = parse_meta_level(*level);
    if (!l) bad_mapping("unknown meta level '" + *level + "'");
    id.level = *l;
  }
  return id;
}

Guard read_guard(const xml::Element& el) {
  Guard g;
  g.attr = required_attr(el, "attr");
  int ops = 0;
  if (const auto* v = el.attribute("equals")) g.op = Guard::Op::equals, g.value = *v, ++ops;
  if (const auto* v = el.attribute("not-equals")) g.op = Guard::Op::not_equals, g.value = *v, ++ops;
  if (const auto* v = el.attribute("present")) {
    if (*v != "true") bad_mapping("guard present must be \"true\"");
    g.op = Guard::Op::present, ++ops;
  }
  if (const auto* v = el.attribute("absent")) {
    if (*v != "true") bad_mapping("guard absent must be \"true\"");
    g.op = Guard::Op::absent, ++ops;
  }
  if (ops != 1) bad_mapping("guard on '" + g.attr + "' needs exactly one predicate");
  return g;
}

Rule read_rule(const xml::Element& el);

EmitSpec read_emit(const xml::Element& el) {
  EmitSpec e;
  e.element = required_attr(el, "element");
  for (const auto& c : el.children) {
    if (c.name == "attr") {
      AttrExpr a;
      a.name = required_attr(c, "name");
      if (const auto* f = c.attribute("from")) a.from = *f;
      if (const auto* v = c.attribute("value")) a.value = *v;
      if (a.from.has_value() == a.value.has_value()) bad_mapping("attr '" + a.name + "' needs exactly one of from/value");
      e.attributes.push_back(std::move(a));
    } else if (c.name == "emit") {
      e.nested.push_back(read_emit(c));
    } else if (c.name == "rule") {
      e.rules.push_back(read_rule(c));
    } else {
      bad_mapping("unexpected <" + c.name + "> in <emit>");
    }
  }
  return e;
}

Rule read_rule(const xml::Element& el) {
  Rule r;
  r.id = required_attr(el, "id");
  bool selected = false;
  for (const auto& c : el.children) {
    if (c.name == "select") {
      if (selected) bad_mapping("rule '" + r.id + "' has two selectors", r.id);
      r.kind = required_attr(c, "kind");
      selected = true;
    } else if (c.name == "guard") {
      r.guards.push_back(read_guard(c));
    } else if (c.name == "emit") {
      if (r.emit) bad_mapping("rule '" + r.id + "' has two constructors", r.id);
      r.emit = read_emit(c);
    } else if (c.name == "rule") {
      r.rules.push_back(read_rule(c));
    } else {
      bad_mapping("unexpected <" + c.name + "> in rule '" + r.id + "'", r.id);
    }
  }
  if (!selected) bad_mapping("rule '" + r.id + "' has no selector", r.id);
  if (r.emit && !r.rules.empty()) bad_mapping("rule '" + r.id + "' mixes <emit> with pass-through rules", r.id);
  return r;
}

// Compile-time resolution of rules against both grammars.
struct Resolver {
  const Schema& source;
  const Schema& target;
  std::set<std::string> ids;

  void rule(const Rule& r, const ElementDecl& src_parent, const ElementDecl* tgt_parent) {
    if (!ids.insert(r.id).second) throw Error(ErrorCode::DuplicateRuleId, "duplicate rule id '" + r.id + "'", r.id);
    const ElementDecl* src = src_parent.child(r.kind);
    if (!src) {
      throw Error(ErrorCode::UnknownSourceElement,
                  "rule '" + r.id + "' selects unknown source element '" + r.kind + "'", r.kind);
    }
    for (const auto& g : r.guards) source_attr(r.id, *src, g.attr);
    if (r.emit) {
      emit(r.id, *r.emit, *src, tgt_parent);
    } else {
      if (!tgt_parent) bad_mapping("top-level rule '" + r.id + "' has no constructor", r.id);
      for (const auto& c : r.rules) rule(c, *src, tgt_parent);
    }
  }

  void emit(const std::string& rule_id, const EmitSpec& e, const ElementDecl& src, const ElementDecl* tgt_parent) {
    const ElementDecl* tgt = nullptr;
    if (tgt_parent) {
      tgt = tgt_parent->child(e.element);
    } else if (const auto* section = target.section_for(e.element)) {
      tgt = section->child(e.element);
    }
    if (!tgt) {
      throw Error(ErrorCode::UnknownTargetElement,
                  "rule '" + rule_id + "' constructs unknown target element '" + e.element + "'", e.element);
    }
    std::set<std::string> names;
    for (const auto& a : e.attributes) {
      if (!tgt->attribute(a.name)) {
        throw Error(ErrorCode::UnknownTargetElement,
                    "rule '" + rule_id + "' sets unknown attribute '" + a.name + "' on '" + e.element + "'",
                    e.element + "/@" + a.name);
      }
      if (!names.insert(a.name).second) bad_mapping("rule '" + rule_id + "' sets '" + a.name + "' twice", rule_id);
      if (a.from) source_attr(rule_id, src, *a.from);
    }
    for (const auto& n : e.nested) emit(rule_id, n, src, tgt);
    for (const auto& c : e.rules) rule(c, src, tgt);
  }

  static void source_attr(const std::string& rule_id, const ElementDecl& src, const std::string& name) {
    if (!src.attribute(name)) {
      throw Error(ErrorCode::UnknownSourceElement,
                  "rule '" + rule_id + "' reads unknown attribute '" + name + "' of '" + src.name + "'",
                  src.name + "/@" + name);
    }
  }
};

// Pseudo-declaration whose children are all top-level source elements.
ElementDecl top_level_domain(const Schema& schema) {
  ElementDecl all;
  all.name = schema.root().name;
  for (const auto& section : schema.root().children) {
    for (const auto& el : section.children) {
      if (!all.child(el.name)) all.children.push_back(el);
    }
  }
  return all;
}

void construct_into(const EmitSpec& e, const xml::Element& src, xml::Element& parent);

void run_rules(const std::vector<Rule>& rules, const xml::Element& src, xml::Element& out) {
  for (const auto& child : src.children) {
    for (const auto& r : rules) {
      if (!r.selects(child)) continue;
      if (r.emit) {
        construct_into(*r.emit, child, out);
      } else {
        run_rules(r.rules, child, out);
      }
      break;
    }
  }
}

xml::Element construct(const EmitSpec& e, const xml::Element& src) {
  xml::Element el(e.element);
  for (const auto& a : e.attributes) {
    if (a.value) {
      el.set(a.name, *a.value);
    } else if (const auto* v = src.attribute(*a.from)) {
      el.set(a.name, *v);
    }
  }
  for (const auto& n : e.nested) construct_into(n, src, el);
  run_rules(e.rules, src, el);
  return el;
}

void construct_into(const EmitSpec& e, const xml::Element& src, xml::Element& parent) {
  parent.add(construct(e, src));
}

std::string element_key(const xml::Element& el, const ElementDecl* decl) {
  if (decl && decl->key) {
    if (const auto* v = el.attribute(*decl->key)) return *v;
  }
  return {};
}

void collect_identity(const ElementDecl& decl, const std::string& prefix, std::vector<Rule>& out) {
  for (const auto& c : decl.children) {
    Rule r;
    r.id = prefix.empty() ? c.name : prefix + "/" + c.name;
    r.kind = c.name;
    EmitSpec e;
    e.element = c.name;
    for (const auto& a : c.attributes) e.attributes.push_back(AttrExpr{a.name, a.name, std::nullopt});
    collect_identity(c, r.id, e.rules);
    r.emit = std::move(e);
    out.push_back(std::move(r));
  }
}

}  // namespace

bool Guard::accepts(const xml::Element& el) const {
  const auto* v = el.attribute(attr);
  switch (op) {
    case Op::equals: return v && *v == value;
    case Op::not_equals: return !v || *v != value;
    case Op::present: return v != nullptr;
    case Op::absent: return v == nullptr;
  }
  return false;
}

bool Rule::selects(const xml::Element& el) const {
  return el.name == kind && std::all_of(guards.begin(), guards.end(), [&](const Guard& g) { return g.accepts(el); });
}

MappingSpec MappingSpec::from_document(const xml::Element& doc) {
  if (doc.name != "mapping-spec") bad_mapping("root element must be <mapping-spec>");
  MappingSpec s;
  s.id = required_attr(doc, "id");
  s.source = read_meta_model(doc, "source");
  s.target = read_meta_model(doc, "target");
  for (const auto& c : doc.children) {
    if (c.name == "rule") {
      s.rules.push_back(read_rule(c));
    } else if (c.name == "exclude") {
      s.exclusions.push_back(Exclusion{required_attr(c, "kind"), required_attr(c, "reason")});
    } else {
      bad_mapping("unexpected <" + c.name + "> in <mapping-spec>");
    }
  }
  return s;
}

MappingSpec MappingSpec::from_text(std::string_view text) {
  xml::Element doc;
  try {
    doc = xml::parse(text);
  } catch (const Error& e) {
    throw Error(ErrorCode::InvalidMapping, std::string("invalid mapping: ") + e.what(), e.subject());
  }
  return from_document(doc);
}

const std::vector<const Rule*>& Mapping::rules_for(std::string_view kind) const {
  static const std::vector<const Rule*> none;
  auto it = index_.find(kind);
  return it == index_.end() ? none : it->second;
}

const Exclusion* Mapping::exclusion_for(std::string_view kind) const {
  for (const auto& e : spec_.exclusions) {
    if (e.kind == kind) return &e;
  }
  return nullptr;
}

Mapping compile_mapping(MappingSpec spec, std::shared_ptr<const Schema> source, std::shared_ptr<const Schema> target) {
  if (!source || !target) bad_mapping("missing schema");
  if (spec.source != source->meta_model() || spec.target != target->meta_model()) {
    bad_mapping("spec '" + spec.id + "' does not connect " + source->meta_model().id + " and " +
                target->meta_model().id);
  }
  if (spec.source.level != MetaLevel::M2 || spec.target.level != MetaLevel::M2) {
    bad_mapping("mappings connect M2 meta-models", spec.id);
  }
  const ElementDecl domain = top_level_domain(*source);
  Resolver resolver{*source, *target, {}};
  for (const auto& r : spec.rules) resolver.rule(r, domain, nullptr);
  std::set<std::string> excluded;
  for (const auto& e : spec.exclusions) {
    if (!domain.child(e.kind)) {
      throw Error(ErrorCode::UnknownSourceElement, "exclusion names unknown source element '" + e.kind + "'", e.kind);
    }
    if (!excluded.insert(e.kind).second) bad_mapping("element '" + e.kind + "' excluded twice", e.kind);
  }

  Mapping m;
  m.spec_ = std::move(spec);
  m.source_ = std::move(source);
  m.target_ = std::move(target);
  for (const auto& r : m.spec_.rules) {
    auto& list = m.index_[r.kind];
    list.push_back(&r);
  }
  return m;
}

TransformResult apply(const xml::Element& source_document, const Mapping& mapping) {
  const Schema& src = mapping.source();
  const Schema& tgt = mapping.target();
  if (source_document.name != src.root().name) {
    throw Error(ErrorCode::SourceMismatch,
                "document <" + source_document.name + "> is not a " + src.meta_model().id + " model",
                source_document.name);
  }
  src.check(source_document);

  TransformResult result;
  xml::Element& out = result.document;
  out.name = tgt.root().name;
  for (const auto& a : tgt.root().attributes) {
    if (a.fixed) out.set(a.name, *a.fixed);
  }
  std::vector<xml::Element> sections;
  for (const auto& decl : tgt.root().children) sections.emplace_back(decl.name);
  auto section_index = [&](std::string_view element) {
    const ElementDecl* s = tgt.section_for(element);
    return static_cast<std::size_t>(s - tgt.root().children.data());
  };

  for (const auto& section : source_document.children) {
    const ElementDecl* section_decl = src.root().child(section.name);
    if (section_decl->directive) continue;
    for (const auto& el : section.children) {
      ++result.report.domain_size;
      const Rule* hit = nullptr;
      for (const Rule* r : mapping.rules_for(el.name)) {
        if (r->selects(el)) {
          hit = r;
          break;
        }
      }
      const std::string key = element_key(el, section_decl->child(el.name));
      if (!hit) {
        const Exclusion* ex = mapping.exclusion_for(el.name);
        result.report.unmapped.push_back(
            UnmappedEntry{el.name, key, ex ? ex->reason : "no rule selects this element"});
        continue;
      }
      ++result.report.matched;
      sections[section_index(hit->emit->element)].add(construct(*hit->emit, el));
    }
  }

  for (std::size_t i = 0; i < sections.size(); ++i) {
    if (tgt.root().children[i].required || !sections[i].children.empty()) out.add(std::move(sections[i]));
  }
  tgt.check(out, ErrorCode::SchemaViolationInOutput);
  return result;
}

TransformResult apply(const SystemModel& model, const Mapping& mapping) {
  if (mapping.source().meta_model() != holonic_schema().meta_model()) {
    throw Error(ErrorCode::SourceMismatch,
                "mapping '" + mapping.spec().id + "' does not read holonic models", mapping.source().meta_model().id);
  }
  const auto violations = validate(model);
  if (!violations.empty()) {
    throw Error(ErrorCode::InvalidModel, "model is invalid: " + violations.front().code + " " +
                                             violations.front().subject + ": " + violations.front().message,
                violations.front().subject);
  }
  return apply(to_document(model), mapping);
}

MappingSpec identity_mapping_spec(const Schema& schema) {
  MappingSpec s;
  s.id = schema.meta_model().id + "-identity";
  s.source = schema.meta_model();
  s.target = schema.meta_model();
  std::set<std::string> seen;
  for (const auto& section : schema.root().children) {
    for (const auto& el : section.children) {
      if (!seen.insert(el.name).second) continue;
      ElementDecl holder;
      holder.children.push_back(el);
      collect_identity(holder, "", s.rules);
    }
  }
  return s;
}

void MetaModelRegistry::add_schema(Schema schema) {
  const std::string id = schema.meta_model().id;
  schemas_[id] = std::make_shared<const Schema>(std::move(schema));
}

bool MetaModelRegistry::has_schema(std::string_view id) const { return schemas_.find(id) != schemas_.end(); }

std::shared_ptr<const Schema> MetaModelRegistry::schema(std::string_view id) const {
  auto it = schemas_.find(id);
  if (it == schemas_.end()) {
    throw Error(ErrorCode::UnknownMetaModel, "unknown meta-model '" + std::string(id) + "'", std::string(id));
  }
  return it->second;
}

const Mapping& MetaModelRegistry::add_mapping(MappingSpec spec) {
  auto source = schema(spec.source.id);
  auto target = schema(spec.target.id);
  auto key = std::make_pair(spec.source, spec.target);
  auto compiled = std::make_shared<const Mapping>(compile_mapping(std::move(spec), source, target));
  auto& slot = mappings_[key];
  slot = std::move(compiled);
  return *slot;
}

const Mapping* MetaModelRegistry::find_mapping(const MetaModelId& source, const MetaModelId& target) const {
  auto it = mappings_.find(std::make_pair(source, target));
  return it == mappings_.end() ? nullptr : it->second.get();
}

const Mapping& MetaModelRegistry::mapping(std::string_view source, std::string_view target) const {
  const Mapping* m = find_mapping(schema(source)->meta_model(), schema(target)->meta_model());
  if (!m) {
    throw Error(ErrorCode::UnknownMetaModel,
                "no mapping from '" + std::string(source) + "' to '" + std::string(target) + "'",
                std::string(source) + "->" + std::string(target));
  }
  return *m;
}

std::vector<MetaModelId> MetaModelRegistry::meta_models() const {
  std::vector<MetaModelId> out;
  for (const auto& [id, s] : schemas_) out.push_back(s->meta_model());
  return out;
}

std::vector<std::pair<MetaModelId, MetaModelId>> MetaModelRegistry::mappings() const {
  std::vector<std::pair<MetaModelId, MetaModelId>> out;
  for (const auto& [key, m] : mappings_) out.push_back(key);
  return out;
}

const MetaModelRegistry& builtin_registry() {
  static const MetaModelRegistry registry = [] {
    MetaModelRegistry r;
    r.add_schema(holonic_schema());
    r.add_schema(Schema::from_text(builtin_resource("schemas/b2mml-subset.schema.xml")));
    r.add_schema(Schema::from_text(builtin_resource("schemas/ueml-subset.schema.xml")));
    for (auto name : {"mappings/holonic-to-b2mml.mapping.xml", "mappings/b2mml-to-holonic.mapping.xml",
                      "mappings/holonic-to-ueml.mapping.xml"}) {
      r.add_mapping(MappingSpec::from_text(builtin_resource(name)));
    }
    return r;
  }();
  return registry;
}

bool metamodels_interoperable(const MetaModelRegistry& registry, const MetaModelId& a, const MetaModelId& b) {
  for (const auto* m : {&a, &b}) {
    if (!registry.has_schema(m->id) || registry.schema(m->id)->meta_model() != *m) {
      throw Error(ErrorCode::UnknownMetaModel, "unknown meta-model '" + m->id + "'", m->id);
    }
  }
  return registry.find_mapping(a, b) && registry.find_mapping(b, a);
}

TransformResult to_b2mml_subset(const SystemModel& model) {
  return apply(model, builtin_registry().mapping("holonic", "b2mml-subset"));
}

SystemModel from_b2mml_subset(const xml::Element& document) {
  const Mapping& reverse = builtin_registry().mapping("b2mml-subset", "holonic");
  if (document.name != reverse.source().root().name) {
    throw Error(ErrorCode::SchemaViolation, "root element <" + document.name + "> is not <" +
                                                reverse.source().root().name + ">",
                "/" + document.name);
  }
  return model_from_document(apply(document, reverse).document);
}

TransformResult to_ueml_subset(const SystemModel& model) {
  return apply(model, builtin_registry().mapping("holonic", "ueml-subset"));
}

}  // namespace holx
