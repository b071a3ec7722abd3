#include "holx/schema.hpp"

#include <algorithm>
#include <set>

namespace holx {

namespace {

[[noreturn]] void bad_schema(const std::string& msg) { throw Error(ErrorCode::InvalidMapping, "invalid schema: " + msg); }

std::vector<std::string> split_values(std::string_view s) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    const auto bar = s.find('|', start);
    const auto end = bar == std::string_view::npos ? s.size() : bar;
    out.emplace_back(s.substr(start, end - start));
    if (bar == std::string_view::npos) break;
    start = bar + 1;
  }
  return out;
}

AttributeDecl read_attribute(const xml::Element& el) {
  AttributeDecl a;
  const auto* name = el.attribute("name");
  if (!name || name->empty()) bad_schema("attribute declaration without name");
  a.name = *name;
  if (const auto* r = el.attribute("required")) a.required = *r == "true";
  if (const auto* f = el.attribute("fixed")) a.fixed = *f;
  if (const auto* v = el.attribute("values")) a.values = split_values(*v);
  return a;
}

void read_body(const xml::Element& el, ElementDecl& decl) {
  std::set<std::string> names;
  for (const auto& c : el.children) {
    if (c.name == "attribute") {
      auto a = read_attribute(c);
      if (!names.insert("@" + a.name).second) bad_schema("attribute '" + a.name + "' declared twice in " + decl.name);
      decl.attributes.push_back(std::move(a));
    } else if (c.name == "element") {
      ElementDecl child;
      const auto* name = c.attribute("name");
      if (!name || name->empty()) bad_schema("element declaration without name");
      child.name = *name;
      if (const auto* r = c.attribute("required")) child.required = *r == "true";
      if (const auto* d = c.attribute("directive")) child.directive = *d == "true";
      if (const auto* k = c.attribute("key")) child.key = *k;
      read_body(c, child);
      if (!names.insert(child.name).second) bad_schema("element '" + child.name + "' declared twice in " + decl.name);
      decl.children.push_back(std::move(child));
    } else {
      bad_schema("unexpected <" + c.name + "> in declaration of " + decl.name);
    }
  }
}

std::string position(const xml::Element& el) {
  return el.line > 0 ? " (line " + std::to_string(el.line) + ", column " + std::to_string(el.column) + ")" : "";
}

void check_element(const xml::Element& el, const ElementDecl& decl, const std::string& path, ErrorCode code) {
  for (const auto& [k, v] : el.attributes) {
    const AttributeDecl* a = decl.attribute(k);
    if (!a) throw Error(code, "unknown attribute at " + path + "/@" + k + position(el), path + "/@" + k);
    if (a->fixed && v != *a->fixed) {
      throw Error(code, "attribute " + path + "/@" + k + " must be '" + *a->fixed + "'" + position(el), path + "/@" + k);
    }
    if (!a->values.empty() && std::find(a->values.begin(), a->values.end(), v) == a->values.end()) {
      throw Error(code, "attribute " + path + "/@" + k + " has invalid value '" + v + "'" + position(el),
                  path + "/@" + k);
    }
  }
  for (const auto& a : decl.attributes) {
    if (a.required && !el.attribute(a.name)) {
      throw Error(code, "missing attribute " + path + "/@" + a.name + position(el), path + "/@" + a.name);
    }
  }
  if (!el.text.empty()) throw Error(code, "unexpected text content in " + path + position(el), path);
  for (const auto& c : el.children) {
    const std::string child_path = path + "/" + c.name;
    const ElementDecl* cd = decl.child(c.name);
    if (!cd) throw Error(code, "unknown element " + child_path + position(c), child_path);
    check_element(c, *cd, child_path, code);
  }
  for (const auto& cd : decl.children) {
    if (!cd.required) continue;
    const bool present =
        std::any_of(el.children.begin(), el.children.end(), [&](const xml::Element& c) { return c.name == cd.name; });
    if (!present) throw Error(code, "missing element " + path + "/" + cd.name + position(el), path + "/" + cd.name);
  }
}

}  // namespace

std::string_view to_string(MetaLevel level) {
  switch (level) {
    case MetaLevel::M0: return "M0";
    case MetaLevel::M1: return "M1";
    case MetaLevel::M2: return "M2";
    case MetaLevel::M3: return "M3";
  }
  return "?";
}

std::optional<MetaLevel> parse_meta_level(std::string_view s) {
  for (auto l : {MetaLevel::M0, MetaLevel::M1, MetaLevel::M2, MetaLevel::M3}) {
    if (to_string(l) == s) return l;
  }
  return std::nullopt;
}

const ElementDecl* ElementDecl::child(std::string_view n) const {
  auto it = std::find_if(children.begin(), children.end(), [&](const ElementDecl& c) { return c.name == n; });
  return it == children.end() ? nullptr : &*it;
}

const AttributeDecl* ElementDecl::attribute(std::string_view n) const {
  auto it = std::find_if(attributes.begin(), attributes.end(), [&](const AttributeDecl& a) { return a.name == n; });
  return it == attributes.end() ? nullptr : &*it;
}

Schema Schema::from_document(const xml::Element& doc) {
  if (doc.name != "schema") bad_schema("root element must be <schema>");
  Schema s;
  const auto* id = doc.attribute("id");
  const auto* root = doc.attribute("root");
  if (!id || !root) bad_schema("<schema> needs id and root");
  s.id_.id = *id;
  if (const auto* level = doc.attribute("level")) {
    auto l = parse_meta_level(*level);
    if (!l) bad_schema("unknown meta level '" + *level + "'");
    s.id_.level = *l;
  }
  s.root_.name = *root;
  read_body(doc, s.root_);
  return s;
}

Schema Schema::from_text(std::string_view text) { return from_document(xml::parse(text)); }

const ElementDecl* Schema::section_for(std::string_view element) const {
  for (const auto& section : root_.children) {
    if (section.child(element)) return &section;
  }
  return nullptr;
}

void Schema::check(const xml::Element& doc, ErrorCode code) const {
  const std::string path = "/" + doc.name;
  if (doc.name != root_.name) {
    throw Error(code, "root element <" + doc.name + "> is not <" + root_.name + ">" + position(doc), path);
  }
  check_element(doc, root_, path, code);
}

}  // namespace holx
