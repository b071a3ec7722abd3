#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "holx/error.hpp"
#include "holx/xml.hpp"

namespace holx {

enum class MetaLevel { M0, M1, M2, M3 };

std::string_view to_string(MetaLevel level);
std::optional<MetaLevel> parse_meta_level(std::string_view s);

struct MetaModelId {
  std::string id;
  MetaLevel level = MetaLevel::M2;

  auto operator<=>(const MetaModelId&) const = default;
};

struct AttributeDecl {
  std::string name;
  bool required = false;
  std::optional<std::string> fixed;
  std::vector<std::string> values;  // empty: any text
};

struct ElementDecl {
  std::string name;
  std::vector<AttributeDecl> attributes;
  std::vector<ElementDecl> children;
  bool required = false;   // must appear at least once under its parent
  bool directive = false;  // section holding run directives, not model elements
  std::optional<std::string> key;  // identifying attribute of a model element

  const ElementDecl* child(std::string_view n) const;
  const AttributeDecl* attribute(std::string_view n) const;
};

// Element grammar of one meta-model. The root declaration's children are
// the sections; the children of sections are the meta-model's elements.
//
// Grammar files look like:
//   <schema id="..." level="M2" root="root-name">
//     <attribute name="version" required="true" fixed="1"/>
//     <element name="section" required="true">
//       <element name="item" key="id">
//         <attribute name="id" required="true"/>
//         <attribute name="kind" values="a|b"/>
//         <element name="child">...</element>
//       </element>
//     </element>
//   </schema>
class Schema {
 public:
  static Schema from_document(const xml::Element& doc);
  static Schema from_text(std::string_view text);

  const MetaModelId& meta_model() const { return id_; }
  const ElementDecl& root() const { return root_; }

  // Section declaration that may contain top-level element `element`.
  const ElementDecl* section_for(std::string_view element) const;

  // Throws Error(code) naming the offending path, e.g.
  // "/holonic-model/holons/holonn" or ".../holon/@colour".
  void check(const xml::Element& doc, ErrorCode code = ErrorCode::SchemaViolation) const;

 private:
  MetaModelId id_;
  ElementDecl root_;
};

}  // namespace holx
