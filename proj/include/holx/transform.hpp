#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "holx/model.hpp"
#include "holx/schema.hpp"
#include "holx/xml.hpp"

namespace holx {

// Mapping specification documents:
//
//   <mapping-spec id="a-to-b" source="a" target="b">
//     <rule id="r1">
//       <select kind="source-element"/>
//       <guard attr="kind" equals="human"/>      (also not-equals, present, absent)
//       <emit element="target-element">
//         <attr name="x" from="source-attr"/>    (omitted when the source lacks it)
//         <attr name="y" value="literal"/>
//         <emit element="static-child">...</emit>
//         <rule id="r1/child">...</rule>          (applied to the selected element's children)
//       </emit>
//     </rule>
//     <rule id="r2"><select kind="wrapper"/><rule id="r2/inner">...</rule></rule>
//     <exclude kind="source-element" reason="..."/>
//   </mapping-spec>
//
// Rules are tried in document order; the first rule whose selector and
// guards accept an element wins. A rule without <emit> is a pass-through:
// its child rules run on the selected element's children and emit into the
// enclosing target element.

struct Guard {
  enum class Op { equals, not_equals, present, absent };
  std::string attr;
  Op op = Op::present;
  std::string value;

  bool accepts(const xml::Element& el) const;
};

struct AttrExpr {
  std::string name;
  std::optional<std::string> from;
  std::optional<std::string> value;
};

struct Rule;

struct EmitSpec {
  std::string element;
  std::vector<AttrExpr> attributes;
  std::vector<EmitSpec> nested;
  std::vector<Rule> rules;
};

struct Rule {
  std::string id;
  std::string kind;
  std::vector<Guard> guards;
  std::optional<EmitSpec> emit;
  std::vector<Rule> rules;  // pass-through children when emit is absent

  bool selects(const xml::Element& el) const;
};

struct Exclusion {
  std::string kind;
  std::string reason;
};

struct MappingSpec {
  std::string id;
  MetaModelId source;
  MetaModelId target;
  std::vector<Rule> rules;
  std::vector<Exclusion> exclusions;

  // Throws InvalidMapping on malformed documents.
  static MappingSpec from_document(const xml::Element& doc);
  static MappingSpec from_text(std::string_view text);
};

class Mapping {
 public:
  const MappingSpec& spec() const { return spec_; }
  const Schema& source() const { return *source_; }
  const Schema& target() const { return *target_; }

  // Top-level rules applicable to a source element kind, in spec order.
  const std::vector<const Rule*>& rules_for(std::string_view kind) const;
  std::size_t rule_count() const { return spec_.rules.size(); }
  const Exclusion* exclusion_for(std::string_view kind) const;

 private:
  friend Mapping compile_mapping(MappingSpec spec, std::shared_ptr<const Schema> source,
                                 std::shared_ptr<const Schema> target);

  MappingSpec spec_;
  std::shared_ptr<const Schema> source_;
  std::shared_ptr<const Schema> target_;
  std::map<std::string, std::vector<const Rule*>, std::less<>> index_;
};

// Throws UnknownSourceElement, UnknownTargetElement, DuplicateRuleId,
// InvalidMapping.
Mapping compile_mapping(MappingSpec spec, std::shared_ptr<const Schema> source, std::shared_ptr<const Schema> target);

struct UnmappedEntry {
  std::string kind;
  std::string key;
  std::string reason;

  auto operator<=>(const UnmappedEntry&) const = default;
};

struct TransformReport {
  std::size_t domain_size = 0;  // model elements under non-directive sections
  std::size_t matched = 0;
  std::vector<UnmappedEntry> unmapped;
};

struct TransformResult {
  xml::Element document;
  TransformReport report;
};

// Throws SourceMismatch when the document is not an instance of the
// mapping's source meta-model, SchemaViolation when it does not conform,
// SchemaViolationInOutput when the produced document fails the target schema.
TransformResult apply(const xml::Element& source_document, const Mapping& mapping);

// Model entry point. Throws InvalidModel for invalid models and
// SourceMismatch unless the mapping's source is the holonic meta-model.
TransformResult apply(const SystemModel& model, const Mapping& mapping);

// Copies every declared element and attribute unchanged.
MappingSpec identity_mapping_spec(const Schema& schema);

class MetaModelRegistry {
 public:
  void add_schema(Schema schema);
  bool has_schema(std::string_view id) const;
  // Throws UnknownMetaModel.
  std::shared_ptr<const Schema> schema(std::string_view id) const;

  // Compiles against registered schemas and registers the result under
  // (source, target). Throws UnknownMetaModel plus compile errors.
  const Mapping& add_mapping(MappingSpec spec);
  const Mapping* find_mapping(const MetaModelId& source, const MetaModelId& target) const;
  // Throws UnknownMetaModel when no mapping is registered.
  const Mapping& mapping(std::string_view source, std::string_view target) const;

  std::vector<MetaModelId> meta_models() const;
  std::vector<std::pair<MetaModelId, MetaModelId>> mappings() const;

 private:
  std::map<std::string, std::shared_ptr<const Schema>, std::less<>> schemas_;
  std::map<std::pair<MetaModelId, MetaModelId>, std::shared_ptr<const Mapping>> mappings_;
};

// Holonic, B2MML-subset and UEML-subset schemas with the shipped mappings
// holonic<->b2mml-subset and holonic->ueml-subset.
const MetaModelRegistry& builtin_registry();

// True iff mappings a->b and b->a are both registered. Throws
// UnknownMetaModel for unregistered meta-models.
bool metamodels_interoperable(const MetaModelRegistry& registry, const MetaModelId& a, const MetaModelId& b);

TransformResult to_b2mml_subset(const SystemModel& model);
// Throws SchemaViolation for documents outside the subset.
SystemModel from_b2mml_subset(const xml::Element& document);
TransformResult to_ueml_subset(const SystemModel& model);

}  // namespace holx
