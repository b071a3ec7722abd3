#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace holx::xml {

// Generic element tree shared by model files, mapping specs, schemas and
// transformation outputs. Attributes are kept sorted by name.
struct Element {
  std::string name;
  std::map<std::string, std::string> attributes;
  std::vector<Element> children;
  std::string text;
  int line = 0;
  int column = 0;

  explicit Element(std::string n = {}) : name(std::move(n)) {}

  const std::string* attribute(std::string_view key) const;
  Element& set(std::string key, std::string value);
  Element& add(Element child);

  // Structural equality ignores source positions.
  bool operator==(const Element& other) const;
};

// Throws holx::Error(XmlSyntax) with subject "line:column".
Element parse(std::string_view document);

// Canonical rendering: XML declaration, 2-space indentation, attributes in
// name order, empty elements self-closed, LF line endings, trailing LF.
std::string write(const Element& root);

std::string escape(std::string_view text);

}  // namespace holx::xml
