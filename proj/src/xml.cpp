#include "holx/xml.hpp"

#include <expat.h>

#include <memory>

#include "holx/error.hpp"

namespace holx::xml {

const std::string* Element::attribute(std::string_view key) const {
  auto it = attributes.find(std::string(key));
  return it == attributes.end() ? nullptr : &it->second;
}

Element& Element::set(std::string key, std::string value) {
  attributes[std::move(key)] = std::move(value);
  return *this;
}

Element& Element::add(Element child) {
  children.push_back(std::move(child));
  return children.back();
}

bool Element::operator==(const Element& other) const {
  return name == other.name && attributes == other.attributes && children == other.children && text == other.text;
}

namespace {

struct ParseState {
  XML_Parser parser = nullptr;
  std::vector<Element*> stack;
  Element root;
  bool have_root = false;
};

void on_start(void* user, const XML_Char* name, const XML_Char** attrs) {
  auto* st = static_cast<ParseState*>(user);
  Element el(name);
  el.line = static_cast<int>(XML_GetCurrentLineNumber(st->parser));
  el.column = static_cast<int>(XML_GetCurrentColumnNumber(st->parser)) + 1;
  for (int i = 0; attrs[i]; i += 2) el.attributes[attrs[i]] = attrs[i + 1];
  if (st->stack.empty()) {
    st->root = std::move(el);
    st->have_root = true;
    st->stack.push_back(&st->root);
  } else {
    st->stack.push_back(&st->stack.back()->add(std::move(el)));
  }
}

void on_end(void* user, const XML_Char*) { static_cast<ParseState*>(user)->stack.pop_back(); }

void on_text(void* user, const XML_Char* s, int len) {
  auto* st = static_cast<ParseState*>(user);
  if (!st->stack.empty()) st->stack.back()->text.append(s, static_cast<std::size_t>(len));
}

bool is_blank(std::string_view s) { return s.find_first_not_of(" \t\r\n") == std::string_view::npos; }

void trim_whitespace_text(Element& el) {
  if (is_blank(el.text)) el.text.clear();
  for (auto& c : el.children) trim_whitespace_text(c);
}

void write_element(const Element& el, int depth, std::string& out) {
  out.append(static_cast<std::size_t>(depth) * 2, ' ');
  out += '<';
  out += el.name;
  for (const auto& [k, v] : el.attributes) {
    out += ' ';
    out += k;
    out += "=\"";
    out += escape(v);
    out += '"';
  }
  if (el.children.empty() && el.text.empty()) {
    out += "/>\n";
    return;
  }
  out += '>';
  if (el.children.empty()) {
    out += escape(el.text);
  } else {
    out += '\n';
    for (const auto& c : el.children) write_element(c, depth + 1, out);
    out.append(static_cast<std::size_t>(depth) * 2, ' ');
  }
  out += "</";
  out += el.name;
  out += ">\n";
}

}  // namespace

Element parse(std::string_view document) {
  std::unique_ptr<std::remove_pointer_t<XML_Parser>, decltype(&XML_ParserFree)> parser(XML_ParserCreate("UTF-8"),
                                                                                       &XML_ParserFree);
  ParseState st;
  st.parser = parser.get();
  XML_SetUserData(parser.get(), &st);
  XML_SetElementHandler(parser.get(), &on_start, &on_end);
  XML_SetCharacterDataHandler(parser.get(), &on_text);
  if (XML_Parse(parser.get(), document.data(), static_cast<int>(document.size()), XML_TRUE) == XML_STATUS_ERROR) {
    const auto line = XML_GetCurrentLineNumber(parser.get());
    const auto column = XML_GetCurrentColumnNumber(parser.get()) + 1;
    const std::string where = std::to_string(line) + ":" + std::to_string(column);
    throw Error(ErrorCode::XmlSyntax,
                "XML syntax error at line " + std::to_string(line) + ", column " + std::to_string(column) + ": " +
                    XML_ErrorString(XML_GetErrorCode(parser.get())),
                where);
  }
  if (!st.have_root) throw Error(ErrorCode::XmlSyntax, "document has no root element", "1:1");
  trim_whitespace_text(st.root);
  return std::move(st.root);
}

std::string write(const Element& root) {
  std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  write_element(root, 0, out);
  return out;
}

std::string escape(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      case '\n': out += "&#10;"; break;
      case '\r': out += "&#13;"; break;
      case '\t': out += "&#9;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace holx::xml
