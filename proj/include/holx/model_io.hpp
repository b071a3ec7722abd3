#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "holx/model.hpp"
#include "holx/schema.hpp"
#include "holx/xml.hpp"

namespace holx {

// Grammar of the .holx format, loaded from the shipped schema file.
const Schema& holonic_schema();

// Canonical element tree of a model: fixed section order, siblings sorted
// by id, no validation. The scenarios section is emitted only when present.
xml::Element to_document(const SystemModel& model);

// Builds a model from an element tree. Throws SchemaViolation (unknown
// element or attribute, malformed value; subject is the document path) or
// ReferenceError (dangling id). Other constraint violations are left for
// validate().
SystemModel model_from_document(const xml::Element& doc);

// Throws XmlSyntax, SchemaViolation, ReferenceError.
SystemModel parse_model(std::string_view document_bytes);

// Canonical bytes; equal models serialize identically. Throws InvalidModel
// listing the violations when validate() is not clean.
std::string serialize_model(const SystemModel& model);

// Canonical bytes of the full observable store: the model document plus the
// ledger mutation history. Never throws on invalid models.
std::string snapshot_bytes(const SystemModel& model);

// Throws Io when the file cannot be read or written.
std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view bytes);
SystemModel load_model(const std::filesystem::path& path);

}  // namespace holx
