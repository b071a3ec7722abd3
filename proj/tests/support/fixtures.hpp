#pragma once

#include <optional>
#include <set>
#include <string>

#include "holx/error.hpp"
#include "holx/model.hpp"
#include "holx/model_io.hpp"

namespace holx::testfix {

template <typename F>
std::optional<ErrorCode> error_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return std::nullopt;
}

inline std::string model_path(const std::string& name) { return std::string(HOLX_MODELS_DIR) + "/" + name; }
inline std::string data_path(const std::string& name) { return std::string(HOLX_TEST_DATA_DIR) + "/" + name; }

inline SystemModel fig6() { return load_model(model_path("fig6_single_process.holx")); }

inline ItemRef attr(const std::string& type, const std::string& item) { return ItemRef{type, item, ItemKind::attribute}; }
inline ItemRef prop(const std::string& type, const std::string& item) { return ItemRef{type, item, ItemKind::property}; }

// One holon type "W" declaring attributes a..f and property p.
inline SystemModel base_model() {
  SystemModel m;
  HolonType w{"W", {}};
  for (std::string n : {"a", "b", "c", "d", "e", "f"}) w.items.push_back(ItemDecl{n, ItemKind::attribute, AttributeClass::shape});
  w.items.push_back(ItemDecl{"p", ItemKind::property, std::nullopt});
  m.holon_types.push_back(w);
  return m;
}

inline Process& add_process(SystemModel& m, const std::string& id, std::set<ItemRef> consumes = {},
                            std::set<ItemRef> produces = {}, EnterpriseLevel level = EnterpriseLevel::L1) {
  Process p;
  p.id = id;
  p.name = id;
  p.level = level;
  p.consumes = std::move(consumes);
  p.produces = std::move(produces);
  m.processes.push_back(p);
  return m.processes.back();
}

inline Flow& add_flow(SystemModel& m, const std::string& id, const std::string& from, const std::string& to,
                      std::set<ItemRef> declared = {}) {
  Flow f;
  f.id = id;
  f.from = from;
  f.to = to;
  f.declared_items = std::move(declared);
  m.flows.push_back(f);
  return m.flows.back();
}

}  // namespace holx::testfix
