#include <doctest.h>

#include <algorithm>

#include "holx/error.hpp"
#include "holx/model_io.hpp"
#include "holx/validate.hpp"
#include "support/fixtures.hpp"
#include "support/generators.hpp"

using namespace holx;
using holx::testfix::data_path;
using holx::testfix::error_of;

namespace {

Error error_from(const std::string& file) {
  try {
    load_model(data_path(file));
  } catch (const Error& e) {
    return e;
  }
  FAIL("expected an error for " << file);
  return Error(ErrorCode::Io, "no error");
}

// Same content, every id-keyed collection in a different order.
SystemModel shuffled(SystemModel m, testgen::Rng& rng) {
  auto mix = [&](auto& v) { std::shuffle(v.begin(), v.end(), rng); };
  mix(m.sites);
  mix(m.actors);
  mix(m.resources);
  mix(m.holon_types);
  mix(m.holons);
  mix(m.processes);
  mix(m.flows);
  mix(m.instances);
  mix(m.scenarios);
  for (auto& t : m.holon_types) mix(t.items);
  for (auto& h : m.holons) {
    mix(h.properties);
    for (auto& s : h.states) mix(s.attributes);
  }
  return m;
}

}  // namespace

TEST_CASE("minimal document") {
  const SystemModel m = load_model(data_path("empty_model.holx"));
  CHECK(m.processes.empty());
  CHECK(m.holons.empty());
  CHECK(validate(m).empty());
}

TEST_CASE("one process and one flow") {
  const SystemModel m = load_model(data_path("one_process_one_flow.holx"));
  CHECK(m.processes.size() == 1);
  CHECK(m.flows.size() == 1);
  CHECK(m.flows[0].from_external());
  CHECK(m.flows[0].declared_items.size() == 1);
}

TEST_CASE("unknown element names its path") {
  const Error e = error_from("misspelled_holon.holx");
  CHECK(e.code() == ErrorCode::SchemaViolation);
  CHECK(e.subject() == "/holonic-model/holons/holonn");
}

TEST_CASE("dangling reference") {
  const Error e = error_from("dangling_flow.holx");
  CHECK(e.code() == ErrorCode::ReferenceError);
  CHECK(e.subject() == "F1");
}

TEST_CASE("syntax errors carry a position") {
  const Error e = error_from("broken_syntax.holx");
  CHECK(e.code() == ErrorCode::XmlSyntax);
  CHECK(e.subject() == "3:3");
  CHECK(error_of([] { load_model(data_path("no_such_file.holx")); }) == ErrorCode::Io);
}

TEST_CASE("constraint violations are left to validate") {
  const SystemModel m = load_model(data_path("elementary_with_constituent.holx"));
  const auto vs = validate(m);
  REQUIRE(vs.size() == 1);
  CHECK(vs[0].code == "E-H-001");
  CHECK(error_of([&] { serialize_model(m); }) == ErrorCode::InvalidModel);
}

TEST_CASE("empty model matches the frozen golden file") {
  CHECK(serialize_model(SystemModel{}) == read_file(data_path("empty_model.golden.holx")));
}

TEST_CASE("insertion order does not affect the bytes") {
  SystemModel a = testfix::base_model();
  SystemModel b = testfix::base_model();
  testfix::add_process(a, "P1");
  testfix::add_process(a, "P2");
  testfix::add_process(a, "P3");
  testfix::add_process(b, "P3");
  testfix::add_process(b, "P1");
  testfix::add_process(b, "P2");
  CHECK(serialize_model(a) == serialize_model(b));
}

TEST_CASE("canonical form and round trip on generated models") {
  testgen::Rng rng(4242);
  for (int i = 0; i < 300; ++i) {
    const SystemModel m = testgen::random_model(rng);
    const std::string bytes = serialize_model(m);
    CHECK(bytes.find('\r') == std::string::npos);
    const SystemModel back = parse_model(bytes);
    CHECK(structurally_equal(back, m));
    CHECK(serialize_model(back) == bytes);
    CHECK(serialize_model(shuffled(m, rng)) == bytes);
    CHECK(snapshot_bytes(back).size() > 0);
  }
}

TEST_CASE("shipped models are stored canonically") {
  for (const char* name : {"fig6_single_process.holx", "chain_two_process.holx", "cycle_rework.holx",
                           "assembly_line.holx", "not_interoperable.holx"}) {
    CAPTURE(name);
    const std::string text = read_file(testfix::model_path(name));
    const SystemModel m = parse_model(text);
    CHECK(parse_model(serialize_model(m)) == canonicalize(m));
  }
}
