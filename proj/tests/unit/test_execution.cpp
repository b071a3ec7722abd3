#include <doctest.h>

#include <atomic>
#include <thread>

#include "holx/execution.hpp"
#include "holx/holon.hpp"
#include "holx/model_io.hpp"
#include "holx/validate.hpp"
#include "support/fixtures.hpp"
#include "support/generators.hpp"

using namespace holx;
using holx::testfix::error_of;

namespace {

// 2024-03-01T09:00:00Z
constexpr std::int64_t kNine = 1709283600000;

RunRequest next_part() { return RunRequest{"machining", {"H-102"}, {"R-lathe", "R-operator"}}; }

}  // namespace

TEST_CASE("successful run") {
  Store store(testfix::fig6());
  SteppingClock clock(Timestamp{kNine}, Duration{1000});
  const ProcessInstance inst = store.run_instance(next_part(), clock);
  CHECK(inst.id == "machining#2");
  CHECK(inst.occurrence == 2);
  CHECK(inst.start == Timestamp{kNine});
  CHECK(inst.end == Timestamp{kNine + 1000});
  CHECK(inst.elapsed == Duration{1000});
  CHECK(inst.inputs == std::vector<HolonStateRef>{{"H-102", "received"}});
  CHECK(inst.outputs == std::vector<HolonStateRef>{{"H-102", "machining#2"}});

  const auto m = store.snapshot();
  const Holon& h = *m->find_holon("H-102");
  REQUIRE(h.states.size() == 2);
  const HolonState& head = *h.head();
  CHECK(head.produced_by == std::optional<Id>("machining#2"));
  CHECK(head.at == Timestamp{kNine + 1000});
  REQUIRE(head.attribute("machined-at") != nullptr);
  CHECK(head.attribute("machined-at")->value == Scalar::timestamp(Timestamp{kNine + 1000}));
  CHECK(head.attribute("surface-finish")->value == Scalar::parse("machining#2"));
  CHECK(head.attribute("length")->value == Scalar::number(118.5));
  // FNV-1a 64 of "219f3035bbb5c7e8:machining#2", computed independently.
  CHECK(h.physical.checksum == 0x6e31427dd4e24cd3ULL);
  CHECK(m->ledger.find("L-H-102")->descriptor == "219f3035bbb5c7e8:machining#2");
  CHECK(sync_check(*m, "H-102"));
  CHECK(validate(*m).empty());
  CHECK(m->ledger.history().size() == 3);
}

TEST_CASE("injected faults leave the store byte-identical") {
  for (FaultPoint p : {FaultPoint::pre_info, FaultPoint::post_info_pre_physical, FaultPoint::post_physical_pre_commit}) {
    CAPTURE(to_string(p));
    Store store(testfix::fig6());
    const auto before = store.snapshot();
    const std::string bytes = snapshot_bytes(*before);
    SteppingClock clock(Timestamp{kNine}, Duration{1000});
    CHECK(error_of([&] { store.run_instance(next_part(), clock, FaultPlan{p}); }) == ErrorCode::DomainFault);
    CHECK(store.snapshot() == before);
    CHECK(snapshot_bytes(*store.snapshot()) == bytes);
    // The next committed run still counts as the second occurrence.
    CHECK(store.run_instance(next_part(), clock).occurrence == 2);
  }
}

TEST_CASE("precondition failures record nothing") {
  Store store(testfix::fig6());
  const std::string bytes = snapshot_bytes(*store.snapshot());
  SteppingClock clock(Timestamp{kNine}, Duration{1000});

  try {
    store.run_instance(RunRequest{"machining", {"H-102"}, {"R-operator"}}, clock);
    FAIL("expected CapabilityMissing");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::CapabilityMissing);
    CHECK(e.subject() == "turning");
  }
  try {
    store.run_instance(RunRequest{"machining", {}, {"R-lathe"}}, clock);
    FAIL("expected ConsumedItemAbsent");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ConsumedItemAbsent);
    CHECK(e.subject() == "RawPart.length");
  }
  CHECK(error_of([&] { store.run_instance(RunRequest{"milling", {}, {}}, clock); }) == ErrorCode::UnknownProcess);
  CHECK(error_of([&] { store.run_instance(RunRequest{"machining", {"H-9"}, {"R-lathe"}}, clock); }) ==
        ErrorCode::UnknownHolon);
  CHECK(error_of([&] { store.run_instance(RunRequest{"machining", {"H-102"}, {"R-x"}}, clock); }) ==
        ErrorCode::NotFound);
  CHECK(snapshot_bytes(*store.snapshot()) == bytes);
}

TEST_CASE("retired inputs and backwards clocks") {
  SystemModel m = load_model(testfix::model_path("assembly_line.holx"));
  Store store(m);
  SteppingClock clock(Timestamp{kNine}, Duration{1000});
  for (const auto& h : m.holons) {
    if (!h.retired) continue;
    CHECK(error_of([&] { store.run_instance(RunRequest{m.processes.front().id, {h.id}, {}}, clock); }) ==
          ErrorCode::RetiredHolon);
  }

  Store fig(testfix::fig6());
  SteppingClock backwards(Timestamp{kNine}, Duration{-1});
  CHECK(error_of([&] { fig.run_instance(next_part(), backwards); }) == ErrorCode::TimeRegression);
  CHECK(fig.snapshot()->instances.size() == 1);
}

TEST_CASE("information-level processes leave the ledger alone") {
  SystemModel m = load_model(testfix::model_path("chain_two_process.holx"));
  Store store(m);
  const Scenario& s = *m.find_scenario("S-batch");
  SteppingClock clock(s.clock_start, s.clock_step);
  for (const auto& run : s.runs) {
    const auto before = store.snapshot();
    const std::size_t history = before->ledger.history().size();
    store.run_instance(RunRequest{run.process, run.inputs, run.resources}, clock);
    const auto after = store.snapshot();
    const bool physical = after->find_process(run.process)->level == EnterpriseLevel::L1;
    CHECK(after->ledger.history().size() == history + (physical ? run.inputs.size() : 0));
    for (const auto& h : run.inputs) CHECK(sync_check(*after, h));
  }
  CHECK(validate(*store.snapshot()).empty());
}

TEST_CASE("sync_check") {
  SystemModel m = testfix::fig6();
  CHECK(sync_check(m, "H-102"));
  m.ledger.overwrite_out_of_band("L-H-102", "dented");
  CHECK_FALSE(sync_check(m, "H-102"));
  CHECK(sync_check(m, "H-101"));
  CHECK(error_of([&] { sync_check(m, "H-9"); }) == ErrorCode::NotFound);
}

TEST_CASE("trace") {
  Store store(testfix::fig6());
  SteppingClock clock(Timestamp{kNine}, Duration{1000});
  CHECK(trace(*store.snapshot(), "H-102").empty());
  const auto i1 = store.run_instance(next_part(), clock);
  const auto i2 = store.run_instance(next_part(), clock);
  const auto t = trace(*store.snapshot(), "H-102");
  REQUIRE(t.size() == 2);
  CHECK(t[0].instance.id == i1.id);
  CHECK(t[1].instance.id == i2.id);
  CHECK(i2.id == "machining#3");
  CHECK(t[1].state == "machining#3");
  CHECK(error_of([&] { trace(*store.snapshot(), "nope"); }) == ErrorCode::NotFound);

  // Assembly: the composite's trace covers both constituents' histories.
  SystemModel m = *store.snapshot();
  testgen::add_manual_instance(m, "machining", Timestamp{kNine + 10000}, Timestamp{kNine + 11000});
  const Id join = m.instances.back().id;
  HolonState s;
  s.id = "joined";
  s.at = Timestamp{kNine + 11000};
  assemble(m, AssemblySpec{"C", "RawPart", {"H-101", "H-102"}, join, s});
  std::set<Id> expected;
  for (const auto& h : {"H-101", "H-102", "C"}) {
    for (const auto& st : m.find_holon(h)->states) {
      if (st.produced_by) expected.insert(*st.produced_by);
    }
  }
  std::set<Id> got;
  for (const auto& e : trace(m, "C")) got.insert(e.instance.id);
  CHECK(got == expected);
  CHECK(got.size() == 4);
}

TEST_CASE("occurrence counting and sync over random sequences") {
  testgen::Rng rng(2718);
  for (int round = 0; round < 50; ++round) {
    testgen::ModelParams params;
    params.max_runs = 0;
    const SystemModel m = testgen::random_model(rng, params);
    Store store(m);
    SteppingClock clock(Timestamp{testgen::kEpoch.ms + 30'000'000}, Duration{500});
    std::map<Id, int> committed;
    for (const auto& i : m.instances) ++committed[i.process];
    for (int step = 0; step < 20; ++step) {
      const auto snap = store.snapshot();
      std::vector<Id> live;
      for (const auto& h : snap->holons) {
        if (!h.retired) live.push_back(h.id);
      }
      if (live.empty() || snap->processes.empty()) break;
      const Process& p = testgen::pick(rng, snap->processes);
      std::vector<Id> resources;
      for (const auto& r : snap->resources) resources.push_back(r.id);
      try {
        const auto inst = store.run_instance(RunRequest{p.id, testgen::subset(rng, live, 0.5), resources}, clock);
        CHECK(inst.occurrence == ++committed[p.id]);
        const auto after = store.snapshot();
        for (const auto& out : inst.outputs) {
          CHECK(sync_check(*after, out.holon));
          bool traced = false;
          for (const auto& e : trace(*after, out.holon)) traced = traced || e.instance.id == inst.id;
          CHECK(traced);
        }
      } catch (const Error& e) {
        CHECK((e.code() == ErrorCode::ConsumedItemAbsent || e.code() == ErrorCode::CapabilityMissing));
        CHECK(store.snapshot() == snap);
      }
    }
    CHECK(validate(*store.snapshot()).empty());
  }
}

TEST_CASE("readers never observe a half-applied run") {
  Store store(testfix::fig6());
  std::atomic<bool> done{false};
  std::atomic<int> bad{0};
  std::vector<std::thread> readers;
  for (int r = 0; r < 4; ++r) {
    readers.emplace_back([&] {
      while (!done) {
        const auto snap = store.snapshot();
        if (!sync_check(*snap, "H-102")) ++bad;
        const std::size_t states = snap->find_holon("H-102")->states.size();
        if (states != snap->instances.size()) ++bad;
      }
    });
  }
  SteppingClock clock(Timestamp{kNine}, Duration{1000});
  for (int i = 0; i < 300; ++i) {
    const auto fault = i % 3 == 0 ? FaultPlan{FaultPoint::post_info_pre_physical} : FaultPlan{};
    try {
      store.run_instance(next_part(), clock, fault);
    } catch (const Error&) {
    }
  }
  done = true;
  for (auto& t : readers) t.join();
  CHECK(bad == 0);
  CHECK(store.snapshot()->instances.size() == 201);
}
