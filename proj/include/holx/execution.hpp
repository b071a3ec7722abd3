#pragma once

#include <memory>
#include <mutex>
#include <optional>
#include <vector>

#include "holx/model.hpp"

namespace holx {

class Clock {
 public:
  virtual ~Clock() = default;
  virtual Timestamp now() = 0;
};

// Returns start, start + step, start + 2*step, ...
class SteppingClock final : public Clock {
 public:
  SteppingClock(Timestamp start, Duration step) : next_(start), step_(step) {}
  Timestamp now() override {
    const Timestamp t = next_;
    next_ = next_ + step_;
    return t;
  }

 private:
  Timestamp next_;
  Duration step_;
};

struct FaultPlan {
  std::optional<FaultPoint> fail_at;
};

struct RunRequest {
  Id process;
  std::vector<Id> inputs;
  std::vector<Id> resources;
};

// Single-writer model store. Writers stage a private copy of the model and
// publish it with one pointer swap; readers work on immutable snapshots and
// never observe a half-applied run.
class Store {
 public:
  explicit Store(SystemModel model = {});

  std::shared_ptr<const SystemModel> snapshot() const;

  // Executes one process instance: the informational part (a new state on
  // every input holon carrying the produced items) and, for L1 processes,
  // the physical part (one ledger rewrite per input holon) commit together
  // or not at all.
  //
  // Throws UnknownProcess, UnknownHolon, RetiredHolon, NotFound (resource),
  // CapabilityMissing, ConsumedItemAbsent, TimeRegression (clock ran
  // backwards), DomainFault (injected fault). On any throw the store is
  // unchanged.
  ProcessInstance run_instance(const RunRequest& request, Clock& clock, const FaultPlan& fault = {});

  // Applies `mutate` to a staged copy and publishes it if it returns
  // normally.
  template <typename F>
  void update(F&& mutate) {
    std::lock_guard writer(writer_);
    auto staged = std::make_shared<SystemModel>(*snapshot());
    mutate(*staged);
    publish(std::move(staged));
  }

 private:
  void publish(std::shared_ptr<const SystemModel> next);

  mutable std::mutex root_mutex_;
  std::mutex writer_;
  std::shared_ptr<const SystemModel> root_;
};

// True iff the holon's recorded checksum equals the ledger's current
// checksum for its physical part. Throws NotFound.
bool sync_check(const SystemModel& model, const Id& holon);

struct TraceEntry {
  ProcessInstance instance;
  Id holon;
  Id state;
};

// Instances that produced a state of the holon or of any genealogical
// ancestor, ordered by instance start, then instance id. Throws NotFound.
std::vector<TraceEntry> trace(const SystemModel& model, const Id& holon);

}  // namespace holx
