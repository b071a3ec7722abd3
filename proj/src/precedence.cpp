#include "holx/precedence.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <tuple>

#include "holx/error.hpp"
#include "holx/validate.hpp"

namespace holx {

std::string to_string(const OccNode& n) { return n.process + "@" + std::to_string(n.occurrence); }

std::vector<OccPair> PrecedenceRelation::pairs() const {
  std::vector<OccPair> out;
  const int n = static_cast<int>(closure_.size());
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      if (!closure_[a][b]) continue;
      out.emplace_back(OccNode{processes_[a / horizon_], a % horizon_ + 1},
                       OccNode{processes_[b / horizon_], b % horizon_ + 1});
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool PrecedenceRelation::has_process(const Id& p) const {
  return std::binary_search(processes_.begin(), processes_.end(), p);
}

int PrecedenceRelation::index(const OccNode& n) const {
  auto it = std::lower_bound(processes_.begin(), processes_.end(), n.process);
  if (it == processes_.end() || *it != n.process || n.occurrence < 1 || n.occurrence > horizon_) return -1;
  return static_cast<int>(it - processes_.begin()) * horizon_ + (n.occurrence - 1);
}

bool PrecedenceRelation::contains(const OccNode& a, const OccNode& b) const {
  const int ia = index(a);
  const int ib = index(b);
  return ia >= 0 && ib >= 0 && closure_[ia][ib];
}

PrecedenceRelation build_precedence(const SystemModel& model, int horizon) {
  if (horizon < 1) throw Error(ErrorCode::InvalidHorizon, "horizon must be at least 1, got " + std::to_string(horizon));
  if (const auto v = validate(model); !v.empty()) {
    throw Error(ErrorCode::InvalidModel, "model is not valid: " + v.front().code + " " + v.front().message,
                v.front().subject);
  }

  PrecedenceRelation rel;
  rel.horizon_ = horizon;
  for (const auto& p : model.processes) rel.processes_.push_back(p.id);
  std::sort(rel.processes_.begin(), rel.processes_.end());

  // Internal flows per source, ordered by (target, flow id).
  std::map<Id, std::vector<const Flow*>> out_flows;
  std::set<Id> externally_fed;
  for (const auto& f : model.flows) {
    if (f.from_external()) {
      if (!f.to_external()) externally_fed.insert(f.to);
      continue;
    }
    if (f.to_external()) continue;
    out_flows[f.from].push_back(&f);
  }
  for (auto& [_, flows] : out_flows) {
    std::sort(flows.begin(), flows.end(),
              [](const Flow* a, const Flow* b) { return std::tie(a->to, a->id) < std::tie(b->to, b->id); });
  }

  enum class Mark { white, grey, black };
  std::map<Id, Mark> mark;
  for (const auto& p : rel.processes_) mark[p] = Mark::white;
  std::function<void(const Id&)> visit = [&](const Id& p) {
    mark[p] = Mark::grey;
    for (const Flow* f : out_flows[p]) {
      if (mark[f->to] == Mark::grey) rel.back_edges_.insert(f->id);
      else if (mark[f->to] == Mark::white) visit(f->to);
    }
    mark[p] = Mark::black;
  };
  for (const auto& p : externally_fed) {
    if (mark[p] == Mark::white) visit(p);
  }
  for (const auto& p : rel.processes_) {
    if (mark[p] == Mark::white) visit(p);
  }

  const int k = horizon;
  for (const auto& [from, flows] : out_flows) {
    for (const Flow* f : flows) {
      if (rel.back_edges_.count(f->id)) {
        for (int i = 1; i < k; ++i) rel.edges_.emplace_back(OccNode{f->from, i}, OccNode{f->to, i + 1});
      } else {
        for (int i = 1; i <= k; ++i) rel.edges_.emplace_back(OccNode{f->from, i}, OccNode{f->to, i});
      }
    }
  }
  for (const auto& p : rel.processes_) {
    for (int i = 1; i < k; ++i) rel.edges_.emplace_back(OccNode{p, i}, OccNode{p, i + 1});
  }
  std::sort(rel.edges_.begin(), rel.edges_.end());
  rel.edges_.erase(std::unique(rel.edges_.begin(), rel.edges_.end()), rel.edges_.end());

  const int n = static_cast<int>(rel.processes_.size()) * k;
  std::vector<std::vector<int>> adjacency(static_cast<std::size_t>(n));
  for (const auto& [a, b] : rel.edges_) adjacency[rel.index(a)].push_back(rel.index(b));
  rel.closure_.assign(static_cast<std::size_t>(n), std::vector<bool>(static_cast<std::size_t>(n), false));
  for (int s = 0; s < n; ++s) {
    std::vector<int> stack(adjacency[s].begin(), adjacency[s].end());
    auto& row = rel.closure_[s];
    while (!stack.empty()) {
      const int v = stack.back();
      stack.pop_back();
      if (row[v]) continue;
      row[v] = true;
      for (int w : adjacency[v]) {
        if (!row[w]) stack.push_back(w);
      }
    }
  }
  return rel;
}

bool precedes(const PrecedenceRelation& rel, const OccNode& a, const OccNode& b) {
  for (const auto* n : {&a, &b}) {
    if (!rel.has_process(n->process)) throw Error(ErrorCode::UnknownProcess, "unknown process '" + n->process + "'", n->process);
    if (n->occurrence < 1 || n->occurrence > rel.horizon()) {
      throw Error(ErrorCode::OutOfHorizon,
                  "occurrence " + std::to_string(n->occurrence) + " is outside horizon " + std::to_string(rel.horizon()),
                  to_string(*n));
    }
  }
  return rel.contains(a, b);
}

}  // namespace holx
