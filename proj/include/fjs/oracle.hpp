#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "fjs/error.hpp"
#include "fjs/instance.hpp"
#include "fjs/learning.hpp"
#include "fjs/solution_graph.hpp"

namespace fjs {

struct OracleResult {
  Time optimum = 0;
  Schedule schedule;
  std::int64_t feasible_count = 0;
};

namespace detail {

inline std::int64_t saturating_mul(std::int64_t a, std::int64_t b, std::int64_t cap) {
  if (a == 0 || b == 0) return 0;
  if (a > cap / b) return cap + 1;
  return std::min(a * b, cap + 1);
}

/// Upper bound on assignments x per-machine orderings, capped at cap + 1.
inline std::int64_t enumeration_bound(const Instance& inst, std::int64_t cap) {
  const int n = inst.num_operations;
  std::int64_t assignments = 1;
  for (int i = 1; i <= n; ++i)
    assignments = saturating_mul(assignments, static_cast<std::int64_t>(inst.machines_for(i).size()), cap);
  if (assignments > cap) return cap + 1;
  std::vector<std::int64_t> factorial(static_cast<std::size_t>(n) + 1, 1);
  for (int i = 1; i <= n; ++i) factorial[static_cast<std::size_t>(i)] = saturating_mul(factorial[static_cast<std::size_t>(i) - 1], i, cap);
  std::vector<std::size_t> choice(static_cast<std::size_t>(n), 0);
  std::int64_t total = 0;
  for (;;) {
    std::vector<int> load(static_cast<std::size_t>(inst.num_machines) + 1, 0);
    for (int i = 1; i <= n; ++i) ++load[static_cast<std::size_t>(inst.machines_for(i)[choice[static_cast<std::size_t>(i) - 1]])];
    std::int64_t orderings = 1;
    for (int c : load) orderings = saturating_mul(orderings, factorial[static_cast<std::size_t>(c)], cap);
    total = std::min(total + orderings, cap + 1);
    if (total > cap) return total;
    int i = 0;
    while (i < n && ++choice[static_cast<std::size_t>(i)] == inst.machines_for(i + 1).size()) choice[static_cast<std::size_t>(i++)] = 0;
    if (i == n) break;
  }
  return total;
}

class SequencingEnumerator {
 public:
  using Visitor = std::function<void(const std::vector<std::vector<int>>&)>;

  SequencingEnumerator(const Instance& inst, Visitor visit) : inst_(inst), visit_(std::move(visit)) {
    const int n = inst.num_operations;
    adj_.assign(static_cast<std::size_t>(n) + 1, {});
    for (const Arc& a : inst.precedence_arcs) adj_[static_cast<std::size_t>(a.from)].push_back(a.to);
    mark_.assign(static_cast<std::size_t>(n) + 1, 0);
  }

  void run() {
    const int n = inst_.num_operations;
    choice_.assign(static_cast<std::size_t>(n), 0);
    for (;;) {
      on_machine_.assign(static_cast<std::size_t>(inst_.num_machines) + 1, {});
      for (int i = 1; i <= n; ++i)
        on_machine_[static_cast<std::size_t>(inst_.machines_for(i)[choice_[static_cast<std::size_t>(i) - 1]])].push_back(i);
      sequences_.assign(static_cast<std::size_t>(inst_.num_machines) + 1, {});
      used_.assign(static_cast<std::size_t>(n) + 1, 0);
      extend(1);
      int i = 0;
      while (i < n && ++choice_[static_cast<std::size_t>(i)] == inst_.machines_for(i + 1).size()) choice_[static_cast<std::size_t>(i++)] = 0;
      if (i == n) break;
    }
  }

 private:
  bool reaches(int from, int to) {
    ++epoch_;
    std::vector<int> stack{from};
    mark_[static_cast<std::size_t>(from)] = epoch_;
    while (!stack.empty()) {
      const int u = stack.back();
      stack.pop_back();
      if (u == to) return true;
      for (int j : adj_[static_cast<std::size_t>(u)])
        if (mark_[static_cast<std::size_t>(j)] != epoch_) {
          mark_[static_cast<std::size_t>(j)] = epoch_;
          stack.push_back(j);
        }
    }
    return false;
  }

  void extend(int k) {
    const int m = inst_.num_machines;
    while (k <= m && sequences_[static_cast<std::size_t>(k)].size() == on_machine_[static_cast<std::size_t>(k)].size()) ++k;
    if (k > m) {
      visit_(sequences_);
      return;
    }
    auto& seq = sequences_[static_cast<std::size_t>(k)];
    for (int op : on_machine_[static_cast<std::size_t>(k)]) {
      if (used_[static_cast<std::size_t>(op)]) continue;
      const int last = seq.empty() ? 0 : seq.back();
      if (last && reaches(op, last)) continue;
      if (last) adj_[static_cast<std::size_t>(last)].push_back(op);
      used_[static_cast<std::size_t>(op)] = 1;
      seq.push_back(op);
      extend(k);
      seq.pop_back();
      used_[static_cast<std::size_t>(op)] = 0;
      if (last) adj_[static_cast<std::size_t>(last)].pop_back();
    }
  }

  const Instance& inst_;
  Visitor visit_;
  std::vector<std::vector<int>> adj_;
  std::vector<int> mark_;
  int epoch_ = 0;
  std::vector<std::size_t> choice_;
  std::vector<std::vector<int>> on_machine_;
  std::vector<std::vector<int>> sequences_;
  std::vector<char> used_;
};

}  // namespace detail

/// Visits the machine sequences (indexed by machine id, slot 0 empty) of every
/// feasible solution exactly once. Refuses with LimitExceeded when the
/// assignment x ordering bound exceeds `limit`.
inline std::int64_t for_each_feasible_sequencing(const Instance& inst, std::int64_t limit,
                                                 const std::function<void(const std::vector<std::vector<int>>&)>& visit) {
  const auto bound = detail::enumeration_bound(inst, limit);
  if (bound > limit)
    throw LimitExceeded("exhaustive enumeration needs more than " + std::to_string(limit) + " candidate sequencings");
  std::int64_t count = 0;
  detail::SequencingEnumerator e(inst, [&](const std::vector<std::vector<int>>& seq) {
    ++count;
    visit(seq);
  });
  e.run();
  return count;
}

/// Makespan of fixed sequences by Kahn's algorithm on precedence + machine arcs.
/// Kept separate from the solution-graph code so the two can check each other.
inline Time sequencing_makespan(const Instance& inst, const std::vector<std::vector<int>>& sequences) {
  const int n = inst.num_operations;
  std::vector<std::vector<int>> succ(static_cast<std::size_t>(n) + 1);
  std::vector<int> indeg(static_cast<std::size_t>(n) + 1, 0);
  std::vector<Time> dur(static_cast<std::size_t>(n) + 1, 0);
  for (const Arc& a : inst.precedence_arcs) {
    succ[static_cast<std::size_t>(a.from)].push_back(a.to);
    ++indeg[static_cast<std::size_t>(a.to)];
  }
  for (std::size_t k = 1; k < sequences.size(); ++k) {
    const auto& q = sequences[k];
    for (std::size_t l = 0; l < q.size(); ++l) {
      dur[static_cast<std::size_t>(q[l])] =
          LearningFn::actual_time(inst.processing_time(q[l], static_cast<int>(k)), static_cast<int>(l) + 1, inst.learning_rate);
      if (l > 0) {
        succ[static_cast<std::size_t>(q[l - 1])].push_back(q[l]);
        ++indeg[static_cast<std::size_t>(q[l])];
      }
    }
  }
  std::vector<Time> start(static_cast<std::size_t>(n) + 1, 0);
  std::vector<int> ready;
  for (int i = 1; i <= n; ++i)
    if (indeg[static_cast<std::size_t>(i)] == 0) ready.push_back(i);
  Time makespan = 0;
  int done = 0;
  while (!ready.empty()) {
    const int i = ready.back();
    ready.pop_back();
    ++done;
    const Time finish = start[static_cast<std::size_t>(i)] + dur[static_cast<std::size_t>(i)];
    makespan = std::max(makespan, finish);
    for (int j : succ[static_cast<std::size_t>(i)]) {
      start[static_cast<std::size_t>(j)] = std::max(start[static_cast<std::size_t>(j)], finish);
      if (--indeg[static_cast<std::size_t>(j)] == 0) ready.push_back(j);
    }
  }
  if (done != n) throw CycleError("sequencing is cyclic");
  return makespan;
}

/// True optimum by enumerating every assignment and every acyclic sequencing.
inline OracleResult solve_exhaustive(const Instance& inst, std::int64_t limit) {
  OracleResult res;
  res.optimum = std::numeric_limits<Time>::max();
  std::vector<std::vector<int>> best;
  res.feasible_count = for_each_feasible_sequencing(inst, limit, [&](const std::vector<std::vector<int>>& seq) {
    const Time c = sequencing_makespan(inst, seq);
    if (c < res.optimum) {
      res.optimum = c;
      best = seq;
    }
  });
  res.schedule = build_schedule(inst, std::move(best));
  return res;
}

}  // namespace fjs
