#pragma once

#include <algorithm>
#include <limits>
#include <string_view>
#include <vector>

#include "fjs/instance.hpp"
#include "fjs/learning.hpp"
#include "fjs/random.hpp"
#include "fjs/solution_graph.hpp"

namespace fjs {

enum class DispatchRule { est, ect };

/// Per-step record of a construction, mostly for tests.
struct ConstructionTrace {
  std::vector<int> chosen_ops;
  std::vector<int> chosen_machines;
  std::vector<Time> starts;       // start time of each chosen pair
  std::vector<Time> completions;  // completion time of each chosen pair
  std::vector<std::size_t> candidate_list_sizes;
};

/// Builds a schedule one operation/machine pair at a time with the EST or ECT
/// dispatching rule. rcl_alpha in [0, 1] widens the candidate list; with
/// rcl_alpha == 0 or no generator, the first best pair in (operation, machine)
/// order is taken and no random number is drawn.
inline Schedule construct(const Instance& inst, DispatchRule rule, double rcl_alpha = 0.0, Rng* rng = nullptr,
                          ConstructionTrace* trace = nullptr) {
  const int n = inst.num_operations;
  const int m = inst.num_machines;
  const auto prec = precedence_lists(inst);
  std::vector<int> missing_preds(static_cast<std::size_t>(n) + 1);
  for (int i = 1; i <= n; ++i) missing_preds[static_cast<std::size_t>(i)] = static_cast<int>(prec.predecessors[static_cast<std::size_t>(i)].size());
  std::vector<Time> release_op(static_cast<std::size_t>(n) + 1, 0);
  std::vector<Time> release_mac(static_cast<std::size_t>(m) + 1, 0);
  std::vector<char> scheduled(static_cast<std::size_t>(n) + 1, 0);
  std::vector<std::vector<int>> sequences(static_cast<std::size_t>(m) + 1);

  struct Pair {
    int op;
    int machine;
    Time start;
    Time duration;
  };
  std::vector<Pair> pairs, shortlist;
  for (int step = 0; step < n; ++step) {
    pairs.clear();
    for (int v = 1; v <= n; ++v) {
      if (scheduled[static_cast<std::size_t>(v)] || missing_preds[static_cast<std::size_t>(v)] > 0) continue;
      for (int k : inst.machines_for(v)) {
        const int slot = static_cast<int>(sequences[static_cast<std::size_t>(k)].size()) + 1;
        pairs.push_back({v, k, std::max(release_op[static_cast<std::size_t>(v)], release_mac[static_cast<std::size_t>(k)]),
                         LearningFn::actual_time(inst.processing_time(v, k), slot, inst.learning_rate)});
      }
    }
    shortlist.clear();
    if (rule == DispatchRule::est) {
      Time r_min = std::numeric_limits<Time>::max();
      for (const Pair& p : pairs) r_min = std::min(r_min, p.start);
      Time lo = std::numeric_limits<Time>::max(), hi = std::numeric_limits<Time>::min();
      for (const Pair& p : pairs)
        if (p.start == r_min) {
          lo = std::min(lo, p.duration);
          hi = std::max(hi, p.duration);
        }
      const double threshold = static_cast<double>(lo) + rcl_alpha * static_cast<double>(hi - lo);
      for (const Pair& p : pairs)
        if (p.start == r_min && static_cast<double>(p.duration) <= threshold) shortlist.push_back(p);
    } else {
      Time lo = std::numeric_limits<Time>::max(), hi = std::numeric_limits<Time>::min();
      for (const Pair& p : pairs) {
        lo = std::min(lo, p.start + p.duration);
        hi = std::max(hi, p.start + p.duration);
      }
      const double threshold = static_cast<double>(lo) + rcl_alpha * static_cast<double>(hi - lo);
      for (const Pair& p : pairs)
        if (static_cast<double>(p.start + p.duration) <= threshold) shortlist.push_back(p);
    }
    // With alpha == 0 every entry ties on the criterion; keep the first.
    const bool randomize = rng != nullptr && rcl_alpha > 0.0;
    const Pair pick = randomize ? shortlist[static_cast<std::size_t>(uniform_int(*rng, 0, static_cast<int>(shortlist.size()) - 1))]
                                : shortlist.front();
    const Time completion = pick.start + pick.duration;
    scheduled[static_cast<std::size_t>(pick.op)] = 1;
    release_mac[static_cast<std::size_t>(pick.machine)] = completion;
    sequences[static_cast<std::size_t>(pick.machine)].push_back(pick.op);
    for (int j : prec.successors[static_cast<std::size_t>(pick.op)]) {
      --missing_preds[static_cast<std::size_t>(j)];
      release_op[static_cast<std::size_t>(j)] = std::max(release_op[static_cast<std::size_t>(j)], completion);
    }
    if (trace) {
      trace->chosen_ops.push_back(pick.op);
      trace->chosen_machines.push_back(pick.machine);
      trace->starts.push_back(pick.start);
      trace->completions.push_back(completion);
      trace->candidate_list_sizes.push_back(shortlist.size());
    }
  }
  return build_schedule(inst, std::move(sequences));
}

inline Schedule construct_est(const Instance& inst, double rcl_alpha = 0.0, Rng* rng = nullptr) {
  return construct(inst, DispatchRule::est, rcl_alpha, rng);
}

inline Schedule construct_ect(const Instance& inst, double rcl_alpha = 0.0, Rng* rng = nullptr) {
  return construct(inst, DispatchRule::ect, rcl_alpha, rng);
}

/// ECT's schedule if strictly better, EST's otherwise.
inline Schedule pick_better(Schedule ect, Schedule est) { return ect.makespan < est.makespan ? std::move(ect) : std::move(est); }

inline Schedule best_of_est_ect(const Instance& inst) { return pick_better(construct_ect(inst), construct_est(inst)); }

}  // namespace fjs
