#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "fjs/error.hpp"
#include "fjs/instance.hpp"
#include "fjs/learning.hpp"
#include "fjs/solution_graph.hpp"

namespace fjs {

/// A schedule with one operation taken off its machine. The removed operation
/// keeps its precedence and dummy arcs, has weight 0 and no machine.
struct ReducedState {
  int removed = 0;
  int old_machine = 0;
  int old_position = 0;
  std::vector<int> assignment;
  std::vector<std::vector<int>> sequences;
  std::vector<int> position;
  std::vector<Time> actual_times;
  Digraph graph;
  /// Longest s-t path in the reduced graph and its length.
  std::vector<int> path;
  Time xi = 0;
  /// Per vertex: has a path to / is reachable from the removed operation.
  std::vector<char> reach_to;
  std::vector<char> reach_from;
  /// Per machine (slot 0 unused): position of the last operation of `path`.
  std::vector<int> tau;
};

inline ReducedState remove_op(const Instance& inst, const Schedule& sched, int v) {
  const int n = inst.num_operations;
  if (v < 1 || v > n) throw Error("remove_op: " + std::to_string(v) + " is not an operation");
  ReducedState rs;
  rs.removed = v;
  rs.old_machine = sched.assignment[static_cast<std::size_t>(v)];
  rs.old_position = sched.position[static_cast<std::size_t>(v)];
  rs.assignment = sched.assignment;
  rs.sequences = sched.sequences;
  rs.position = sched.position;
  rs.actual_times = sched.actual_times;
  rs.graph = sched.graph;

  const int k = rs.old_machine;
  auto& q = rs.sequences[static_cast<std::size_t>(k)];
  const auto idx = static_cast<std::size_t>(rs.old_position - 1);
  const int before = idx > 0 ? q[idx - 1] : 0;
  const int after = idx + 1 < q.size() ? q[idx + 1] : 0;
  if (before) rs.graph.remove_arc(before, v);
  if (after) rs.graph.remove_arc(v, after);
  if (before && after) rs.graph.add_arc(before, after);
  q.erase(q.begin() + static_cast<std::ptrdiff_t>(idx));
  for (std::size_t l = idx; l < q.size(); ++l) {
    const int op = q[l];
    const int pos = static_cast<int>(l) + 1;
    rs.position[static_cast<std::size_t>(op)] = pos;
    rs.actual_times[static_cast<std::size_t>(op)] = LearningFn::actual_time(inst.processing_time(op, k), pos, inst.learning_rate);
  }
  rs.assignment[static_cast<std::size_t>(v)] = 0;
  rs.position[static_cast<std::size_t>(v)] = 0;
  rs.actual_times[static_cast<std::size_t>(v)] = 0;

  auto topo = topological_sort_plus(rs.graph, kSource, v);
  rs.reach_to = std::move(topo.reaches_target);
  rs.reach_from = reachable_from(rs.graph, v);
  auto cp = critical_path(rs.graph, topo.order, rs.actual_times, rs.assignment, rs.position, inst.num_machines);
  rs.path = std::move(cp.path);
  rs.xi = cp.length;
  rs.tau = std::move(cp.tau);
  return rs;
}

/// Candidate positions for reinserting the removed operation on one machine:
/// gamma in [lower + 1, upper] is cycle-free, and [lower + 1, effective_upper]
/// survives the reduction rule.
struct InsertionWindow {
  int machine = 0;
  int lower = 0;
  int upper = 0;
  int effective_upper = 0;

  int first() const { return lower + 1; }
  bool empty() const { return effective_upper <= lower; }
  int size() const { return empty() ? 0 : effective_upper - lower; }
};

inline InsertionWindow feasible_window(const ReducedState& rs, int k, bool reduction_active, Time cmax) {
  const auto& q = rs.sequences[static_cast<std::size_t>(k)];
  InsertionWindow w;
  w.machine = k;
  w.lower = 0;
  for (std::size_t l = 0; l < q.size(); ++l)
    if (rs.reach_to[static_cast<std::size_t>(q[l])]) w.lower = static_cast<int>(l) + 1;
  w.upper = static_cast<int>(q.size()) + 1;
  for (std::size_t l = 0; l < q.size(); ++l)
    if (rs.reach_from[static_cast<std::size_t>(q[l])]) {
      w.upper = static_cast<int>(l) + 1;
      break;
    }
  w.effective_upper = w.upper;
  // An unchanged path of length xi >= cmax survives any insertion after tau_k.
  if (reduction_active && rs.xi >= cmax) w.effective_upper = std::min(w.upper, rs.tau[static_cast<std::size_t>(k)]);
  return w;
}

/// Reinserts the removed operation at position gamma of machine k.
/// Throws CycleError when gamma is outside the cycle-free window.
inline Schedule insert_op(const Instance& inst, const ReducedState& rs, int k, int gamma) {
  const int v = rs.removed;
  if (!inst.can_process(v, k)) throw Error("insert_op: machine " + std::to_string(k) + " cannot process operation " + std::to_string(v));
  const auto& qminus = rs.sequences[static_cast<std::size_t>(k)];
  if (gamma < 1 || gamma > static_cast<int>(qminus.size()) + 1) throw Error("insert_op: position out of range");

  Schedule s;
  s.assignment = rs.assignment;
  s.sequences = rs.sequences;
  s.position = rs.position;
  s.actual_times = rs.actual_times;
  s.graph = rs.graph;

  auto& q = s.sequences[static_cast<std::size_t>(k)];
  const auto idx = static_cast<std::size_t>(gamma - 1);
  const int before = idx > 0 ? q[idx - 1] : 0;
  const int after = idx < q.size() ? q[idx] : 0;
  if (before && after) s.graph.remove_arc(before, after);
  if (before) s.graph.add_arc(before, v);
  if (after) s.graph.add_arc(v, after);
  q.insert(q.begin() + static_cast<std::ptrdiff_t>(idx), v);
  s.assignment[static_cast<std::size_t>(v)] = k;
  for (std::size_t l = idx; l < q.size(); ++l) {
    const int op = q[l];
    const int pos = static_cast<int>(l) + 1;
    s.position[static_cast<std::size_t>(op)] = pos;
    s.actual_times[static_cast<std::size_t>(op)] = LearningFn::actual_time(inst.processing_time(op, k), pos, inst.learning_rate);
  }
  refresh_critical_path(s);
  return s;
}

enum class NeighborhoodMode { full, reduced, cropped };

inline std::string_view to_string(NeighborhoodMode mode) {
  switch (mode) {
    case NeighborhoodMode::full: return "full";
    case NeighborhoodMode::reduced: return "reduced";
    case NeighborhoodMode::cropped: return "cropped";
  }
  return "?";
}

inline NeighborhoodMode parse_neighborhood(std::string_view name) {
  if (name == "full") return NeighborhoodMode::full;
  if (name == "reduced" || name == "rn" || name == "RN") return NeighborhoodMode::reduced;
  if (name == "cropped" || name == "cn" || name == "CN") return NeighborhoodMode::cropped;
  throw Error("unknown neighborhood '" + std::string(name) + "'");
}

/// Relocation of operation v to position gamma of machine k.
struct Move {
  int op = 0;
  int machine = 0;
  int position = 0;

  friend bool operator==(const Move&, const Move&) = default;
  friend auto operator<=>(const Move&, const Move&) = default;
};

struct Neighbor {
  Move move;
  Time makespan = 0;

  friend bool operator==(const Neighbor&, const Neighbor&) = default;
};

/// Operations whose removal is scanned in a given mode, ascending.
inline std::vector<int> scanned_operations(const Schedule& sched, NeighborhoodMode mode) {
  if (mode == NeighborhoodMode::cropped) {
    auto ops = sched.critical_operations();
    std::sort(ops.begin(), ops.end());
    return ops;
  }
  std::vector<int> ops(static_cast<std::size_t>(sched.num_operations()));
  for (std::size_t i = 0; i < ops.size(); ++i) ops[i] = static_cast<int>(i) + 1;
  return ops;
}

/// Visits every neighbor of `sched` in (operation, machine, position) order.
/// Reinserting an operation at the slot it came from is not a neighbor.
/// `visit(const Move&, const Schedule&)` returns false to stop the scan.
/// Returns the number of neighbors evaluated.
template <class Visitor>
std::int64_t for_each_neighbor(const Instance& inst, const Schedule& sched, NeighborhoodMode mode, Visitor&& visit) {
  const bool reduce = mode != NeighborhoodMode::full;
  std::int64_t evaluated = 0;
  for (int v : scanned_operations(sched, mode)) {
    const ReducedState rs = remove_op(inst, sched, v);
    for (int k : inst.machines_for(v)) {
      const InsertionWindow w = feasible_window(rs, k, reduce, sched.makespan);
      for (int gamma = w.first(); gamma <= w.effective_upper; ++gamma) {
        if (k == rs.old_machine && gamma == rs.old_position) continue;
        const Schedule next = insert_op(inst, rs, k, gamma);
        ++evaluated;
        if (!visit(Move{v, k, gamma}, next)) return evaluated;
      }
    }
  }
  return evaluated;
}

inline std::vector<Neighbor> enumerate_neighbors(const Instance& inst, const Schedule& sched, NeighborhoodMode mode) {
  std::vector<Neighbor> out;
  for_each_neighbor(inst, sched, mode, [&](const Move& m, const Schedule& s) {
    out.push_back({m, s.makespan});
    return true;
  });
  return out;
}

/// Applies a single relocation to a schedule.
inline Schedule apply_move(const Instance& inst, const Schedule& sched, const Move& m) {
  return insert_op(inst, remove_op(inst, sched, m.op), m.machine, m.position);
}

}  // namespace fjs
