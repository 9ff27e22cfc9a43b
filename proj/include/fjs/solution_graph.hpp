#pragma once

#include <algorithm>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "fjs/error.hpp"
#include "fjs/instance.hpp"
#include "fjs/learning.hpp"

namespace fjs {

// Vertex numbering of a solution graph over n operations:
//   0 = source s, 1..n = operations, n + 1 = sink t.
inline constexpr int kSource = 0;
inline constexpr int sink_vertex(int num_operations) { return num_operations + 1; }

inline constexpr Time kMinusInfinity = std::numeric_limits<Time>::min() / 4;

/// Directed multigraph with per-vertex successor lists kept in ascending order.
/// Parallel arcs are allowed: a machine arc may duplicate a precedence arc, and
/// removing the machine arc must leave the precedence arc in place.
class Digraph {
 public:
  Digraph() = default;
  explicit Digraph(int num_vertices) : succ_(static_cast<std::size_t>(num_vertices)) {}

  int num_vertices() const noexcept { return static_cast<int>(succ_.size()); }

  std::span<const int> successors(int v) const { return succ_[static_cast<std::size_t>(v)]; }

  void add_arc(int from, int to) {
    auto& s = succ_[static_cast<std::size_t>(from)];
    s.insert(std::upper_bound(s.begin(), s.end(), to), to);
  }

  /// Removes one copy of (from, to); returns false when absent.
  bool remove_arc(int from, int to) {
    auto& s = succ_[static_cast<std::size_t>(from)];
    auto it = std::lower_bound(s.begin(), s.end(), to);
    if (it == s.end() || *it != to) return false;
    s.erase(it);
    return true;
  }

  bool has_arc(int from, int to) const {
    const auto& s = succ_[static_cast<std::size_t>(from)];
    return std::binary_search(s.begin(), s.end(), to);
  }

  std::size_t num_arcs() const {
    std::size_t n = 0;
    for (const auto& s : succ_) n += s.size();
    return n;
  }

  friend bool operator==(const Digraph&, const Digraph&) = default;

 private:
  std::vector<std::vector<int>> succ_;
};

/// Precedence arcs plus dummy arcs s -> sources and sinks -> t. No machine arcs.
inline Digraph precedence_graph(const Instance& inst) {
  const int n = inst.num_operations;
  Digraph g(n + 2);
  std::vector<char> has_pred(static_cast<std::size_t>(n) + 1, 0), has_succ(static_cast<std::size_t>(n) + 1, 0);
  for (const Arc& a : inst.precedence_arcs) {
    g.add_arc(a.from, a.to);
    has_succ[a.from] = 1;
    has_pred[a.to] = 1;
  }
  for (int i = 1; i <= n; ++i) {
    if (!has_pred[i]) g.add_arc(kSource, i);
    if (!has_succ[i]) g.add_arc(i, sink_vertex(n));
  }
  return g;
}

struct TopologicalResult {
  /// Vertices reachable from the start vertex, in topological order.
  std::vector<int> order;
  /// Indexed by vertex; set for vertices with a path to the target (target included).
  /// Empty when no target was requested.
  std::vector<char> reaches_target;
};

/// Depth-first topological sort from `start` that also marks every vertex with
/// a path to `target`. A vertex is marked once any of its successors is marked
/// and is prepended to the order when it finishes. Iterative; successors are
/// expanded in ascending id. Throws CycleError on a back arc.
inline TopologicalResult topological_sort_plus(const Digraph& g, int start, std::optional<int> target = std::nullopt) {
  const int nv = g.num_vertices();
  enum : char { kWhite, kGray, kBlack };
  std::vector<char> color(static_cast<std::size_t>(nv), kWhite);
  TopologicalResult res;
  if (target) {
    res.reaches_target.assign(static_cast<std::size_t>(nv), 0);
    res.reaches_target[static_cast<std::size_t>(*target)] = 1;
  }
  std::vector<int> post;
  post.reserve(static_cast<std::size_t>(nv));
  // (vertex, index of next successor to expand)
  std::vector<std::pair<int, std::size_t>> stack;
  stack.emplace_back(start, 0);
  color[static_cast<std::size_t>(start)] = kGray;
  while (!stack.empty()) {
    auto& [v, next] = stack.back();
    const auto succ = g.successors(v);
    if (next < succ.size()) {
      const int j = succ[next++];
      if (color[static_cast<std::size_t>(j)] == kGray)
        throw CycleError("solution graph has a cycle through vertex " + std::to_string(j));
      if (color[static_cast<std::size_t>(j)] == kWhite) {
        color[static_cast<std::size_t>(j)] = kGray;
        stack.emplace_back(j, 0);
      }
      continue;
    }
    if (target && !res.reaches_target[static_cast<std::size_t>(v)]) {
      for (int j : succ)
        if (res.reaches_target[static_cast<std::size_t>(j)]) {
          res.reaches_target[static_cast<std::size_t>(v)] = 1;
          break;
        }
    }
    color[static_cast<std::size_t>(v)] = kBlack;
    post.push_back(v);
    stack.pop_back();
  }
  res.order.assign(post.rbegin(), post.rend());
  return res;
}

/// Vertices reachable from v (v included), as a per-vertex flag vector.
inline std::vector<char> reachable_from(const Digraph& g, int v) {
  std::vector<char> seen(static_cast<std::size_t>(g.num_vertices()), 0);
  std::vector<int> stack{v};
  seen[static_cast<std::size_t>(v)] = 1;
  while (!stack.empty()) {
    const int u = stack.back();
    stack.pop_back();
    for (int j : g.successors(u))
      if (!seen[static_cast<std::size_t>(j)]) {
        seen[static_cast<std::size_t>(j)] = 1;
        stack.push_back(j);
      }
  }
  return seen;
}

struct CriticalPathResult {
  /// Vertex sequence s, ..., t.
  std::vector<int> path;
  Time length = 0;
  /// tau[k] for machine k (slot 0 unused): position in sequences[k] of the last
  /// operation on the path, 0 if none.
  std::vector<int> tau;
  /// Longest distance from s to each vertex (the vertex's earliest start).
  std::vector<Time> head;
};

/// Longest s-t path over vertex weights by relaxation along `order`.
/// `assignment`/`position` are per vertex (0 for unassigned vertices).
inline CriticalPathResult critical_path(const Digraph& g, std::span<const int> order, std::span<const Time> weights,
                                        std::span<const int> assignment, std::span<const int> position,
                                        int num_machines) {
  const int nv = g.num_vertices();
  const int t = nv - 1;
  CriticalPathResult res;
  res.head.assign(static_cast<std::size_t>(nv), kMinusInfinity);
  std::vector<int> pred(static_cast<std::size_t>(nv), -1);
  res.head[kSource] = 0;
  for (int i : order) {
    const Time di = res.head[static_cast<std::size_t>(i)];
    if (di == kMinusInfinity) continue;
    const Time through = di + weights[static_cast<std::size_t>(i)];
    for (int j : g.successors(i)) {
      if (res.head[static_cast<std::size_t>(j)] < through) {
        res.head[static_cast<std::size_t>(j)] = through;
        pred[static_cast<std::size_t>(j)] = i;
      }
    }
  }
  res.length = res.head[static_cast<std::size_t>(t)];
  res.tau.assign(static_cast<std::size_t>(num_machines) + 1, 0);
  std::vector<int> reversed{t};
  for (int i = pred[static_cast<std::size_t>(t)]; i != kSource && i != -1; i = pred[static_cast<std::size_t>(i)]) {
    const int k = assignment[static_cast<std::size_t>(i)];
    if (k != 0 && res.tau[static_cast<std::size_t>(k)] == 0) res.tau[static_cast<std::size_t>(k)] = position[static_cast<std::size_t>(i)];
    reversed.push_back(i);
  }
  reversed.push_back(kSource);
  res.path.assign(reversed.rbegin(), reversed.rend());
  return res;
}

/// A feasible solution together with its solution graph and critical path.
/// Per-vertex vectors have size n + 2; per-machine vectors have size m + 1
/// with slot 0 unused.
struct Schedule {
  std::vector<int> assignment;
  std::vector<std::vector<int>> sequences;
  /// 1-based position of each operation in its machine sequence (0 for s, t).
  std::vector<int> position;
  std::vector<Time> actual_times;
  Digraph graph;
  std::vector<int> critical_path;
  std::vector<int> tau;
  Time makespan = 0;

  int num_operations() const { return static_cast<int>(assignment.size()) - 2; }
  int num_machines() const { return static_cast<int>(sequences.size()) - 1; }

  /// Operations on the critical path, s and t excluded.
  std::vector<int> critical_operations() const {
    if (critical_path.size() < 2) return {};
    return {critical_path.begin() + 1, critical_path.end() - 1};
  }

  /// Assignment and sequences are the decision; everything else is derived.
  bool same_decision(const Schedule& other) const {
    return assignment == other.assignment && sequences == other.sequences;
  }
};

/// Recomputes the critical path, tau and makespan of a schedule whose graph,
/// positions and times are already set. Throws CycleError.
inline void refresh_critical_path(Schedule& s) {
  const auto topo = topological_sort_plus(s.graph, kSource);
  auto cp = critical_path(s.graph, topo.order, s.actual_times, s.assignment, s.position, s.num_machines());
  s.critical_path = std::move(cp.path);
  s.tau = std::move(cp.tau);
  s.makespan = cp.length;
}

/// Builds the solution graph for machine sequences (machine ids are indices
/// 1..m of `sequences`; slot 0 is ignored and may be empty). The assignment
/// is implied by the sequences. Throws Error on an inconsistent or ineligible
/// assignment and CycleError when the sequencing is infeasible.
inline Schedule build_schedule(const Instance& inst, std::vector<std::vector<int>> sequences) {
  const int n = inst.num_operations;
  const int m = inst.num_machines;
  if (static_cast<int>(sequences.size()) != m + 1) throw Error("expected one sequence per machine");
  Schedule s;
  s.assignment.assign(static_cast<std::size_t>(n) + 2, 0);
  s.position.assign(static_cast<std::size_t>(n) + 2, 0);
  s.actual_times.assign(static_cast<std::size_t>(n) + 2, 0);
  s.graph = precedence_graph(inst);
  sequences[0].clear();
  for (int k = 1; k <= m; ++k) {
    const auto& q = sequences[static_cast<std::size_t>(k)];
    for (std::size_t idx = 0; idx < q.size(); ++idx) {
      const int op = q[idx];
      if (op < 1 || op > n) throw Error("sequence of machine " + std::to_string(k) + " holds unknown operation " + std::to_string(op));
      if (s.assignment[static_cast<std::size_t>(op)] != 0) throw Error("operation " + std::to_string(op) + " is sequenced twice");
      if (!inst.can_process(op, k))
        throw Error("operation " + std::to_string(op) + " assigned to ineligible machine " + std::to_string(k));
      const int pos = static_cast<int>(idx) + 1;
      s.assignment[static_cast<std::size_t>(op)] = k;
      s.position[static_cast<std::size_t>(op)] = pos;
      s.actual_times[static_cast<std::size_t>(op)] =
          LearningFn::actual_time(inst.processing_time(op, k), pos, inst.learning_rate);
      if (idx > 0) s.graph.add_arc(q[idx - 1], op);
    }
  }
  for (int i = 1; i <= n; ++i)
    if (s.assignment[static_cast<std::size_t>(i)] == 0) throw Error("operation " + std::to_string(i) + " is not sequenced");
  s.sequences = std::move(sequences);
  refresh_critical_path(s);
  return s;
}

/// Same as above with an explicit assignment, which must agree with the sequences.
inline Schedule build_schedule(const Instance& inst, const std::vector<int>& assignment,
                               std::vector<std::vector<int>> sequences) {
  Schedule s = build_schedule(inst, std::move(sequences));
  const int n = inst.num_operations;
  if (static_cast<int>(assignment.size()) != n + 2 && static_cast<int>(assignment.size()) != n)
    throw Error("assignment size does not match the operation count");
  const std::size_t offset = assignment.size() == static_cast<std::size_t>(n) ? 1 : 0;
  for (int i = 1; i <= n; ++i)
    if (assignment[static_cast<std::size_t>(i) - offset] != s.assignment[static_cast<std::size_t>(i)])
      throw Error("assignment of operation " + std::to_string(i) + " disagrees with the machine sequences");
  return s;
}

struct ScheduleViolation {
  std::string message;
  int operation = 0;
};

/// Checks every structural invariant of a schedule against its instance.
inline std::vector<ScheduleViolation> validate_schedule(const Instance& inst, const Schedule& s) {
  std::vector<ScheduleViolation> out;
  const int n = inst.num_operations;
  const int m = inst.num_machines;
  const auto nv = static_cast<std::size_t>(n) + 2;
  if (s.assignment.size() != nv || s.position.size() != nv || s.actual_times.size() != nv ||
      s.sequences.size() != static_cast<std::size_t>(m) + 1 || s.graph.num_vertices() != static_cast<int>(nv)) {
    out.push_back({"schedule dimensions do not match the instance"});
    return out;
  }
  std::vector<int> seen(nv, 0);
  for (int k = 1; k <= m; ++k) {
    const auto& q = s.sequences[static_cast<std::size_t>(k)];
    for (std::size_t idx = 0; idx < q.size(); ++idx) {
      const int op = q[idx];
      if (op < 1 || op > n) {
        out.push_back({"machine " + std::to_string(k) + " sequences unknown operation " + std::to_string(op)});
        continue;
      }
      ++seen[static_cast<std::size_t>(op)];
      if (s.assignment[static_cast<std::size_t>(op)] != k)
        out.push_back({"operation " + std::to_string(op) + " sits on machine " + std::to_string(k) + " but is assigned elsewhere", op});
      if (s.position[static_cast<std::size_t>(op)] != static_cast<int>(idx) + 1)
        out.push_back({"operation " + std::to_string(op) + " has a stale position", op});
      if (!inst.can_process(op, k)) {
        out.push_back({"operation " + std::to_string(op) + " is on ineligible machine " + std::to_string(k), op});
        continue;
      }
      const Time expect = LearningFn::actual_time(inst.processing_time(op, k), static_cast<int>(idx) + 1, inst.learning_rate);
      if (s.actual_times[static_cast<std::size_t>(op)] != expect)
        out.push_back({"operation " + std::to_string(op) + " has actual time " + std::to_string(s.actual_times[static_cast<std::size_t>(op)]) +
                           ", expected " + std::to_string(expect),
                       op});
    }
  }
  for (int i = 1; i <= n; ++i) {
    if (seen[static_cast<std::size_t>(i)] == 0) out.push_back({"operation " + std::to_string(i) + " is missing from every machine", i});
    if (seen[static_cast<std::size_t>(i)] > 1) out.push_back({"operation " + std::to_string(i) + " appears more than once", i});
  }
  if (s.actual_times[kSource] != 0 || s.actual_times[nv - 1] != 0) out.push_back({"dummy vertices must have zero weight"});
  if (!out.empty()) return out;

  Digraph expected = precedence_graph(inst);
  for (int k = 1; k <= m; ++k) {
    const auto& q = s.sequences[static_cast<std::size_t>(k)];
    for (std::size_t idx = 1; idx < q.size(); ++idx) expected.add_arc(q[idx - 1], q[idx]);
  }
  if (!(expected == s.graph)) out.push_back({"graph arcs differ from precedence, dummy and machine arcs"});

  std::vector<int> order;
  try {
    order = topological_sort_plus(expected, kSource).order;
  } catch (const CycleError&) {
    out.push_back({"solution graph is cyclic"});
    return out;
  }
  const auto cp = critical_path(expected, order, s.actual_times, s.assignment, s.position, m);
  if (cp.length != s.makespan)
    out.push_back({"makespan " + std::to_string(s.makespan) + " differs from longest path " + std::to_string(cp.length)});
  const auto& p = s.critical_path;
  if (p.size() < 2 || p.front() != kSource || p.back() != static_cast<int>(nv) - 1) {
    out.push_back({"critical path does not run from s to t"});
  } else {
    Time len = 0;
    for (std::size_t i = 0; i + 1 < p.size(); ++i) {
      if (!expected.has_arc(p[i], p[i + 1])) {
        out.push_back({"critical path uses a missing arc"});
        break;
      }
      len += s.actual_times[static_cast<std::size_t>(p[i])];
    }
    if (len != s.makespan) out.push_back({"critical path length differs from makespan"});
  }
  return out;
}

struct OperationTiming {
  int operation = 0;
  int machine = 0;
  int position = 0;
  Time actual_time = 0;
  Time start = 0;
  Time completion = 0;
};

/// Earliest start/completion of every operation implied by the solution graph.
inline std::vector<OperationTiming> operation_timings(const Schedule& s) {
  const auto topo = topological_sort_plus(s.graph, kSource);
  const auto cp = critical_path(s.graph, topo.order, s.actual_times, s.assignment, s.position, s.num_machines());
  std::vector<OperationTiming> out;
  for (int i = 1; i <= s.num_operations(); ++i) {
    const auto idx = static_cast<std::size_t>(i);
    out.push_back({i, s.assignment[idx], s.position[idx], s.actual_times[idx], cp.head[idx], cp.head[idx] + s.actual_times[idx]});
  }
  return out;
}

}  // namespace fjs
