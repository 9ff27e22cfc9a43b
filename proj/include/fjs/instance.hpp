#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <iomanip>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "fjs/error.hpp"

namespace fjs {

struct Arc {
  int from = 0;
  int to = 0;

  friend bool operator==(const Arc&, const Arc&) = default;
  friend auto operator<=>(const Arc&, const Arc&) = default;
};

inline constexpr Time kIneligible = -1;

/// Problem data. Operation and machine ids are 1-based in every accessor;
/// the backing vectors are 0-based.
struct Instance {
  int num_operations = 0;
  int num_machines = 0;
  double learning_rate = 1.0;
  /// eligible[i-1]: ascending machine ids able to process operation i.
  std::vector<std::vector<int>> eligible;
  /// std_time[i-1][k-1]: standard time, kIneligible when k is not in eligible[i-1].
  std::vector<std::vector<Time>> std_time;
  /// Sorted, duplicate-free precedence arcs.
  std::vector<Arc> precedence_arcs;

  const std::vector<int>& machines_for(int op) const { return eligible[op - 1]; }
  Time processing_time(int op, int machine) const { return std_time[op - 1][machine - 1]; }
  bool can_process(int op, int machine) const {
    return machine >= 1 && machine <= num_machines && std_time[op - 1][machine - 1] != kIneligible;
  }

  /// Empty instance with n operations and m machines and no eligibility yet.
  static Instance with_shape(int n, int m, double alpha) {
    Instance inst;
    inst.num_operations = n;
    inst.num_machines = m;
    inst.learning_rate = alpha;
    inst.eligible.assign(static_cast<std::size_t>(n), {});
    inst.std_time.assign(static_cast<std::size_t>(n), std::vector<Time>(static_cast<std::size_t>(m), kIneligible));
    return inst;
  }

  void set_time(int op, int machine, Time p) {
    auto& row = eligible[op - 1];
    if (std_time[op - 1][machine - 1] == kIneligible) row.insert(std::upper_bound(row.begin(), row.end(), machine), machine);
    std_time[op - 1][machine - 1] = p;
  }

  void add_arc(int from, int to) {
    const Arc a{from, to};
    auto it = std::lower_bound(precedence_arcs.begin(), precedence_arcs.end(), a);
    if (it == precedence_arcs.end() || *it != a) precedence_arcs.insert(it, a);
  }

  friend bool operator==(const Instance&, const Instance&) = default;
};

/// Per-operation precedence adjacency, indexed by 1-based operation id (slot 0 unused).
struct PrecedenceLists {
  std::vector<std::vector<int>> successors;
  std::vector<std::vector<int>> predecessors;
};

inline PrecedenceLists precedence_lists(const Instance& inst) {
  PrecedenceLists lists;
  lists.successors.resize(static_cast<std::size_t>(inst.num_operations) + 1);
  lists.predecessors.resize(static_cast<std::size_t>(inst.num_operations) + 1);
  for (const Arc& a : inst.precedence_arcs) {
    lists.successors[a.from].push_back(a.to);
    lists.predecessors[a.to].push_back(a.from);
  }
  for (auto& s : lists.successors) std::sort(s.begin(), s.end());
  for (auto& p : lists.predecessors) std::sort(p.begin(), p.end());
  return lists;
}

struct InstanceViolation {
  std::string message;
  int operation = 0;  // 0 when the violation is not tied to one operation
};

namespace detail {

// Kahn's algorithm; returns false when arcs (with valid endpoints) contain a cycle.
inline bool arcs_acyclic(int n, const std::vector<Arc>& arcs) {
  std::vector<std::vector<int>> succ(static_cast<std::size_t>(n) + 1);
  std::vector<int> indeg(static_cast<std::size_t>(n) + 1, 0);
  for (const Arc& a : arcs) {
    if (a.from < 1 || a.from > n || a.to < 1 || a.to > n) continue;
    succ[a.from].push_back(a.to);
    ++indeg[a.to];
  }
  std::vector<int> ready;
  for (int i = 1; i <= n; ++i)
    if (indeg[i] == 0) ready.push_back(i);
  int seen = 0;
  while (!ready.empty()) {
    const int i = ready.back();
    ready.pop_back();
    ++seen;
    for (int j : succ[i])
      if (--indeg[j] == 0) ready.push_back(j);
  }
  return seen == n;
}

}  // namespace detail

inline std::vector<InstanceViolation> validate_instance(const Instance& inst) {
  std::vector<InstanceViolation> out;
  const int n = inst.num_operations;
  const int m = inst.num_machines;
  if (n < 1) out.push_back({"instance has no operations"});
  if (m < 1) out.push_back({"instance has no machines"});
  if (!(inst.learning_rate > 0.0) || !std::isfinite(inst.learning_rate))
    out.push_back({"learning_rate must be positive and finite"});
  if (static_cast<int>(inst.eligible.size()) != n || static_cast<int>(inst.std_time.size()) != n) {
    out.push_back({"eligibility/time tables do not match the operation count"});
    return out;
  }
  for (int i = 1; i <= n; ++i) {
    const auto& elig = inst.eligible[i - 1];
    const auto& times = inst.std_time[i - 1];
    if (elig.empty()) out.push_back({"operation " + std::to_string(i) + " has an empty eligibility set", i});
    if (static_cast<int>(times.size()) != m) {
      out.push_back({"operation " + std::to_string(i) + " time row has wrong length", i});
      continue;
    }
    if (!std::is_sorted(elig.begin(), elig.end()) || std::adjacent_find(elig.begin(), elig.end()) != elig.end())
      out.push_back({"operation " + std::to_string(i) + " eligibility list is not strictly ascending", i});
    std::vector<char> listed(static_cast<std::size_t>(m) + 1, 0);
    for (int k : elig) {
      if (k < 1 || k > m) {
        out.push_back({"operation " + std::to_string(i) + " lists unknown machine " + std::to_string(k), i});
        continue;
      }
      listed[k] = 1;
      if (times[k - 1] == kIneligible)
        out.push_back({"operation " + std::to_string(i) + " has no time on eligible machine " + std::to_string(k), i});
      else if (times[k - 1] < 0)
        out.push_back({"operation " + std::to_string(i) + " has a negative time on machine " + std::to_string(k), i});
    }
    for (int k = 1; k <= m; ++k)
      if (!listed[k] && times[k - 1] != kIneligible)
        out.push_back({"operation " + std::to_string(i) + " has a time on non-eligible machine " + std::to_string(k), i});
  }
  for (const Arc& a : inst.precedence_arcs) {
    if (a.from < 1 || a.from > n || a.to < 1 || a.to > n)
      out.push_back({"arc (" + std::to_string(a.from) + "," + std::to_string(a.to) + ") references an unknown operation"});
    else if (a.from == a.to)
      out.push_back({"arc (" + std::to_string(a.from) + "," + std::to_string(a.to) + ") is a self-loop", a.from});
  }
  if (!detail::arcs_acyclic(n, inst.precedence_arcs)) out.push_back({"precedence arcs contain a cycle"});
  return out;
}

namespace detail {

class LineReader {
 public:
  explicit LineReader(std::string_view text) : text_(text) {}

  /// Next non-blank line with '#' comments stripped, split into tokens.
  std::optional<std::vector<std::string>> next() {
    while (pos_ < text_.size()) {
      auto end = text_.find('\n', pos_);
      if (end == std::string_view::npos) end = text_.size();
      std::string_view line = text_.substr(pos_, end - pos_);
      pos_ = end + 1;
      ++line_;
      if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
      std::vector<std::string> tokens;
      std::istringstream in{std::string(line)};
      for (std::string tok; in >> tok;) tokens.push_back(std::move(tok));
      if (!tokens.empty()) return tokens;
    }
    return std::nullopt;
  }

  std::vector<std::string> require(const char* what) {
    auto tokens = next();
    if (!tokens) throw ParseError(std::string("unexpected end of input, expected ") + what, line_ + 1);
    return *tokens;
  }

  int line() const noexcept { return line_; }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
  int line_ = 0;
};

inline std::int64_t to_int(const std::string& tok, int line, const char* what) {
  std::size_t used = 0;
  std::int64_t v = 0;
  try {
    v = std::stoll(tok, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != tok.size() || tok.empty()) throw ParseError(std::string("expected integer ") + what + ", got '" + tok + "'", line);
  return v;
}

inline double to_real(const std::string& tok, int line, const char* what) {
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(tok, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != tok.size() || tok.empty()) throw ParseError(std::string("expected number ") + what + ", got '" + tok + "'", line);
  return v;
}

inline void raise_first(const std::vector<InstanceViolation>& violations, int line) {
  if (!violations.empty()) {
    if (violations.front().message.find("cycle") != std::string::npos) throw CycleError("line " + std::to_string(line) + ": " + violations.front().message);
    throw ParseError(violations.front().message, line);
  }
}

}  // namespace detail

/// Parses the native format:
///   n m [alpha]
///   per operation: cnt k1 p1 ... kcnt pcnt
///   a
///   per arc: i j
/// A missing alpha must be supplied through `alpha_override`; a present
/// override replaces the file value.
inline Instance parse_instance(std::string_view text, std::optional<double> alpha_override = std::nullopt) {
  detail::LineReader reader(text);
  auto header = reader.require("header");
  int line = reader.line();
  if (header.size() != 2 && header.size() != 3) throw ParseError("header must be 'operations machines [alpha]'", line);
  const auto n = detail::to_int(header[0], line, "operation count");
  const auto m = detail::to_int(header[1], line, "machine count");
  if (n < 1 || m < 1) throw ParseError("operation and machine counts must be positive", line);
  std::optional<double> alpha;
  if (header.size() == 3) alpha = detail::to_real(header[2], line, "learning rate");
  if (alpha_override) alpha = alpha_override;
  if (!alpha) throw ParseError("learning rate missing from header and not overridden", line);
  if (!(*alpha > 0.0) || !std::isfinite(*alpha)) throw ParseError("learning rate must be positive", line);

  Instance inst = Instance::with_shape(static_cast<int>(n), static_cast<int>(m), *alpha);
  for (int i = 1; i <= n; ++i) {
    auto tok = reader.require("operation line");
    line = reader.line();
    const auto cnt = detail::to_int(tok[0], line, "eligible machine count");
    if (cnt < 1) throw ParseError("operation " + std::to_string(i) + " has an empty eligibility set", line);
    if (tok.size() != static_cast<std::size_t>(1 + 2 * cnt))
      throw ParseError("operation " + std::to_string(i) + " expects " + std::to_string(cnt) + " (machine, time) pairs", line);
    for (std::int64_t a = 0; a < cnt; ++a) {
      const auto k = detail::to_int(tok[1 + 2 * a], line, "machine id");
      const auto p = detail::to_int(tok[2 + 2 * a], line, "processing time");
      if (k < 1 || k > m) throw ParseError("operation " + std::to_string(i) + " references unknown machine " + std::to_string(k), line);
      if (p < 0) throw ParseError("operation " + std::to_string(i) + " has negative processing time", line);
      if (inst.can_process(i, static_cast<int>(k)))
        throw ParseError("operation " + std::to_string(i) + " lists machine " + std::to_string(k) + " twice", line);
      inst.set_time(i, static_cast<int>(k), p);
    }
  }
  auto count_tok = reader.require("arc count");
  line = reader.line();
  if (count_tok.size() != 1) throw ParseError("arc count line must hold one integer", line);
  const auto arcs = detail::to_int(count_tok[0], line, "arc count");
  if (arcs < 0) throw ParseError("arc count must be nonnegative", line);
  for (std::int64_t a = 0; a < arcs; ++a) {
    auto tok = reader.require("arc line");
    line = reader.line();
    if (tok.size() != 2) throw ParseError("arc line must be 'from to'", line);
    const auto from = detail::to_int(tok[0], line, "arc tail");
    const auto to = detail::to_int(tok[1], line, "arc head");
    if (from < 1 || from > n || to < 1 || to > n) throw ParseError("arc references an unknown operation", line);
    if (from == to) throw CycleError("line " + std::to_string(line) + ": self-loop on operation " + std::to_string(from));
    inst.add_arc(static_cast<int>(from), static_cast<int>(to));
  }
  if (auto extra = reader.next()) throw ParseError("trailing content after arc list", reader.line());
  detail::raise_first(validate_instance(inst), reader.line());
  return inst;
}

inline std::string write_instance(const Instance& inst) {
  std::ostringstream out;
  out << inst.num_operations << ' ' << inst.num_machines << ' '
      << std::setprecision(std::numeric_limits<double>::max_digits10) << inst.learning_rate << '\n';
  for (int i = 1; i <= inst.num_operations; ++i) {
    const auto& elig = inst.machines_for(i);
    out << elig.size();
    for (int k : elig) out << ' ' << k << ' ' << inst.processing_time(i, k);
    out << '\n';
  }
  out << inst.precedence_arcs.size() << '\n';
  for (const Arc& a : inst.precedence_arcs) out << a.from << ' ' << a.to << '\n';
  return out.str();
}

/// Imports a Brandimarte-layout FJSP file: header "jobs machines [avg]", then one
/// line per job: "ops  (cnt  (machine time){cnt}){ops}". Operations are numbered
/// job by job and chained within each job.
inline Instance import_classical_fjs(std::string_view text, double alpha) {
  detail::LineReader reader(text);
  auto header = reader.require("header");
  int line = reader.line();
  if (header.size() < 2) throw ParseError("header must start with 'jobs machines'", line);
  const auto jobs = detail::to_int(header[0], line, "job count");
  const auto m = detail::to_int(header[1], line, "machine count");
  if (jobs < 1 || m < 1) throw ParseError("job and machine counts must be positive", line);

  struct Op {
    std::vector<std::pair<int, Time>> alternatives;
  };
  std::vector<std::vector<Op>> per_job;
  for (std::int64_t j = 0; j < jobs; ++j) {
    auto tok = reader.require("job line");
    line = reader.line();
    std::size_t at = 0;
    auto take = [&](const char* what) {
      if (at >= tok.size()) throw ParseError(std::string("job line ended early, expected ") + what, line);
      return detail::to_int(tok[at++], line, what);
    };
    const auto ops = take("operation count");
    if (ops < 1) throw ParseError("job " + std::to_string(j + 1) + " has no operations", line);
    std::vector<Op> job;
    for (std::int64_t o = 0; o < ops; ++o) {
      const auto cnt = take("alternative count");
      if (cnt < 1)
        throw ParseError("job " + std::to_string(j + 1) + " operation " + std::to_string(o + 1) + " has zero alternatives", line);
      Op op;
      for (std::int64_t a = 0; a < cnt; ++a) {
        const auto k = take("machine id");
        const auto p = take("processing time");
        if (k < 1 || k > m) throw ParseError("unknown machine " + std::to_string(k), line);
        if (p < 0) throw ParseError("negative processing time", line);
        op.alternatives.emplace_back(static_cast<int>(k), p);
      }
      job.push_back(std::move(op));
    }
    if (at != tok.size()) throw ParseError("trailing tokens on job line", line);
    per_job.push_back(std::move(job));
  }

  int n = 0;
  for (const auto& job : per_job) n += static_cast<int>(job.size());
  Instance inst = Instance::with_shape(n, static_cast<int>(m), alpha);
  int id = 0;
  for (const auto& job : per_job) {
    for (std::size_t o = 0; o < job.size(); ++o) {
      ++id;
      for (auto [k, p] : job[o].alternatives) {
        // Duplicate machine entries keep the shortest time.
        if (!inst.can_process(id, k) || p < inst.processing_time(id, k)) inst.set_time(id, k, p);
      }
      if (o > 0) inst.add_arc(id - 1, id);
    }
  }
  detail::raise_first(validate_instance(inst), reader.line());
  return inst;
}

}  // namespace fjs
