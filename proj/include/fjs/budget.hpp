#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <string_view>

#include "fjs/error.hpp"

namespace fjs {

class Stopwatch {
 public:
  using Clock = std::chrono::steady_clock;

  Stopwatch() : start_(Clock::now()) {}

  double seconds() const { return std::chrono::duration<double>(Clock::now() - start_).count(); }
  Clock::time_point started() const { return start_; }

 private:
  Clock::time_point start_;
};

/// A wall-clock cut-off. Default-constructed deadlines never pass.
class Deadline {
 public:
  Deadline() = default;
  Deadline(const Stopwatch& watch, double seconds)
      : at_(watch.started() + std::chrono::duration_cast<Stopwatch::Clock::duration>(std::chrono::duration<double>(seconds))),
        set_(true) {}

  static Deadline after(double seconds) { return Deadline(Stopwatch{}, seconds); }

  bool passed() const { return set_ && Stopwatch::Clock::now() >= at_; }
  bool unlimited() const { return !set_; }

 private:
  Stopwatch::Clock::time_point at_{};
  bool set_ = false;
};

/// Stopping rules of a metaheuristic run; any rule that is set can end it.
struct Budget {
  std::optional<double> time_limit;             // wall-clock seconds
  std::optional<std::int64_t> max_iterations;   // outer iterations; deterministic mode
  std::optional<double> stall_limit;            // seconds without incumbent improvement
  std::optional<Time> target_makespan;          // stop once the incumbent is this good
  int check_interval = 64;                      // candidate evaluations between clock reads
};

enum class StopReason { none, time_limit, iteration_limit, stall, target_reached };

inline std::string_view to_string(StopReason r) {
  switch (r) {
    case StopReason::none: return "none";
    case StopReason::time_limit: return "time";
    case StopReason::iteration_limit: return "iterations";
    case StopReason::stall: return "stall";
    case StopReason::target_reached: return "target";
  }
  return "?";
}

}  // namespace fjs
