#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string_view>
#include <vector>

#include "fjs/budget.hpp"
#include "fjs/moves.hpp"

namespace fjs {

enum class Strategy { best, first };

inline Strategy parse_strategy(std::string_view name) {
  if (name == "best") return Strategy::best;
  if (name == "first") return Strategy::first;
  throw Error("unknown improvement strategy '" + std::string(name) + "'");
}

struct LocalSearchConfig {
  NeighborhoodMode mode = NeighborhoodMode::reduced;
  Strategy strategy = Strategy::best;
  /// Seconds for this call; combined with any deadline passed in.
  std::optional<double> time_limit;
  int check_interval = 64;
  bool record_trajectory = false;
};

struct LocalSearchResult {
  Schedule schedule;
  std::int64_t scans = 0;
  std::int64_t improvements = 0;
  std::int64_t neighbors_evaluated = 0;
  bool interrupted = false;
  /// Accepted moves and the makespan after each (when recording).
  std::vector<Move> moves;
  std::vector<Time> makespans;
};

/// Descends until no neighbor is strictly better. Best strategy keeps the
/// first strict minimum of a scan; first strategy takes the first neighbor
/// that beats the current makespan and rescans from the start. When the
/// deadline passes mid-scan, the best improving neighbor seen is still applied.
inline LocalSearchResult local_search(const Instance& inst, Schedule start, const LocalSearchConfig& cfg,
                                      const Deadline& outer = {}) {
  const Deadline own = cfg.time_limit ? Deadline::after(*cfg.time_limit) : Deadline{};
  auto expired = [&] { return outer.passed() || own.passed(); };
  const int interval = cfg.check_interval > 0 ? cfg.check_interval : 1;

  LocalSearchResult res;
  res.schedule = std::move(start);
  std::int64_t since_check = 0;
  while (!expired()) {
    ++res.scans;
    const Time current = res.schedule.makespan;
    Time best_makespan = std::numeric_limits<Time>::max();
    std::optional<Schedule> best;
    Move best_move;
    res.neighbors_evaluated += for_each_neighbor(inst, res.schedule, cfg.mode, [&](const Move& m, const Schedule& s) {
      if (s.makespan < best_makespan) {
        best_makespan = s.makespan;
        best = s;
        best_move = m;
      }
      if (++since_check >= interval) {
        since_check = 0;
        if (expired()) {
          res.interrupted = true;
          return false;
        }
      }
      return !(cfg.strategy == Strategy::first && s.makespan < current);
    });
    if (!best || best_makespan >= current) break;
    res.schedule = std::move(*best);
    ++res.improvements;
    if (cfg.record_trajectory) {
      res.moves.push_back(best_move);
      res.makespans.push_back(best_makespan);
    }
    if (res.interrupted) break;
  }
  if (!res.interrupted && expired() && res.scans == 0) res.interrupted = true;
  return res;
}

}  // namespace fjs
