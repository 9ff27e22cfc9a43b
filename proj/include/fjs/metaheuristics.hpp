#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "fjs/budget.hpp"
#include "fjs/constructive.hpp"
#include "fjs/local_search.hpp"
#include "fjs/moves.hpp"
#include "fjs/random.hpp"

namespace fjs {

enum class Algorithm { ils, grasp, ts, sa };

inline std::string_view to_string(Algorithm a) {
  switch (a) {
    case Algorithm::ils: return "ILS";
    case Algorithm::grasp: return "GRASP";
    case Algorithm::ts: return "TS";
    case Algorithm::sa: return "SA";
  }
  return "?";
}

inline Algorithm parse_algorithm(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "ils") return Algorithm::ils;
  if (lower == "grasp") return Algorithm::grasp;
  if (lower == "ts" || lower == "tabu") return Algorithm::ts;
  if (lower == "sa") return Algorithm::sa;
  throw Error("unknown algorithm '" + std::string(name) + "'");
}

struct MetaConfig {
  Algorithm algo = Algorithm::ils;
  NeighborhoodMode mode = NeighborhoodMode::reduced;
  // ILS: number of perturbations drawn uniformly from [perturb_min, perturb_max].
  int perturb_min = 2;
  int perturb_max = 4;
  // GRASP: restricted candidate list width.
  double grasp_alpha = 0.38;
  // TS: tenure = ceil((|O| + |F|) * tabu_factor).
  double tabu_factor = 0.9;
  // SA: perturbations per temperature, T0 = -t0_p / ln(t0_m), floor and decay.
  int sa_sweep = 3;
  double sa_t0_p = 0.78;
  double sa_t0_m = 0.79;
  double sa_t_final = 1e-3;
  double sa_decay = 0.82;
  Budget budget;
  std::uint64_t seed = 0;

  /// Calibrated parameters for each method variant.
  static MetaConfig defaults(Algorithm algo, NeighborhoodMode mode = NeighborhoodMode::reduced) {
    MetaConfig c;
    c.algo = algo;
    c.mode = mode;
    const bool cropped = mode == NeighborhoodMode::cropped;
    c.perturb_min = cropped ? 1 : 2;
    c.perturb_max = cropped ? 3 : 4;
    c.grasp_alpha = cropped ? 0.59 : 0.38;
    c.tabu_factor = cropped ? 0.5 : 0.9;
    return c;
  }

  double initial_temperature() const { return -sa_t0_p / std::log(sa_t0_m); }

  int tabu_tenure(const Instance& inst) const {
    return static_cast<int>(std::ceil(static_cast<double>(inst.num_operations + inst.num_machines) * tabu_factor));
  }

  /// "ILS-RN", "TS-CN", "SA", ...
  std::string method_id() const {
    std::string id(to_string(algo));
    if (algo == Algorithm::sa) return id;
    switch (mode) {
      case NeighborhoodMode::full: return id + "-FN";
      case NeighborhoodMode::reduced: return id + "-RN";
      case NeighborhoodMode::cropped: return id + "-CN";
    }
    return id;
  }

  void validate() const {
    if (perturb_min < 1 || perturb_min > perturb_max) throw Error("ILS needs 1 <= perturb_min <= perturb_max");
    if (!(grasp_alpha >= 0.0 && grasp_alpha <= 1.0)) throw Error("GRASP alpha must lie in [0, 1]");
    if (!(tabu_factor > 0.0)) throw Error("tabu factor must be positive");
    if (sa_sweep < 1) throw Error("SA sweep length must be at least 1");
    if (!(sa_t0_m > 0.0 && sa_t0_m < 1.0) || !(sa_t0_p > 0.0)) throw Error("SA initial temperature parameters out of range");
    if (!(sa_t_final > 0.0) || initial_temperature() < sa_t_final) throw Error("SA needs T0 >= Tf > 0");
    if (!(sa_decay > 0.0 && sa_decay < 1.0)) throw Error("SA decay must lie in (0, 1)");
  }
};

struct RunResult {
  Schedule best;
  double time_to_best = 0.0;
  double total_time = 0.0;
  std::int64_t iterations = 0;
  std::int64_t neighbors_evaluated = 0;
  std::int64_t stalled_iterations = 0;
  StopReason stop = StopReason::none;
  /// Makespan of every incumbent in the order it was found.
  std::vector<Time> incumbents;
};

/// Called with every new incumbent.
using IncumbentObserver = std::function<void(const Schedule&)>;

/// Random relocation: random operation, random eligible machine, random
/// cycle-free position. The original slot is a possible outcome.
inline Schedule perturb(const Instance& inst, const Schedule& sched, Rng& rng) {
  const int v = uniform_int(rng, 1, inst.num_operations);
  const ReducedState rs = remove_op(inst, sched, v);
  const auto& machines = inst.machines_for(v);
  const int k = machines[static_cast<std::size_t>(uniform_int(rng, 0, static_cast<int>(machines.size()) - 1))];
  const InsertionWindow w = feasible_window(rs, k, false, sched.makespan);
  return insert_op(inst, rs, k, uniform_int(rng, w.first(), w.upper));
}

/// T <- max(decay * T, floor).
inline double cool(double temperature, double decay, double floor) { return std::max(decay * temperature, floor); }

/// Metropolis test on the relative makespan change.
inline bool sa_accepts(Time candidate, Time current, double temperature, double r) {
  double delta = 0.0;
  if (current > 0)
    delta = static_cast<double>(candidate - current) / static_cast<double>(current);
  else if (candidate > current)
    delta = std::numeric_limits<double>::infinity();
  return std::exp(-delta / temperature) >= r;
}

namespace detail {

class RunControl {
 public:
  RunControl(const Budget& budget, RunResult& result, IncumbentObserver observer)
      : budget_(budget), result_(result), observer_(std::move(observer)) {
    if (budget.time_limit) deadline_ = Deadline(watch_, *budget.time_limit);
  }

  const Deadline& deadline() const { return deadline_; }
  int check_interval() const { return budget_.check_interval > 0 ? budget_.check_interval : 1; }

  void offer(const Schedule& s) {
    if (have_ && s.makespan >= result_.best.makespan) return;
    have_ = true;
    result_.best = s;
    result_.time_to_best = watch_.seconds();
    result_.incumbents.push_back(s.makespan);
    if (observer_) observer_(s);
  }

  bool have_incumbent() const { return have_; }

  bool should_stop() {
    if (have_ && budget_.target_makespan && result_.best.makespan <= *budget_.target_makespan)
      return finish(StopReason::target_reached);
    if (budget_.max_iterations && result_.iterations >= *budget_.max_iterations) return finish(StopReason::iteration_limit);
    if (deadline_.passed()) return finish(StopReason::time_limit);
    if (budget_.stall_limit && watch_.seconds() - result_.time_to_best >= *budget_.stall_limit) return finish(StopReason::stall);
    return false;
  }

  void close() {
    result_.total_time = watch_.seconds();
    if (result_.stop == StopReason::none) should_stop();
  }

 private:
  bool finish(StopReason r) {
    result_.stop = r;
    return true;
  }

  Stopwatch watch_;
  Budget budget_;
  Deadline deadline_;
  RunResult& result_;
  IncumbentObserver observer_;
  bool have_ = false;
};

inline LocalSearchConfig descent_config(const MetaConfig& cfg, const RunControl& ctl) {
  LocalSearchConfig ls;
  ls.mode = cfg.mode;
  ls.strategy = Strategy::best;
  ls.check_interval = ctl.check_interval();
  return ls;
}

}  // namespace detail

/// Iterated local search from the better deterministic construction.
inline RunResult run_ils(const Instance& inst, const MetaConfig& cfg, Rng& rng, IncumbentObserver observer = {}) {
  cfg.validate();
  RunResult res;
  detail::RunControl ctl(cfg.budget, res, std::move(observer));
  Schedule current = best_of_est_ect(inst);
  ctl.offer(current);
  const auto ls_cfg = detail::descent_config(cfg, ctl);
  while (!ctl.should_stop()) {
    auto ls = local_search(inst, std::move(current), ls_cfg, ctl.deadline());
    res.neighbors_evaluated += ls.neighbors_evaluated;
    ctl.offer(ls.schedule);
    ++res.iterations;
    const int count = uniform_int(rng, cfg.perturb_min, cfg.perturb_max);
    current = std::move(ls.schedule);
    for (int i = 0; i < count; ++i) current = perturb(inst, current, rng);
  }
  ctl.close();
  return res;
}

/// GRASP: randomized ECT and EST, keep the better, descend. Always completes
/// at least one iteration so the incumbent is defined.
inline RunResult run_grasp(const Instance& inst, const MetaConfig& cfg, Rng& rng, IncumbentObserver observer = {}) {
  cfg.validate();
  RunResult res;
  detail::RunControl ctl(cfg.budget, res, std::move(observer));
  const auto ls_cfg = detail::descent_config(cfg, ctl);
  do {
    Schedule ect = construct_ect(inst, cfg.grasp_alpha, &rng);
    Schedule est = construct_est(inst, cfg.grasp_alpha, &rng);
    auto ls = local_search(inst, pick_better(std::move(ect), std::move(est)), ls_cfg, ctl.deadline());
    res.neighbors_evaluated += ls.neighbors_evaluated;
    ctl.offer(ls.schedule);
    ++res.iterations;
  } while (!ctl.should_stop());
  ctl.close();
  return res;
}

/// Tabu search over (operation, machine) relocations with aspiration on the
/// incumbent. An iteration with no admissible neighbor evicts the oldest
/// tabu entry and is counted as stalled.
inline RunResult run_ts(const Instance& inst, const MetaConfig& cfg, Rng& /*rng*/, IncumbentObserver observer = {}) {
  cfg.validate();
  RunResult res;
  detail::RunControl ctl(cfg.budget, res, std::move(observer));
  Schedule current = best_of_est_ect(inst);
  ctl.offer(current);
  const auto tenure = static_cast<std::size_t>(cfg.tabu_tenure(inst));
  std::deque<std::pair<int, int>> tabu;
  auto is_tabu = [&](int v, int k) { return std::find(tabu.begin(), tabu.end(), std::pair{v, k}) != tabu.end(); };
  const int interval = ctl.check_interval();
  std::int64_t since_check = 0;

  while (!ctl.should_stop()) {
    Time chosen_makespan = std::numeric_limits<Time>::max();
    std::optional<Schedule> chosen;
    Move chosen_move;
    bool aborted = false;
    const Time incumbent = res.best.makespan;
    res.neighbors_evaluated += for_each_neighbor(inst, current, cfg.mode, [&](const Move& m, const Schedule& s) {
      const bool admissible = (s.makespan < chosen_makespan && !is_tabu(m.op, m.machine)) ||
                              s.makespan < std::min(chosen_makespan, incumbent);
      if (admissible) {
        chosen_makespan = s.makespan;
        chosen = s;
        chosen_move = m;
      }
      if (++since_check >= interval) {
        since_check = 0;
        if (ctl.deadline().passed()) {
          aborted = true;
          return false;
        }
      }
      return true;
    });
    if (aborted) break;
    ++res.iterations;
    if (!chosen) {
      ++res.stalled_iterations;
      if (!tabu.empty()) tabu.pop_front();
      continue;
    }
    const std::pair entry{chosen_move.op, chosen_move.machine};
    if (auto it = std::find(tabu.begin(), tabu.end(), entry); it != tabu.end()) tabu.erase(it);
    tabu.push_back(entry);
    if (tabu.size() > tenure) tabu.pop_front();
    current = std::move(*chosen);
    ctl.offer(current);
  }
  ctl.close();
  return res;
}

/// Simulated annealing over random relocations with geometric cooling.
inline RunResult run_sa(const Instance& inst, const MetaConfig& cfg, Rng& rng, IncumbentObserver observer = {}) {
  cfg.validate();
  RunResult res;
  detail::RunControl ctl(cfg.budget, res, std::move(observer));
  Schedule current = best_of_est_ect(inst);
  ctl.offer(current);
  double temperature = cfg.initial_temperature();
  while (!ctl.should_stop()) {
    for (int l = 0; l < cfg.sa_sweep; ++l) {
      Schedule candidate = perturb(inst, current, rng);
      ++res.neighbors_evaluated;
      const double r = uniform01(rng);
      if (sa_accepts(candidate.makespan, current.makespan, temperature, r)) {
        current = std::move(candidate);
        ctl.offer(current);
      }
    }
    temperature = cool(temperature, cfg.sa_decay, cfg.sa_t_final);
    ++res.iterations;
  }
  ctl.close();
  return res;
}

inline RunResult run_metaheuristic(const Instance& inst, const MetaConfig& cfg, IncumbentObserver observer = {}) {
  Rng rng(cfg.seed);
  switch (cfg.algo) {
    case Algorithm::ils: return run_ils(inst, cfg, rng, std::move(observer));
    case Algorithm::grasp: return run_grasp(inst, cfg, rng, std::move(observer));
    case Algorithm::ts: return run_ts(inst, cfg, rng, std::move(observer));
    case Algorithm::sa: return run_sa(inst, cfg, rng, std::move(observer));
  }
  throw Error("unknown algorithm");
}

}  // namespace fjs
