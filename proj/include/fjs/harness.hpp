#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iomanip>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <span>
#include <sstream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "fjs/error.hpp"
#include "fjs/instance.hpp"
#include "fjs/io.hpp"
#include "fjs/metaheuristics.hpp"

namespace fjs {

struct RunRecord {
  std::string instance;
  std::string algorithm;
  std::uint64_t seed = 0;
  std::optional<Time> best_makespan;  // empty on failed rows
  double time_to_best = 0.0;
  double total_time = 0.0;
  std::int64_t iterations = 0;
  std::int64_t neighbors_evaluated = 0;
  std::int64_t stalled_iterations = 0;
  std::string stop_reason;

  bool failed() const { return !best_makespan.has_value(); }
};

inline RunRecord make_record(std::string instance, const MetaConfig& cfg, const RunResult& r) {
  RunRecord rec;
  rec.instance = std::move(instance);
  rec.algorithm = cfg.method_id();
  rec.seed = cfg.seed;
  rec.best_makespan = r.best.makespan;
  rec.time_to_best = r.time_to_best;
  rec.total_time = r.total_time;
  rec.iterations = r.iterations;
  rec.neighbors_evaluated = r.neighbors_evaluated;
  rec.stalled_iterations = r.stalled_iterations;
  rec.stop_reason = std::string(to_string(r.stop));
  return rec;
}

/// An instance to benchmark, loaded lazily so that load failures become rows.
struct InstanceSource {
  std::string id;
  std::function<Instance()> load;

  static InstanceSource from_instance(std::string id, Instance inst) {
    return {std::move(id), [inst = std::move(inst)] { return inst; }};
  }

  static InstanceSource from_file(const std::filesystem::path& path, bool classical, std::optional<double> alpha) {
    return {path.stem().string(), [=] { return load_instance(path, classical, alpha); }};
  }
};

struct BenchOptions {
  int runs = 5;
  std::uint64_t seed_base = 0;
  /// 0 = one worker per hardware thread. More workers than hardware threads is refused.
  unsigned workers = 0;
};

inline bool record_order(const RunRecord& a, const RunRecord& b) {
  return std::tie(a.instance, a.algorithm, a.seed) < std::tie(b.instance, b.algorithm, b.seed);
}

/// Runs every (instance, config) pair `runs` times with seeds seed_base + run.
/// Records stream to `sink` (serialized under a lock) as they complete; the
/// returned list is ordered by instance, method and seed.
inline std::vector<RunRecord> run_benchmark(const std::vector<InstanceSource>& instances, const std::vector<MetaConfig>& configs,
                                            const BenchOptions& opt, const std::function<void(const RunRecord&)>& sink = {}) {
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  if (opt.workers > hw)
    throw Error("refusing " + std::to_string(opt.workers) + " workers on " + std::to_string(hw) + " hardware threads");
  const unsigned workers = opt.workers == 0 ? hw : opt.workers;
  if (opt.runs < 1) throw Error("runs must be at least 1");
  for (const auto& c : configs) c.validate();

  std::vector<RunRecord> records;
  std::mutex lock;
  auto emit = [&](RunRecord rec) {
    std::lock_guard guard(lock);
    if (sink) sink(rec);
    records.push_back(std::move(rec));
  };

  struct Job {
    std::size_t instance;
    std::size_t config;
    int run;
  };
  std::vector<std::optional<Instance>> loaded(instances.size());
  std::vector<Job> jobs;
  for (std::size_t i = 0; i < instances.size(); ++i) {
    std::string failure;
    try {
      loaded[i] = instances[i].load();
    } catch (const std::exception& e) {
      failure = e.what();
    }
    for (std::size_t c = 0; c < configs.size(); ++c)
      for (int r = 0; r < opt.runs; ++r) {
        if (loaded[i]) {
          jobs.push_back({i, c, r});
          continue;
        }
        RunRecord rec;
        rec.instance = instances[i].id;
        rec.algorithm = configs[c].method_id();
        rec.seed = opt.seed_base + static_cast<std::uint64_t>(r);
        rec.stop_reason = "error: " + failure;
        emit(std::move(rec));
      }
  }

  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t j = next++; j < jobs.size(); j = next++) {
      const Job& job = jobs[j];
      MetaConfig cfg = configs[job.config];
      cfg.seed = opt.seed_base + static_cast<std::uint64_t>(job.run);
      RunResult r = run_metaheuristic(*loaded[job.instance], cfg);
      emit(make_record(instances[job.instance].id, cfg, r));
    }
  };
  std::vector<std::thread> pool;
  for (unsigned w = 1; w < std::min<std::size_t>(workers, jobs.size()); ++w) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  std::sort(records.begin(), records.end(), record_order);
  return records;
}

// ---------------------------------------------------------------------------
// Gap statistics

inline std::optional<double> gap_percent(double value, double best) {
  if (best == 0.0) return std::nullopt;
  return 100.0 * (value - best) / best;
}

struct MethodGap {
  std::string method;
  Time best = 0;          // best over runs
  double mean = 0.0;      // mean over runs
  int runs = 0;
  std::optional<double> gap;       // best vs cross-method minimum of bests
  std::optional<double> mean_gap;  // mean vs cross-method minimum of means
};

struct InstanceGaps {
  std::string instance;
  std::vector<MethodGap> methods;  // sorted by method id
};

struct MethodSummary {
  std::string method;
  int instances = 0;
  int best_count = 0;  // instances where the method's best equals the minimum
  double average_gap = 0.0;
  double average_mean_gap = 0.0;
  double average_best = 0.0;
};

struct GapReport {
  std::vector<InstanceGaps> instances;
  std::vector<MethodSummary> summary;
};

/// Failed rows are ignored. Undefined gaps (minimum 0) are skipped in averages.
inline GapReport gap_stats(std::span<const RunRecord> records) {
  std::map<std::string, std::map<std::string, std::vector<Time>>> grouped;
  for (const auto& r : records)
    if (r.best_makespan) grouped[r.instance][r.algorithm].push_back(*r.best_makespan);

  GapReport report;
  struct Acc {
    int instances = 0, best_count = 0, gap_n = 0, mean_gap_n = 0;
    double gap = 0, mean_gap = 0, best = 0;
  };
  std::map<std::string, Acc> acc;
  for (const auto& [instance, methods] : grouped) {
    InstanceGaps ig;
    ig.instance = instance;
    for (const auto& [method, values] : methods) {
      MethodGap g;
      g.method = method;
      g.runs = static_cast<int>(values.size());
      g.best = *std::min_element(values.begin(), values.end());
      double sum = 0;
      for (Time v : values) sum += static_cast<double>(v);
      g.mean = sum / static_cast<double>(values.size());
      ig.methods.push_back(std::move(g));
    }
    Time min_best = ig.methods.front().best;
    double min_mean = ig.methods.front().mean;
    for (const auto& g : ig.methods) {
      min_best = std::min(min_best, g.best);
      min_mean = std::min(min_mean, g.mean);
    }
    for (auto& g : ig.methods) {
      g.gap = gap_percent(static_cast<double>(g.best), static_cast<double>(min_best));
      g.mean_gap = gap_percent(g.mean, min_mean);
      Acc& a = acc[g.method];
      ++a.instances;
      a.best += static_cast<double>(g.best);
      if (g.best == min_best) ++a.best_count;
      if (g.gap) {
        a.gap += *g.gap;
        ++a.gap_n;
      }
      if (g.mean_gap) {
        a.mean_gap += *g.mean_gap;
        ++a.mean_gap_n;
      }
    }
    report.instances.push_back(std::move(ig));
  }
  for (const auto& [method, a] : acc) {
    MethodSummary s;
    s.method = method;
    s.instances = a.instances;
    s.best_count = a.best_count;
    s.average_gap = a.gap_n ? a.gap / a.gap_n : 0.0;
    s.average_mean_gap = a.mean_gap_n ? a.mean_gap / a.mean_gap_n : 0.0;
    s.average_best = a.instances ? a.best / a.instances : 0.0;
    report.summary.push_back(std::move(s));
  }
  return report;
}

// ---------------------------------------------------------------------------
// Wilcoxon signed-rank test

struct WilcoxonOutcome {
  double r_plus = 0.0;
  double r_minus = 0.0;
  double w = 0.0;
  int n = 0;  // pairs with a nonzero difference
  double z = 0.0;
  double p_value = 1.0;
  /// Normal approximation is poor below 10 pairs.
  bool small_sample = false;

  bool rejects(double significance = 0.05) const { return p_value < significance; }
};

/// Two-tailed p-value of W = R+ - R- under the normal approximation.
inline double wilcoxon_p_value(double w, int n) {
  const double nn = n;
  const double sd = std::sqrt(nn * (nn + 1.0) * (2.0 * nn + 1.0) / 6.0);
  return std::erfc(std::fabs(w / sd) / std::sqrt(2.0));
}

/// Ranks |c2 - c1| with mid-ranks for ties after dropping zero differences;
/// R+ collects pairs with c2 > c1.
inline WilcoxonOutcome wilcoxon(std::span<const std::pair<double, double>> pairs) {
  std::vector<double> diffs;
  for (const auto& [c1, c2] : pairs)
    if (c2 != c1) diffs.push_back(c2 - c1);
  if (diffs.empty()) throw Error("Wilcoxon test is undefined when every difference is zero");
  std::vector<std::size_t> idx(diffs.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return std::fabs(diffs[a]) < std::fabs(diffs[b]); });
  WilcoxonOutcome out;
  out.n = static_cast<int>(diffs.size());
  for (std::size_t i = 0; i < idx.size();) {
    std::size_t j = i;
    while (j + 1 < idx.size() && std::fabs(diffs[idx[j + 1]]) == std::fabs(diffs[idx[i]])) ++j;
    const double rank = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
    for (std::size_t t = i; t <= j; ++t) (diffs[idx[t]] > 0 ? out.r_plus : out.r_minus) += rank;
    i = j + 1;
  }
  out.w = out.r_plus - out.r_minus;
  const double nn = out.n;
  out.z = out.w / std::sqrt(nn * (nn + 1.0) * (2.0 * nn + 1.0) / 6.0);
  out.p_value = wilcoxon_p_value(out.w, out.n);
  out.small_sample = out.n < 10;
  return out;
}

/// Per-instance (method A, method B) values from records, using each
/// method's best over runs (or mean when `use_mean`). Instances missing either
/// method are skipped.
inline std::vector<std::pair<double, double>> paired_values(std::span<const RunRecord> records, const std::string& a,
                                                           const std::string& b, bool use_mean = false) {
  const auto report = gap_stats(records);
  std::vector<std::pair<double, double>> out;
  for (const auto& ig : report.instances) {
    std::optional<double> va, vb;
    for (const auto& g : ig.methods) {
      const double v = use_mean ? g.mean : static_cast<double>(g.best);
      if (g.method == a) va = v;
      if (g.method == b) vb = v;
    }
    if (va && vb) out.emplace_back(*va, *vb);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Persistence

inline const std::vector<std::string>& csv_columns() {
  static const std::vector<std::string> cols{"instance",   "algorithm",  "seed",
                                             "best_makespan", "time_to_best", "total_time",
                                             "iterations", "neighbors_evaluated", "stalled_iterations",
                                             "stop_reason"};
  return cols;
}

namespace detail {

inline std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

inline std::string fixed6(double v) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(6) << v;
  return s.str();
}

inline std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool quoted = false, any = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (quoted) {
      if (c == '"' && i + 1 < text.size() && text[i + 1] == '"') {
        field += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        field += c;
      }
      continue;
    }
    if (c == '"') {
      quoted = true;
      any = true;
    } else if (c == ',') {
      row.push_back(std::move(field));
      field.clear();
      any = true;
    } else if (c == '\n' || c == '\r') {
      if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
      if (any || !field.empty()) {
        row.push_back(std::move(field));
        rows.push_back(std::move(row));
      }
      row.clear();
      field.clear();
      any = false;
    } else {
      field += c;
      any = true;
    }
  }
  if (quoted) throw ParseError("unterminated quoted CSV field", 0);
  if (any || !field.empty()) {
    row.push_back(std::move(field));
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace detail

inline std::string records_to_csv(std::span<const RunRecord> records) {
  std::string out;
  for (std::size_t i = 0; i < csv_columns().size(); ++i) out += (i ? "," : "") + csv_columns()[i];
  out += '\n';
  for (const auto& r : records) {
    const std::vector<std::string> fields{r.instance,
                                          r.algorithm,
                                          std::to_string(r.seed),
                                          r.best_makespan ? std::to_string(*r.best_makespan) : std::string(),
                                          detail::fixed6(r.time_to_best),
                                          detail::fixed6(r.total_time),
                                          std::to_string(r.iterations),
                                          std::to_string(r.neighbors_evaluated),
                                          std::to_string(r.stalled_iterations),
                                          r.stop_reason};
    for (std::size_t i = 0; i < fields.size(); ++i) out += (i ? "," : "") + detail::csv_escape(fields[i]);
    out += '\n';
  }
  return out;
}

inline std::vector<RunRecord> records_from_csv(const std::string& text) {
  const auto rows = detail::parse_csv(text);
  if (rows.empty() || rows.front() != csv_columns()) throw ParseError("CSV header does not match the results layout", 1);
  std::vector<RunRecord> out;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& f = rows[i];
    const int line = static_cast<int>(i) + 1;
    if (f.size() != csv_columns().size()) throw ParseError("expected " + std::to_string(csv_columns().size()) + " fields", line);
    RunRecord r;
    try {
      r.instance = f[0];
      r.algorithm = f[1];
      r.seed = std::stoull(f[2]);
      if (!f[3].empty()) r.best_makespan = std::stoll(f[3]);
      r.time_to_best = std::stod(f[4]);
      r.total_time = std::stod(f[5]);
      r.iterations = std::stoll(f[6]);
      r.neighbors_evaluated = std::stoll(f[7]);
      r.stalled_iterations = std::stoll(f[8]);
      r.stop_reason = f[9];
    } catch (const std::logic_error&) {
      throw ParseError("malformed numeric field", line);
    }
    out.push_back(std::move(r));
  }
  return out;
}

inline nlohmann::ordered_json config_to_json(const MetaConfig& c) {
  nlohmann::ordered_json j;
  j["method"] = c.method_id();
  j["algorithm"] = std::string(to_string(c.algo));
  j["neighborhood"] = std::string(to_string(c.mode));
  j["perturb_min"] = c.perturb_min;
  j["perturb_max"] = c.perturb_max;
  j["grasp_alpha"] = c.grasp_alpha;
  j["tabu_factor"] = c.tabu_factor;
  j["sa_sweep"] = c.sa_sweep;
  j["sa_t0_p"] = c.sa_t0_p;
  j["sa_t0_m"] = c.sa_t0_m;
  j["sa_t_final"] = c.sa_t_final;
  j["sa_decay"] = c.sa_decay;
  nlohmann::ordered_json b;
  b["time_limit"] = c.budget.time_limit ? nlohmann::ordered_json(*c.budget.time_limit) : nlohmann::ordered_json(nullptr);
  b["max_iterations"] = c.budget.max_iterations ? nlohmann::ordered_json(*c.budget.max_iterations) : nlohmann::ordered_json(nullptr);
  b["stall_limit"] = c.budget.stall_limit ? nlohmann::ordered_json(*c.budget.stall_limit) : nlohmann::ordered_json(nullptr);
  b["target_makespan"] = c.budget.target_makespan ? nlohmann::ordered_json(*c.budget.target_makespan) : nlohmann::ordered_json(nullptr);
  b["check_interval"] = c.budget.check_interval;
  j["budget"] = std::move(b);
  return j;
}

/// JSON mirror of the CSV rows plus the configurations and gap statistics.
inline nlohmann::ordered_json records_to_json(std::span<const RunRecord> records, std::span<const MetaConfig> configs) {
  nlohmann::ordered_json doc;
  auto cfgs = nlohmann::ordered_json::array();
  for (const auto& c : configs) cfgs.push_back(config_to_json(c));
  doc["configs"] = std::move(cfgs);
  auto rows = nlohmann::ordered_json::array();
  for (const auto& r : records) {
    nlohmann::ordered_json o;
    o["instance"] = r.instance;
    o["algorithm"] = r.algorithm;
    o["seed"] = r.seed;
    o["best_makespan"] = r.best_makespan ? nlohmann::ordered_json(*r.best_makespan) : nlohmann::ordered_json(nullptr);
    // Same rounding as the CSV so both sinks carry identical numbers.
    o["time_to_best"] = std::stod(detail::fixed6(r.time_to_best));
    o["total_time"] = std::stod(detail::fixed6(r.total_time));
    o["iterations"] = r.iterations;
    o["neighbors_evaluated"] = r.neighbors_evaluated;
    o["stalled_iterations"] = r.stalled_iterations;
    o["stop_reason"] = r.stop_reason;
    rows.push_back(std::move(o));
  }
  doc["records"] = std::move(rows);
  auto gaps = nlohmann::ordered_json::array();
  for (const auto& s : gap_stats(records).summary) {
    nlohmann::ordered_json g;
    g["method"] = s.method;
    g["instances"] = s.instances;
    g["best_count"] = s.best_count;
    g["average_gap"] = s.average_gap;
    g["average_mean_gap"] = s.average_mean_gap;
    gaps.push_back(std::move(g));
  }
  doc["gap_summary"] = std::move(gaps);
  return doc;
}

enum class ResultFormat { csv, json };

inline void emit_results(std::span<const RunRecord> records, std::span<const MetaConfig> configs, ResultFormat format,
                         const std::filesystem::path& path) {
  std::vector<RunRecord> sorted(records.begin(), records.end());
  std::stable_sort(sorted.begin(), sorted.end(), record_order);
  const std::string text = format == ResultFormat::csv ? records_to_csv(sorted) : records_to_json(sorted, configs).dump(2) + "\n";
  write_text_file(path, text);
}

}  // namespace fjs
