// Command-line front end: construct, local search, solve, oracle, bench, stats, validate.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fjs/fjs.hpp"

namespace fs = std::filesystem;

namespace {

struct InstanceOptions {
  std::string path;
  bool classical = false;
  std::optional<double> alpha;

  void attach(CLI::App* app) {
    app->add_option("--instance,-i", path, "instance file")->required()->check(CLI::ExistingFile);
    app->add_flag("--classical", classical, "input uses the classical FJSP layout (needs --alpha)");
    app->add_option("--alpha", alpha, "learning rate; overrides the file header");
  }

  fjs::Instance load() const { return fjs::load_instance(path, classical, alpha); }
};

void write_output(const std::string& out, const std::string& text) {
  if (out.empty() || out == "-")
    std::cout << text;
  else
    fjs::write_text_file(out, text);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream in(s);
  for (std::string item; std::getline(in, item, ',');)
    if (!item.empty()) out.push_back(item);
  return out;
}

void report(const fjs::Schedule& s, const char* label) {
  std::cerr << label << ": makespan " << s.makespan << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Flexible job shop with sequencing flexibility and position-based learning"};
  app.require_subcommand(1);

  // construct
  auto* construct = app.add_subcommand("construct", "build a schedule with the EST or ECT rule");
  InstanceOptions c_inst;
  c_inst.attach(construct);
  std::string c_rule = "best", c_out;
  double c_rcl = 0.0;
  std::uint64_t c_seed = 0;
  construct->add_option("--rule", c_rule, "est, ect or best")->check(CLI::IsMember({"est", "ect", "best"}));
  construct->add_option("--rcl-alpha", c_rcl, "candidate list width in [0,1]")->check(CLI::Range(0.0, 1.0));
  construct->add_option("--seed", c_seed, "seed for randomized construction");
  construct->add_option("--out,-o", c_out, "solution file (default stdout)");

  // localsearch
  auto* ls = app.add_subcommand("localsearch", "descend from the best EST/ECT schedule");
  InstanceOptions l_inst;
  l_inst.attach(ls);
  std::string l_mode = "reduced", l_strategy = "best", l_out;
  std::optional<double> l_time;
  ls->add_option("--neighborhood", l_mode, "full, reduced or cropped")->check(CLI::IsMember({"full", "reduced", "cropped"}));
  ls->add_option("--strategy", l_strategy, "best or first improvement")->check(CLI::IsMember({"best", "first"}));
  ls->add_option("--time-limit", l_time, "seconds");
  ls->add_option("--out,-o", l_out, "solution file (default stdout)");

  // solve
  auto* solve = app.add_subcommand("solve", "run a metaheuristic");
  InstanceOptions s_inst;
  s_inst.attach(solve);
  std::string s_algo = "ils", s_mode = "reduced", s_out;
  std::optional<double> s_time, s_stall;
  std::optional<std::int64_t> s_iters;
  std::optional<fjs::Time> s_target;
  std::uint64_t s_seed = 0;
  std::optional<int> p_min, p_max, sa_sweep;
  std::optional<double> g_alpha, t_factor, sa_t0p, sa_t0m, sa_tf, sa_decay;
  bool s_trace = false;
  solve->add_option("--algo", s_algo, "ils, grasp, ts or sa")->check(CLI::IsMember({"ils", "grasp", "ts", "sa"}));
  solve->add_option("--neighborhood", s_mode, "full, reduced or cropped")->check(CLI::IsMember({"full", "reduced", "cropped"}));
  solve->add_option("--time-limit", s_time, "seconds");
  solve->add_option("--iterations", s_iters, "outer iteration cap");
  solve->add_option("--stall", s_stall, "stop after this many seconds without improvement");
  solve->add_option("--target", s_target, "stop once this makespan is reached");
  solve->add_option("--seed", s_seed, "random seed");
  solve->add_option("--perturb-min", p_min, "ILS: fewest perturbations");
  solve->add_option("--perturb-max", p_max, "ILS: most perturbations");
  solve->add_option("--grasp-alpha", g_alpha, "GRASP: candidate list width");
  solve->add_option("--tabu-factor", t_factor, "TS: tenure factor");
  solve->add_option("--sa-sweep", sa_sweep, "SA: moves per temperature");
  solve->add_option("--sa-t0-p", sa_t0p, "SA: initial temperature numerator");
  solve->add_option("--sa-t0-m", sa_t0m, "SA: initial temperature log argument");
  solve->add_option("--sa-final", sa_tf, "SA: temperature floor");
  solve->add_option("--sa-decay", sa_decay, "SA: cooling factor");
  solve->add_flag("--trace", s_trace, "print each new incumbent to stderr");
  solve->add_option("--out,-o", s_out, "solution file (default stdout)");

  // oracle
  auto* oracle = app.add_subcommand("oracle", "exhaustive optimum for tiny instances");
  InstanceOptions o_inst;
  o_inst.attach(oracle);
  std::int64_t o_limit = 10'000'000;
  std::string o_out;
  oracle->add_option("--limit", o_limit, "refuse when the search space bound exceeds this");
  oracle->add_option("--out,-o", o_out, "solution file (default stdout)");

  // bench
  auto* bench = app.add_subcommand("bench", "run algorithms over a directory of instances");
  std::string b_dir, b_algos = "ils,grasp,ts,sa", b_modes = "reduced,cropped", b_out = "results.csv";
  bool b_classical = false;
  std::optional<double> b_alpha, b_time = 300.0;
  std::optional<std::int64_t> b_iters;
  int b_runs = 5;
  std::uint64_t b_seed = 0;
  unsigned b_workers = 0;
  bench->add_option("--instances", b_dir, "directory of instance files")->required()->check(CLI::ExistingDirectory);
  bench->add_flag("--classical", b_classical, "instances use the classical FJSP layout");
  bench->add_option("--alpha", b_alpha, "learning rate override");
  bench->add_option("--algos", b_algos, "comma-separated algorithms");
  bench->add_option("--neighborhoods", b_modes, "comma-separated neighborhoods");
  bench->add_option("--runs", b_runs, "runs per instance and method")->check(CLI::PositiveNumber);
  bench->add_option("--time-limit", b_time, "seconds per run");
  bench->add_option("--iterations", b_iters, "outer iteration cap per run");
  bench->add_option("--seed-base", b_seed, "seed of run 0");
  bench->add_option("--workers", b_workers, "parallel runs (default: hardware threads)");
  bench->add_option("--out,-o", b_out, "results file; .json selects JSON");

  // stats
  auto* stats = app.add_subcommand("stats", "gap table and Wilcoxon test from a results file");
  std::string st_in, st_pair;
  bool st_mean = false;
  stats->add_option("--in", st_in, "results CSV")->required()->check(CLI::ExistingFile);
  stats->add_option("--wilcoxon", st_pair, "two method ids, e.g. ILS-RN,TS-RN");
  stats->add_flag("--mean", st_mean, "compare mean instead of best makespans");

  // validate
  auto* validate = app.add_subcommand("validate", "check a solution file against an instance");
  InstanceOptions v_inst;
  v_inst.attach(validate);
  std::string v_solution;
  validate->add_option("--solution,-s", v_solution, "solution JSON")->required()->check(CLI::ExistingFile);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*construct) {
      const auto inst = c_inst.load();
      fjs::Rng rng(c_seed);
      fjs::Rng* r = c_rcl > 0.0 ? &rng : nullptr;
      fjs::Schedule s;
      if (c_rule == "est")
        s = fjs::construct_est(inst, c_rcl, r);
      else if (c_rule == "ect")
        s = fjs::construct_ect(inst, c_rcl, r);
      else {
        fjs::Schedule ect = fjs::construct_ect(inst, c_rcl, r);
        s = fjs::pick_better(std::move(ect), fjs::construct_est(inst, c_rcl, r));
      }
      report(s, c_rule.c_str());
      write_output(c_out, fjs::serialize_schedule(s));
    } else if (*ls) {
      const auto inst = l_inst.load();
      fjs::LocalSearchConfig cfg;
      cfg.mode = fjs::parse_neighborhood(l_mode);
      cfg.strategy = fjs::parse_strategy(l_strategy);
      cfg.time_limit = l_time;
      fjs::Stopwatch watch;
      auto res = fjs::local_search(inst, fjs::best_of_est_ect(inst), cfg);
      std::cerr << "start " << fjs::best_of_est_ect(inst).makespan << ", local optimum " << res.schedule.makespan << " after "
                << res.improvements << " moves, " << res.neighbors_evaluated << " neighbors, " << watch.seconds() << " s"
                << (res.interrupted ? " (interrupted)" : "") << "\n";
      write_output(l_out, fjs::serialize_schedule(res.schedule));
    } else if (*solve) {
      const auto inst = s_inst.load();
      auto cfg = fjs::MetaConfig::defaults(fjs::parse_algorithm(s_algo), fjs::parse_neighborhood(s_mode));
      if (p_min) cfg.perturb_min = *p_min;
      if (p_max) cfg.perturb_max = *p_max;
      if (g_alpha) cfg.grasp_alpha = *g_alpha;
      if (t_factor) cfg.tabu_factor = *t_factor;
      if (sa_sweep) cfg.sa_sweep = *sa_sweep;
      if (sa_t0p) cfg.sa_t0_p = *sa_t0p;
      if (sa_t0m) cfg.sa_t0_m = *sa_t0m;
      if (sa_tf) cfg.sa_t_final = *sa_tf;
      if (sa_decay) cfg.sa_decay = *sa_decay;
      cfg.budget.time_limit = s_time;
      cfg.budget.max_iterations = s_iters;
      cfg.budget.stall_limit = s_stall;
      cfg.budget.target_makespan = s_target;
      if (!s_time && !s_iters && !s_target) cfg.budget.time_limit = 10.0;
      cfg.seed = s_seed;
      fjs::Stopwatch watch;
      fjs::IncumbentObserver observer;
      if (s_trace)
        observer = [&](const fjs::Schedule& s) { std::cerr << watch.seconds() << " s: " << s.makespan << "\n"; };
      const auto res = fjs::run_metaheuristic(inst, cfg, observer);
      std::cerr << cfg.method_id() << ": best " << res.best.makespan << " at " << res.time_to_best << " s, " << res.iterations
                << " iterations, stopped by " << fjs::to_string(res.stop) << " after " << res.total_time << " s\n";
      write_output(s_out, fjs::serialize_schedule(res.best));
    } else if (*oracle) {
      const auto inst = o_inst.load();
      const auto res = fjs::solve_exhaustive(inst, o_limit);
      std::cerr << "optimum " << res.optimum << " over " << res.feasible_count << " feasible sequencings\n";
      write_output(o_out, fjs::serialize_schedule(res.schedule));
    } else if (*bench) {
      std::vector<fjs::InstanceSource> sources;
      std::vector<fs::path> files;
      for (const auto& e : fs::directory_iterator(b_dir))
        if (e.is_regular_file()) files.push_back(e.path());
      std::sort(files.begin(), files.end());
      for (const auto& f : files) sources.push_back(fjs::InstanceSource::from_file(f, b_classical, b_alpha));
      if (sources.empty()) throw fjs::Error("no instance files in '" + b_dir + "'");

      std::vector<fjs::MetaConfig> configs;
      std::set<std::string> seen;
      for (const auto& a : split_list(b_algos))
        for (const auto& n : split_list(b_modes)) {
          auto cfg = fjs::MetaConfig::defaults(fjs::parse_algorithm(a), fjs::parse_neighborhood(n));
          cfg.budget.time_limit = b_time;
          cfg.budget.max_iterations = b_iters;
          if (seen.insert(cfg.method_id()).second) configs.push_back(cfg);
        }
      fjs::BenchOptions opt;
      opt.runs = b_runs;
      opt.seed_base = b_seed;
      opt.workers = b_workers;
      const auto records = fjs::run_benchmark(sources, configs, opt, [](const fjs::RunRecord& r) {
        std::cerr << r.instance << " " << r.algorithm << " seed " << r.seed << ": "
                  << (r.best_makespan ? std::to_string(*r.best_makespan) : r.stop_reason) << "\n";
      });
      const auto format = fs::path(b_out).extension() == ".json" ? fjs::ResultFormat::json : fjs::ResultFormat::csv;
      fjs::emit_results(records, configs, format, b_out);
      std::cerr << records.size() << " records written to " << b_out << "\n";
    } else if (*stats) {
      const auto records = fjs::records_from_csv(fjs::read_text_file(st_in));
      const auto gaps = fjs::gap_stats(records);
      std::printf("%-10s %9s %8s %10s %6s\n", "method", "instances", "gap%", "meangap%", "#best");
      for (const auto& s : gaps.summary)
        std::printf("%-10s %9d %8.3f %10.3f %6d\n", s.method.c_str(), s.instances, s.average_gap, s.average_mean_gap, s.best_count);
      if (!st_pair.empty()) {
        const auto ids = split_list(st_pair);
        if (ids.size() != 2) throw fjs::Error("--wilcoxon takes exactly two method ids");
        const auto pairs = fjs::paired_values(records, ids[0], ids[1], st_mean);
        const auto w = fjs::wilcoxon(pairs);
        std::printf("Wilcoxon %s vs %s: N=%d R+=%.1f R-=%.1f W=%.1f z=%.4f p=%.4f%s\n", ids[0].c_str(), ids[1].c_str(), w.n,
                    w.r_plus, w.r_minus, w.w, w.z, w.p_value, w.small_sample ? " (N<10, approximation unreliable)" : "");
        std::printf("%s at the 5%% level\n", w.rejects() ? "significant" : "not significant");
      }
    } else if (*validate) {
      const auto inst = v_inst.load();
      const auto doc = nlohmann::json::parse(fjs::read_text_file(v_solution));
      const auto problems = fjs::check_solution(inst, doc);
      if (problems.empty()) {
        std::cout << "valid, makespan " << doc.value("makespan", fjs::Time{-1}) << "\n";
        return 0;
      }
      for (const auto& p : problems) std::cout << "invalid: " << p << "\n";
      return 1;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
