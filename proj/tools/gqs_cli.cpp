#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>

#include "gqs/bench.hpp"
#include "gqs/instance_io.hpp"
#include "gqs/solver.hpp"

namespace {

using namespace gqs;

constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

struct Options {
  std::string instance;
  std::string format = "orlib";
  std::string sense = "min";
  std::string out;
  std::string aggregate_out;
  std::string best_known;

  std::size_t k = 50;
  std::size_t cl = 3;
  std::string convergence = "incumbent";
  std::optional<std::size_t> tt;
  std::size_t w = 1;
  bool whole_group = true;
  std::string escape = "pr";
  std::string choice = "gains";
  std::string oracle = "tabu1opt";
  std::string init = "random";
  std::string restart = "rgreedy";
  std::string refset_init = "random";
  std::string improve = "off";
  double improve_prob = 0.0;
  double presumed_time = 0.02;
  double tol = 1e-8;
  std::string clock = "work";
  double work_unit_seconds = 4e-9;

  std::optional<double> time_limit;
  std::optional<double> wall_limit;
  std::string wall_preset;
  std::optional<std::size_t> max_escapes;
  std::optional<double> target;
  std::optional<std::uint64_t> max_iterations;

  std::uint64_t seed = 0;
  std::size_t reps = 32;
  std::size_t threads = 1;
  bool no_stop_at_best = false;
  bool print_bits = false;
  std::vector<double> gap_grid{1.0, 0.5, 0.1, 0.05, 0.01};
  std::vector<std::size_t> k_grid{25, 50, 100, 200};
};

struct GenerateOptions {
  std::size_t n = 500;
  std::size_t count = 1;
  double density = 0.1;
  std::int64_t lo = -100;
  std::int64_t hi = 100;
  std::uint64_t seed = 0;
  std::string name = "generated";
  std::string out;
};

void add_instance_options(CLI::App* app, Options& o) {
  app->add_option("instance", o.instance, "Instance file")->required()->check(CLI::ExistingFile);
  app->add_option("--format", o.format, "Instance layout")
      ->check(CLI::IsMember({"orlib", "triple"}));
  app->add_option("--sense", o.sense, "Objective sense of the file and of reported values")
      ->check(CLI::IsMember({"min", "max"}));
}

void add_solver_options(CLI::App* app, Options& o) {
  app->add_option("--k", o.k, "Oracle subproblem size");
  app->add_option("--cl", o.cl, "Convergence length in oracle calls");
  app->add_option("--convergence", o.convergence,
                  "Reference a step must improve to reset the convergence count")
      ->check(CLI::IsMember({"incumbent", "phase"}));
  app->add_option("--tt", o.tt, "k-opt tabu tenure (default round(0.6 N / k))");
  app->add_option("--w", o.w, "Fusion-guided iterations after each fusion escape");
  app->add_option("--whole-group", o.whole_group, "Queue the whole chosen group as tabu");
  app->add_option("--escape", o.escape)->check(CLI::IsMember({"pr", "fsmart"}));
  app->add_option("--choice", o.choice)
      ->check(CLI::IsMember({"random", "gains", "weighted", "coupling"}));
  app->add_option("--oracle", o.oracle)->check(CLI::IsMember({"tabu1opt", "exhaustive"}));
  app->add_option("--init", o.init, "Initial configuration")
      ->check(CLI::IsMember({"random", "greedy", "rgreedy"}));
  app->add_option("--restart", o.restart, "Path-relinking restart construction")
      ->check(CLI::IsMember({"rgreedy", "random"}));
  app->add_option("--refset-init", o.refset_init, "Initial reference set contents")
      ->check(CLI::IsMember({"random", "empty"}));
  app->add_option("--improve", o.improve, "1-opt improvement phase hook")
      ->check(CLI::IsMember({"off", "escape", "convergence", "prob"}));
  app->add_option("--improve-prob", o.improve_prob, "Per-step probability for --improve prob");
  app->add_option("--presumed-time", o.presumed_time, "Modeled seconds per oracle call");
  app->add_option("--tol", o.tol, "Minimum accepted improvement");
  app->add_option("--clock", o.clock, "Classical time source")
      ->check(CLI::IsMember({"work", "wall"}));
  app->add_option("--work-unit-seconds", o.work_unit_seconds,
                  "Seconds charged per work unit under --clock work");
  app->add_option("--time-limit", o.time_limit, "Modeled time limit in seconds");
  app->add_option("--wall-limit", o.wall_limit, "Wall-clock limit in seconds");
  app->add_option("--wall-preset", o.wall_preset,
                  "Wall limit by problem size: 90 s up to N=1000, 2250 s up to N=2500, "
                  "1.2 N s beyond")
      ->check(CLI::IsMember({"auto"}));
  app->add_option("--max-escapes", o.max_escapes);
  app->add_option("--max-iterations", o.max_iterations, "Oracle call limit");
  app->add_option("--target", o.target, "Stop at this value (in --sense)");
  app->add_option("--seed", o.seed);
  app->add_option("--out", o.out, "Primary output file (default stdout)");
}

void add_battery_options(CLI::App* app, Options& o, bool registry_required) {
  app->add_option("--reps", o.reps, "Repetitions per instance");
  app->add_option("--threads", o.threads, "Concurrent repetitions");
  auto* bk = app->add_option("--best-known", o.best_known, "Best-known registry file")
                 ->check(CLI::ExistingFile);
  if (registry_required) bk->required();
  app->add_flag("--no-stop-at-best", o.no_stop_at_best,
                "Keep running after reaching the best-known value");
}

double wall_preset_for(std::size_t n) {
  if (n <= 1000) return 90.0;
  if (n <= 2500) return 2250.0;
  return 1.2 * static_cast<double>(n);
}

SolverParams make_params(const Options& o, Sense sense, std::size_t max_n) {
  SolverParams p;
  p.k = o.k;
  p.cl = o.cl;
  p.convergence =
      o.convergence == "phase" ? ConvergenceRef::phase : ConvergenceRef::incumbent;
  p.tt = o.tt;
  p.fusion_budget = o.w;
  p.whole_group = o.whole_group;
  p.escape = o.escape == "fsmart" ? EscapeKind::f_smart : EscapeKind::path_relinking;
  p.choice = *parse_choice_kind(o.choice);
  p.oracle = o.oracle == "exhaustive" ? OracleKind::exhaustive : OracleKind::tabu1opt;
  p.init = o.init == "greedy"    ? InitKind::deterministic_greedy
           : o.init == "rgreedy" ? InitKind::randomized_greedy
                                 : InitKind::random;
  p.path_relinking.restart =
      o.restart == "random" ? RestartKind::random : RestartKind::randomized_greedy;
  p.refset_random_init = o.refset_init == "random";
  p.improve = o.improve == "escape"        ? ImprovePhase::after_escape
              : o.improve == "convergence" ? ImprovePhase::after_convergence
              : o.improve == "prob"        ? ImprovePhase::probabilistic
                                           : ImprovePhase::off;
  p.improve_probability = o.improve_prob;
  p.presumed_time = o.presumed_time;
  p.tol = o.tol;
  p.clock = o.clock == "wall" ? ClockKind::wall : ClockKind::work;
  p.seconds_per_work_unit = o.work_unit_seconds;
  p.stop.max_modeled_time = o.time_limit;
  p.stop.max_wall_time = o.wall_limit;
  if (!o.wall_preset.empty()) p.stop.max_wall_time = wall_preset_for(max_n);
  p.stop.max_escapes = o.max_escapes;
  p.stop.max_iterations = o.max_iterations;
  if (o.target) p.stop.target_value = sense == Sense::maximize ? -*o.target : *o.target;
  p.seed = o.seed;
  return p;
}

struct Loaded {
  InstanceFile file;
  std::vector<BenchInstance> instances;
  std::size_t max_n = 0;
};

Loaded load(const Options& o) {
  Loaded l;
  const Sense sense = *parse_sense(o.sense);
  l.file = load_instance_file(o.instance,
                              o.format == "triple" ? SourceFormat::triple_single
                                                   : SourceFormat::orlib_multi,
                              sense);
  l.instances = bench_instances(l.file);
  for (const auto& p : l.file.problems) l.max_n = std::max(l.max_n, p.problem.size());
  return l;
}

std::optional<BestKnownRegistry> load_registry(const Options& o) {
  if (o.best_known.empty()) return std::nullopt;
  return BestKnownRegistry::load_file(o.best_known);
}

/// Runs `write` against --out, or stdout when it is unset.
template <class Write>
void emit(const std::string& path, Write&& write) {
  if (path.empty()) {
    write(std::cout);
    std::cout.flush();
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open output file '" + path + "'");
  write(out);
  if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

BatteryOptions battery_options(const Options& o) {
  BatteryOptions b;
  b.repetitions = o.reps;
  b.threads = o.threads;
  b.stop_at_best_known = !o.no_stop_at_best;
  return b;
}

int run_solve(const Options& o) {
  const Loaded l = load(o);
  const SolverParams params = make_params(o, l.file.sense, l.max_n);
  const auto registry = load_registry(o);
  BatteryOptions b;
  b.repetitions = 1;
  b.stop_at_best_known = false;
  const BatchReport report = run_battery(l.instances, params, b, registry ? &*registry : nullptr);
  for (const auto& row : report.rows) {
    fmt::print(stderr, "{}: best {} after {} of {} iterations ({}, modeled time {:.3f} s)\n",
               row.instance, row.best_value, row.report.iterations_to_best,
               row.report.total_iterations, to_string(row.report.stop_reason),
               row.report.modeled_time());
    if (o.print_bits) {
      std::string bits;
      for (Bit b : row.report.best_bits) bits.push_back(b ? '1' : '0');
      fmt::print(stderr, "{}\n", bits);
    }
  }
  emit(o.out, [&](std::ostream& out) { write_raw_csv(out, report.rows); });
  return 0;
}

int run_battery_cmd(const Options& o) {
  const Loaded l = load(o);
  const SolverParams params = make_params(o, l.file.sense, l.max_n);
  const auto registry = load_registry(o);
  const BatchReport report =
      run_battery(l.instances, params, battery_options(o), registry ? &*registry : nullptr);
  emit(o.out, [&](std::ostream& out) { write_raw_csv(out, report.rows); });
  if (!o.aggregate_out.empty()) {
    emit(o.aggregate_out, [&](std::ostream& out) { write_aggregate_csv(out, report); });
  }
  std::ostringstream table;
  write_aggregate_table(table, report);
  fmt::print(stderr, "{}", table.str());
  return 0;
}

int run_gap_curve(const Options& o) {
  const Loaded l = load(o);
  const SolverParams params = make_params(o, l.file.sense, l.max_n);
  const auto registry = load_registry(o);
  const auto rows = run_required_gap(l.instances, params, battery_options(o), *registry, o.gap_grid);
  emit(o.out, [&](std::ostream& out) { write_gap_curve(out, rows); });
  return 0;
}

int run_k_sweep_cmd(const Options& o) {
  const Loaded l = load(o);
  const SolverParams params = make_params(o, l.file.sense, l.max_n);
  const auto registry = load_registry(o);
  std::vector<std::size_t> grid = o.k_grid;
  const auto rows =
      run_k_sweep(l.instances, params, grid, battery_options(o), registry ? &*registry : nullptr);
  emit(o.out, [&](std::ostream& out) { write_k_sweep(out, rows); });
  if (rows.size() >= 2) {
    std::vector<double> x, y;
    for (const auto& r : rows) {
      x.push_back(r.log_k);
      y.push_back(r.log_iterations);
    }
    fmt::print(stderr, "slope of log(iterations) vs log(k): {:.4f}\n",
               least_squares_slope(x, y));
  }
  return 0;
}

int run_generate(const GenerateOptions& g) {
  std::vector<NamedProblem> problems;
  if (g.count == 1) {
    problems.push_back({g.name, generate_random(g.n, g.density, g.lo, g.hi, g.seed, g.name)});
  } else {
    problems = generate_suite(g.name, g.count, g.n, g.density, g.lo, g.hi, g.seed);
  }
  emit(g.out, [&](std::ostream& out) { write_orlib(out, problems, Sense::minimize); });
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Decomposition-based QUBO solver and benchmark harness", "gqs"};
  app.require_subcommand(1);
  Options o;
  GenerateOptions g;

  auto* solve_cmd = app.add_subcommand("solve", "Solve each problem in a file once");
  add_instance_options(solve_cmd, o);
  add_solver_options(solve_cmd, o);
  solve_cmd->add_option("--best-known", o.best_known, "Best-known registry for gap columns")
      ->check(CLI::ExistingFile);
  solve_cmd->add_flag("--print-bits", o.print_bits, "Print the best assignment");

  auto* battery_cmd = app.add_subcommand("battery", "Repeated runs with aggregate statistics");
  add_instance_options(battery_cmd, o);
  add_solver_options(battery_cmd, o);
  add_battery_options(battery_cmd, o, false);
  battery_cmd->add_option("--aggregate-out", o.aggregate_out, "Aggregate table as CSV");

  auto* gap_cmd = app.add_subcommand("gap-curve", "Time to reach each required gap");
  add_instance_options(gap_cmd, o);
  add_solver_options(gap_cmd, o);
  add_battery_options(gap_cmd, o, true);
  gap_cmd->add_option("--gap-grid", o.gap_grid, "Required gaps in percent")->delimiter(',');

  auto* ksweep_cmd = app.add_subcommand("k-sweep", "One battery per subproblem size");
  add_instance_options(ksweep_cmd, o);
  add_solver_options(ksweep_cmd, o);
  add_battery_options(ksweep_cmd, o, false);
  ksweep_cmd->add_option("--k-grid", o.k_grid, "Ascending subproblem sizes")->delimiter(',');

  auto* gen_cmd = app.add_subcommand("generate", "Write random instances in OR-Library layout");
  gen_cmd->add_option("--n", g.n, "Variables per problem");
  gen_cmd->add_option("--count", g.count, "Problems in the file")->check(CLI::PositiveNumber);
  gen_cmd->add_option("--density", g.density);
  gen_cmd->add_option("--lo", g.lo);
  gen_cmd->add_option("--hi", g.hi);
  gen_cmd->add_option("--seed", g.seed, "Seed of the first problem; problem c uses seed + c");
  gen_cmd->add_option("--name", g.name);
  gen_cmd->add_option("--out", g.out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*solve_cmd) return run_solve(o);
    if (*battery_cmd) return run_battery_cmd(o);
    if (*gap_cmd) return run_gap_curve(o);
    if (*ksweep_cmd) return run_k_sweep_cmd(o);
    if (*gen_cmd) return run_generate(g);
  } catch (const ParseError& e) {
    fmt::print(stderr, "gqs: {}: {}\n", o.instance, e.what());
    return kExitUsage;
  } catch (const ConfigError& e) {
    fmt::print(stderr, "gqs: invalid configuration: {}\n", e.what());
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    fmt::print(stderr, "gqs: invalid argument: {}\n", e.what());
    return kExitUsage;
  } catch (const std::exception& e) {
    fmt::print(stderr, "gqs: {}\n", e.what());
    return kExitRuntime;
  }
  return kExitUsage;
}
