#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gqs/instance_io.hpp"
#include "gqs/solver.hpp"

namespace gqs {

struct BenchInstance {
  std::string name;
  /// Minimization form, as produced by the parsers.
  const QuboProblem* problem;
  /// Sense the registry and the reported values use.
  Sense sense = Sense::minimize;
};

std::vector<BenchInstance> bench_instances(const InstanceFile& file);

struct BatteryOptions {
  std::size_t repetitions = 32;
  /// Worker threads; repetitions are independent.
  std::size_t threads = 1;
  /// Repetition r uses seed base + r; when false every repetition uses base.
  bool vary_seed = true;
  /// Stop a repetition once it reaches the best-known value.
  bool stop_at_best_known = true;
};

/// One repetition. Values are in the instance's own sense.
struct RawRow {
  std::string instance;
  std::uint64_t seed = 0;
  double best_value = 0.0;
  /// NaN without a registry entry.
  double gap_pct = 0.0;
  bool success = false;
  SolveReport report;
};

struct Aggregate {
  std::string name;
  std::size_t repetitions = 0;
  double mean_time = 0.0;
  double std_time = 0.0;
  double mean_gap = 0.0;
  double std_gap = 0.0;
  double success_rate = 0.0;
  double mean_iterations = 0.0;
  double std_iterations = 0.0;
};

struct BatchReport {
  std::vector<Aggregate> per_instance;
  /// Over every repetition of every instance.
  Aggregate overall;
  std::vector<RawRow> rows;
  /// Set when a repetition beat its best-known value by more than tol.
  bool stale_registry = false;
};

/// 100 (found - best) / |best| in the minimization sense.
double gap_percent(double found, double best_known, Sense sense);

/// Sample mean/std (n - 1 denominator; 0 for a single value).
Aggregate aggregate(const std::string& name, std::span<const RawRow> rows);

/// Runs `options.repetitions` solves per instance. Throws ConfigError when a
/// registry is given but lacks an instance.
BatchReport run_battery(std::span<const BenchInstance> instances, const SolverParams& params,
                        const BatteryOptions& options, const BestKnownRegistry* registry);

struct GapCurveRow {
  std::string instance;
  double gap_pct = 0.0;
  double mean_time = 0.0;
  double std_time = 0.0;
  double mean_iterations = 0.0;
  /// Repetitions that reached the gap; the others count at their stop time.
  std::size_t reached = 0;
  std::size_t repetitions = 0;
};

/// Modeled time for each repetition to first reach each gap in the grid. One
/// run per repetition stops at the tightest gap; looser gaps are read off the
/// same trajectory, which is identical up to that point.
std::vector<GapCurveRow> run_required_gap(std::span<const BenchInstance> instances,
                                          const SolverParams& params,
                                          const BatteryOptions& options,
                                          const BestKnownRegistry& registry,
                                          std::span<const double> gap_grid);

struct KSweepRow {
  std::size_t k = 0;
  double mean_time = 0.0;
  double mean_gap = 0.0;
  double mean_iterations = 0.0;
  double success_rate = 0.0;
  double log_k = 0.0;
  double log_time = 0.0;
  double log_iterations = 0.0;
  BatchReport battery;
};

/// One battery per k, with TT = round(0.6 N / k) and oracle conv_len = 10 k.
std::vector<KSweepRow> run_k_sweep(std::span<const BenchInstance> instances,
                                   const SolverParams& params, std::span<const std::size_t> k_grid,
                                   const BatteryOptions& options, const BestKnownRegistry* registry);

/// Least-squares slope of y against x.
double least_squares_slope(std::span<const double> x, std::span<const double> y);

void write_raw_csv(std::ostream& out, std::span<const RawRow> rows);
void write_aggregate_table(std::ostream& out, const BatchReport& report);
void write_aggregate_csv(std::ostream& out, const BatchReport& report);
void write_gap_curve(std::ostream& out, std::span<const GapCurveRow> rows);
void write_k_sweep(std::ostream& out, std::span<const KSweepRow> rows);

}  // namespace gqs
