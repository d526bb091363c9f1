#include "gqs/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <thread>

#include <fmt/format.h>
#include <fmt/ostream.h>

namespace gqs {

namespace {

template <class Fn>
void parallel_for(std::size_t count, std::size_t threads, Fn&& fn) {
  threads = std::max<std::size_t>(1, std::min(threads, count));
  if (threads == 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(threads);
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (std::size_t t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      try {
        for (std::size_t i = next++; i < count; i = next++) fn(i);
      } catch (...) {
        errors[t] = std::current_exception();
        next = count;
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

double to_min_sense(double v, Sense sense) { return sense == Sense::maximize ? -v : v; }

struct MeanStd {
  double mean = 0.0;
  double std = 0.0;
};

MeanStd mean_std(const std::vector<double>& xs) {
  MeanStd out;
  if (xs.empty()) return out;
  for (double x : xs) out.mean += x;
  out.mean /= static_cast<double>(xs.size());
  if (xs.size() > 1) {
    double ss = 0.0;
    for (double x : xs) ss += (x - out.mean) * (x - out.mean);
    out.std = std::sqrt(ss / static_cast<double>(xs.size() - 1));
  }
  return out;
}

void require_registry(std::span<const BenchInstance> instances,
                      const BestKnownRegistry& registry) {
  for (const auto& inst : instances) {
    if (!registry.contains(inst.name)) {
      throw ConfigError("no best-known value for instance '" + inst.name + "'");
    }
  }
}

std::uint64_t rep_seed(const SolverParams& params, const BatteryOptions& options,
                       std::size_t r) {
  return options.vary_seed ? params.seed + r : params.seed;
}

}  // namespace

std::vector<BenchInstance> bench_instances(const InstanceFile& file) {
  std::vector<BenchInstance> out;
  for (const auto& p : file.problems) out.push_back({p.name, &p.problem, file.sense});
  return out;
}

double gap_percent(double found, double best_known, Sense sense) {
  const double f = to_min_sense(found, sense);
  const double b = to_min_sense(best_known, sense);
  if (b == 0.0) return f == b ? 0.0 : std::numeric_limits<double>::infinity();
  return 100.0 * (f - b) / std::abs(b);
}

Aggregate aggregate(const std::string& name, std::span<const RawRow> rows) {
  Aggregate a;
  a.name = name;
  a.repetitions = rows.size();
  std::vector<double> times, gaps, iters;
  std::size_t wins = 0;
  for (const auto& r : rows) {
    times.push_back(r.report.time_to_best);
    gaps.push_back(r.gap_pct);
    iters.push_back(static_cast<double>(r.report.iterations_to_best));
    wins += r.success;
  }
  const auto t = mean_std(times);
  const auto g = mean_std(gaps);
  const auto it = mean_std(iters);
  a.mean_time = t.mean;
  a.std_time = t.std;
  a.mean_gap = g.mean;
  a.std_gap = g.std;
  a.mean_iterations = it.mean;
  a.std_iterations = it.std;
  a.success_rate = rows.empty() ? 0.0 : 100.0 * static_cast<double>(wins) /
                                            static_cast<double>(rows.size());
  return a;
}

BatchReport run_battery(std::span<const BenchInstance> instances, const SolverParams& params,
                        const BatteryOptions& options, const BestKnownRegistry* registry) {
  if (registry) require_registry(instances, *registry);
  const std::size_t reps = options.repetitions;
  if (reps == 0) throw ConfigError("repetitions must be at least 1");

  BatchReport report;
  report.rows.resize(instances.size() * reps);
  parallel_for(report.rows.size(), options.threads, [&](std::size_t task) {
    const auto& inst = instances[task / reps];
    SolverParams p = params;
    p.seed = rep_seed(params, options, task % reps);
    std::optional<double> best_native;
    if (registry) best_native = registry->find(inst.name);
    if (best_native && options.stop_at_best_known) {
      const double target = to_min_sense(*best_native, inst.sense);
      p.stop.target_value = p.stop.target_value ? std::max(*p.stop.target_value, target) : target;
    }
    RawRow row;
    row.instance = inst.name;
    row.seed = p.seed;
    row.report = solve(*inst.problem, p);
    row.best_value = to_min_sense(row.report.best_value, inst.sense);
    if (best_native) {
      row.gap_pct = gap_percent(row.best_value, *best_native, inst.sense);
      const double best_min = to_min_sense(*best_native, inst.sense);
      row.success = row.report.best_value <= best_min + params.tol;
    } else {
      row.gap_pct = std::numeric_limits<double>::quiet_NaN();
    }
    report.rows[task] = std::move(row);
  });

  for (std::size_t task = 0; registry && task < report.rows.size(); ++task) {
    const auto& row = report.rows[task];
    const auto sense = instances[task / reps].sense;
    const double best_native = *registry->find(row.instance);
    if (row.report.best_value < to_min_sense(best_native, sense) - params.tol) {
      report.stale_registry = true;
      std::fprintf(stderr,
                   "gqs: WARNING %s seed %llu found %.17g, better than best-known %.17g; "
                   "registry is stale\n",
                   row.instance.c_str(), static_cast<unsigned long long>(row.seed),
                   row.best_value, best_native);
    }
  }

  for (std::size_t i = 0; i < instances.size(); ++i) {
    report.per_instance.push_back(aggregate(
        instances[i].name, std::span<const RawRow>(report.rows).subspan(i * reps, reps)));
  }
  report.overall = aggregate("all", report.rows);
  return report;
}

std::vector<GapCurveRow> run_required_gap(std::span<const BenchInstance> instances,
                                          const SolverParams& params,
                                          const BatteryOptions& options,
                                          const BestKnownRegistry& registry,
                                          std::span<const double> gap_grid) {
  require_registry(instances, registry);
  if (gap_grid.empty()) throw ConfigError("gap grid is empty");
  const std::size_t reps = options.repetitions;
  if (reps == 0) throw ConfigError("repetitions must be at least 1");
  const std::size_t g = gap_grid.size();

  struct Hit {
    double time = 0.0;
    double iterations = 0.0;
    bool reached = false;
  };
  std::vector<Hit> hits(instances.size() * reps * g);

  parallel_for(instances.size() * reps, options.threads, [&](std::size_t task) {
    const auto& inst = instances[task / reps];
    const double best_min = to_min_sense(*registry.find(inst.name), inst.sense);
    std::vector<double> thresholds(g);
    for (std::size_t j = 0; j < g; ++j) {
      thresholds[j] = std::isinf(gap_grid[j]) ? std::numeric_limits<double>::infinity()
                                              : best_min + gap_grid[j] / 100.0 * std::abs(best_min);
    }
    SolverParams p = params;
    p.seed = rep_seed(params, options, task % reps);
    const double tightest = *std::min_element(thresholds.begin(), thresholds.end());
    p.stop.target_value = p.stop.target_value ? std::max(*p.stop.target_value, tightest) : tightest;

    Hit* mine = &hits[task * g];
    SolveHooks hooks;
    hooks.observer = [&](const StepEvent& e) {
      for (std::size_t j = 0; j < g; ++j) {
        if (!mine[j].reached && e.best_value <= thresholds[j] + params.tol) {
          mine[j] = {e.modeled_time, static_cast<double>(e.iteration), true};
        }
      }
    };
    const SolveReport rep = solve(*inst.problem, p, hooks);
    for (std::size_t j = 0; j < g; ++j) {
      if (!mine[j].reached) {
        mine[j] = {rep.modeled_time(), static_cast<double>(rep.total_iterations), false};
      }
    }
  });

  std::vector<GapCurveRow> out;
  for (std::size_t i = 0; i < instances.size(); ++i) {
    for (std::size_t j = 0; j < g; ++j) {
      std::vector<double> times, iters;
      std::size_t reached = 0;
      for (std::size_t r = 0; r < reps; ++r) {
        const Hit& h = hits[(i * reps + r) * g + j];
        times.push_back(h.time);
        iters.push_back(h.iterations);
        reached += h.reached;
      }
      const auto t = mean_std(times);
      out.push_back({instances[i].name, gap_grid[j], t.mean, t.std, mean_std(iters).mean, reached,
                     reps});
    }
  }
  return out;
}

std::vector<KSweepRow> run_k_sweep(std::span<const BenchInstance> instances,
                                   const SolverParams& params, std::span<const std::size_t> k_grid,
                                   const BatteryOptions& options,
                                   const BestKnownRegistry* registry) {
  if (!std::is_sorted(k_grid.begin(), k_grid.end())) throw ConfigError("k grid must be ascending");
  std::vector<KSweepRow> out;
  for (std::size_t k : k_grid) {
    SolverParams p = params;
    p.k = k;
    p.tt.reset();
    p.oracle_conv_len.reset();
    KSweepRow row;
    row.k = k;
    row.battery = run_battery(instances, p, options, registry);
    const auto& all = row.battery.overall;
    row.mean_time = all.mean_time;
    row.mean_gap = all.mean_gap;
    row.mean_iterations = all.mean_iterations;
    row.success_rate = all.success_rate;
    row.log_k = std::log(static_cast<double>(k));
    row.log_time = std::log(row.mean_time);
    row.log_iterations = std::log(row.mean_iterations);
    out.push_back(std::move(row));
  }
  return out;
}

double least_squares_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw std::invalid_argument("slope needs at least two paired points");
  }
  const double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  if (sxx == 0.0) throw std::invalid_argument("slope undefined for constant x");
  return sxy / sxx;
}

void write_raw_csv(std::ostream& out, std::span<const RawRow> rows) {
  fmt::print(out,
             "instance,seed,best_value,gap_pct,iterations_to_best,total_iterations,"
             "quantum_time,classical_time,time_to_best,escapes,stop_reason\n");
  for (const auto& r : rows) {
    fmt::print(out, "{},{},{:.17g},{:.6f},{},{},{:.6f},{:.6f},{:.6f},{},{}\n", r.instance, r.seed,
               r.best_value, r.gap_pct, r.report.iterations_to_best, r.report.total_iterations,
               r.report.quantum_time, r.report.classical_time, r.report.time_to_best,
               r.report.escapes, to_string(r.report.stop_reason));
  }
}

void write_aggregate_table(std::ostream& out, const BatchReport& report) {
  fmt::print(out, "{:<16} {:>9} {:>9} {:>8} {:>8} {:>8} {:>9} {:>9}\n", "name", "<T>", "STD(T)",
             "<G>", "STD(G)", "succ.", "<I>", "STD(I)");
  auto line = [&](const Aggregate& a) {
    fmt::print(out, "{:<16} {:>9.2f} {:>9.2f} {:>8.2f} {:>8.2f} {:>8.2f} {:>9.1f} {:>9.1f}\n",
               a.name, a.mean_time, a.std_time, a.mean_gap, a.std_gap, a.success_rate,
               a.mean_iterations, a.std_iterations);
  };
  for (const auto& a : report.per_instance) line(a);
  line(report.overall);
}

void write_aggregate_csv(std::ostream& out, const BatchReport& report) {
  fmt::print(out, "name,repetitions,mean_time,std_time,mean_gap,std_gap,success_rate,"
                  "mean_iterations,std_iterations\n");
  auto line = [&](const Aggregate& a) {
    fmt::print(out, "{},{},{:.6f},{:.6f},{:.6f},{:.6f},{:.4f},{:.4f},{:.4f}\n", a.name,
               a.repetitions, a.mean_time, a.std_time, a.mean_gap, a.std_gap, a.success_rate,
               a.mean_iterations, a.std_iterations);
  };
  for (const auto& a : report.per_instance) line(a);
  line(report.overall);
}

void write_gap_curve(std::ostream& out, std::span<const GapCurveRow> rows) {
  fmt::print(out, "instance,gap_pct,mean_time,std_time,mean_iterations,reached,repetitions\n");
  for (const auto& r : rows) {
    fmt::print(out, "{},{},{:.6f},{:.6f},{:.4f},{},{}\n", r.instance, r.gap_pct, r.mean_time,
               r.std_time, r.mean_iterations, r.reached, r.repetitions);
  }
}

void write_k_sweep(std::ostream& out, std::span<const KSweepRow> rows) {
  fmt::print(out, "k,mean_time,mean_gap,mean_iterations,success_rate,log_k,log_time,"
                  "log_iterations\n");
  for (const auto& r : rows) {
    fmt::print(out, "{},{:.6f},{:.6f},{:.4f},{:.4f},{:.6f},{:.6f},{:.6f}\n", r.k, r.mean_time,
               r.mean_gap, r.mean_iterations, r.success_rate, r.log_k, r.log_time,
               r.log_iterations);
  }
}

}  // namespace gqs
