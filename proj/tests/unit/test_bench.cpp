#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

#include "gqs/bench.hpp"
#include "oracles.hpp"

namespace gqs {
namespace {

struct Suite {
  std::vector<NamedProblem> problems;
  BestKnownRegistry registry;

  std::vector<BenchInstance> instances(Sense sense = Sense::minimize) const {
    std::vector<BenchInstance> out;
    for (const auto& p : problems) out.push_back({p.name, &p.problem, sense});
    return out;
  }
};

// Small problems with registry values from full enumeration.
Suite small_suite(std::size_t count, std::size_t n) {
  Suite s;
  s.problems = generate_suite("s", count, n, 0.5, -20, 20, 3);
  for (const auto& p : s.problems) s.registry.set(p.name, testing::enumerate_min(p.problem).first);
  return s;
}

SolverParams quick_params() {
  SolverParams p;
  p.k = 4;
  p.stop.max_iterations = 300;
  return p;
}

TEST(GapPercent, BothSenses) {
  EXPECT_DOUBLE_EQ(gap_percent(-95, -100, Sense::minimize), 5.0);
  EXPECT_DOUBLE_EQ(gap_percent(95, 100, Sense::maximize), 5.0);
  EXPECT_DOUBLE_EQ(gap_percent(100, 100, Sense::maximize), 0.0);
  EXPECT_LT(gap_percent(101, 100, Sense::maximize), 0.0);
  EXPECT_EQ(gap_percent(0, 0, Sense::minimize), 0.0);
}

TEST(Aggregate, SampleStatistics) {
  std::vector<RawRow> rows(3);
  const double t[] = {1, 2, 6};
  for (int i = 0; i < 3; ++i) {
    rows[i].report.time_to_best = t[i];
    rows[i].report.iterations_to_best = static_cast<std::uint64_t>(t[i]);
    rows[i].gap_pct = i == 0 ? 0.0 : 1.0;
    rows[i].success = i == 0;
  }
  const auto a = aggregate("x", rows);
  EXPECT_EQ(a.repetitions, 3u);
  EXPECT_DOUBLE_EQ(a.mean_time, 3.0);
  EXPECT_DOUBLE_EQ(a.std_time, std::sqrt(7.0));  // (4 + 1 + 9) / 2
  EXPECT_DOUBLE_EQ(a.mean_iterations, 3.0);
  EXPECT_DOUBLE_EQ(a.success_rate, 100.0 / 3.0);
  EXPECT_EQ(aggregate("one", std::span<const RawRow>(rows).first(1)).std_time, 0.0);
}

TEST(RunBattery, TwoVariableExactSolve) {
  Suite s;
  s.problems.push_back({"ex", QuboProblem::from_dense(2, std::vector<double>{-1, -2, -2, 3})});
  s.registry.set("ex", -2.0);
  SolverParams p = quick_params();
  p.oracle = OracleKind::exhaustive;
  const auto r = run_battery(s.instances(), p, {.repetitions = 1}, &s.registry);
  EXPECT_EQ(r.overall.success_rate, 100.0);
  EXPECT_EQ(r.overall.mean_gap, 0.0);
  EXPECT_FALSE(r.stale_registry);
}

TEST(RunBattery, IdenticalSeedsGiveZeroSpread) {
  const auto s = small_suite(1, 20);
  BatteryOptions o;
  o.repetitions = 4;
  o.vary_seed = false;
  o.stop_at_best_known = false;
  const auto r = run_battery(s.instances(), quick_params(), o, &s.registry);
  const auto& a = r.per_instance[0];
  EXPECT_EQ(a.std_time, 0.0);
  EXPECT_EQ(a.std_gap, 0.0);
  EXPECT_EQ(a.std_iterations, 0.0);
  for (const auto& row : r.rows) EXPECT_EQ(row.seed, r.rows[0].seed);
}

TEST(RunBattery, AggregatesRecomputableFromRows) {
  const auto s = small_suite(3, 18);
  BatteryOptions o;
  o.repetitions = 5;
  o.threads = 2;
  const auto r = run_battery(s.instances(), quick_params(), o, &s.registry);
  ASSERT_EQ(r.rows.size(), 15u);
  for (std::size_t i = 0; i < 3; ++i) {
    double time = 0, gap = 0, iters = 0;
    int wins = 0;
    for (std::size_t k = 0; k < 5; ++k) {
      const auto& row = r.rows[i * 5 + k];
      EXPECT_EQ(row.instance, s.problems[i].name);
      EXPECT_EQ(row.seed, k);
      const double best = *s.registry.find(row.instance);
      EXPECT_DOUBLE_EQ(row.gap_pct, 100.0 * (row.best_value - best) / std::abs(best));
      EXPECT_EQ(row.success, row.best_value <= best + 1e-8);
      time += row.report.time_to_best;
      gap += row.gap_pct;
      iters += static_cast<double>(row.report.iterations_to_best);
      wins += row.success;
    }
    const auto& a = r.per_instance[i];
    EXPECT_DOUBLE_EQ(a.mean_time, time / 5);
    EXPECT_DOUBLE_EQ(a.mean_gap, gap / 5);
    EXPECT_DOUBLE_EQ(a.mean_iterations, iters / 5);
    EXPECT_DOUBLE_EQ(a.success_rate, 100.0 * wins / 5);
  }
  // Every gap is non-negative against an exact registry.
  for (const auto& row : r.rows) EXPECT_GE(row.gap_pct, -1e-9);
}

TEST(RunBattery, ThreadCountDoesNotChangeRows) {
  const auto s = small_suite(2, 16);
  BatteryOptions one{.repetitions = 3, .threads = 1};
  BatteryOptions many{.repetitions = 3, .threads = 3};
  const auto a = run_battery(s.instances(), quick_params(), one, &s.registry);
  const auto b = run_battery(s.instances(), quick_params(), many, &s.registry);
  std::ostringstream ca, cb;
  write_raw_csv(ca, a.rows);
  write_raw_csv(cb, b.rows);
  EXPECT_EQ(ca.str(), cb.str());
}

TEST(RunBattery, MaximizationRegistry) {
  // Stored as minimization; the registry and reported values are maxima.
  Suite s = small_suite(1, 12);
  const double best_min = *s.registry.find(s.problems[0].name);
  s.registry.set(s.problems[0].name, -best_min);
  const auto r = run_battery(s.instances(Sense::maximize), quick_params(), {.repetitions = 2},
                             &s.registry);
  for (const auto& row : r.rows) {
    EXPECT_EQ(row.best_value, -row.report.best_value);
    EXPECT_GE(row.gap_pct, 0.0);
  }
}

TEST(RunBattery, MissingRegistryEntryAndStaleRegistry) {
  auto s = small_suite(1, 12);
  BestKnownRegistry empty;
  EXPECT_THROW(run_battery(s.instances(), quick_params(), {.repetitions = 1}, &empty),
               ConfigError);
  const auto no_gap = run_battery(s.instances(), quick_params(), {.repetitions = 1}, nullptr);
  EXPECT_TRUE(std::isnan(no_gap.rows[0].gap_pct));

  BestKnownRegistry stale;
  stale.set(s.problems[0].name, *s.registry.find(s.problems[0].name) + 50);
  const auto r = run_battery(s.instances(), quick_params(),
                             {.repetitions = 1, .stop_at_best_known = false}, &stale);
  EXPECT_TRUE(r.stale_registry);
  EXPECT_LT(r.rows[0].gap_pct, 0.0);  // reported, not clamped
}

TEST(RequiredGap, MonotoneAndInfiniteGap) {
  const auto s = small_suite(2, 24);
  const std::vector<double> grid{std::numeric_limits<double>::infinity(), 5.0, 1.0, 0.0};
  SolverParams p = quick_params();
  p.stop.max_iterations = 2000;
  const auto rows = run_required_gap(s.instances(), p, {.repetitions = 6}, s.registry, grid);
  ASSERT_EQ(rows.size(), 8u);
  for (std::size_t i = 0; i < 2; ++i) {
    EXPECT_EQ(rows[i * 4].mean_iterations, 0.0);  // satisfied by the start point
    EXPECT_EQ(rows[i * 4].reached, 6u);
    for (std::size_t j = 1; j < 4; ++j) {
      EXPECT_GE(rows[i * 4 + j].mean_time, rows[i * 4 + j - 1].mean_time);
    }
  }
}

TEST(RequiredGap, ZeroGapMatchesBatteryTimeToBest) {
  const auto s = small_suite(1, 20);
  SolverParams p = quick_params();
  p.stop.max_iterations = 3000;
  const std::vector<double> grid{0.0};
  const auto rows = run_required_gap(s.instances(), p, {.repetitions = 4}, s.registry, grid);
  const auto bat = run_battery(s.instances(), p, {.repetitions = 4}, &s.registry);
  ASSERT_EQ(rows[0].reached, 4u);
  EXPECT_EQ(bat.overall.success_rate, 100.0);
  EXPECT_DOUBLE_EQ(rows[0].mean_time, bat.overall.mean_time);
  EXPECT_DOUBLE_EQ(rows[0].mean_iterations, bat.overall.mean_iterations);
}

TEST(KSweep, ShapeAndSingleCallRegime) {
  const auto s = small_suite(2, 12);
  SolverParams p = quick_params();
  p.oracle = OracleKind::exhaustive;
  const std::vector<std::size_t> grid{3, 6, 12};
  const auto rows = run_k_sweep(s.instances(), p, grid, {.repetitions = 3}, &s.registry);
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[2].k, 12u);
  EXPECT_LE(rows[2].mean_iterations, 1.0);
  EXPECT_EQ(rows[2].success_rate, 100.0);
  const std::vector<std::size_t> bad{6, 3};
  EXPECT_THROW(run_k_sweep(s.instances(), p, bad, {}, &s.registry), ConfigError);
}

TEST(LeastSquaresSlope, Line) {
  const std::vector<double> x{0, 1, 2, 3}, y{1, -1, -3, -5};
  EXPECT_DOUBLE_EQ(least_squares_slope(x, y), -2.0);
  EXPECT_THROW(least_squares_slope(std::vector<double>{1}, std::vector<double>{1}),
               std::invalid_argument);
}

TEST(Writers, RawCsvHeaderAndRowCount) {
  const auto s = small_suite(1, 10);
  const auto r = run_battery(s.instances(), quick_params(), {.repetitions = 2}, &s.registry);
  std::ostringstream out;
  write_raw_csv(out, r.rows);
  std::istringstream in(out.str());
  std::string header;
  std::getline(in, header);
  EXPECT_EQ(header,
            "instance,seed,best_value,gap_pct,iterations_to_best,total_iterations,quantum_time,"
            "classical_time,time_to_best,escapes,stop_reason");
  int lines = 0;
  for (std::string l; std::getline(in, l);) ++lines;
  EXPECT_EQ(lines, 2);
  std::ostringstream t, c;
  write_aggregate_table(t, r);
  write_aggregate_csv(c, r);
  EXPECT_NE(t.str().find(s.problems[0].name), std::string::npos);
  EXPECT_NE(c.str().find(s.problems[0].name), std::string::npos);
}

}  // namespace
}  // namespace gqs
