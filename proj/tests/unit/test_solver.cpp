#include <gtest/gtest.h>

#include <random>
#include <vector>

#include "gqs/solver.hpp"
#include "oracles.hpp"

namespace gqs {
namespace {

QuboProblem q_ex() { return QuboProblem::from_dense(2, std::vector<double>{-1, -2, -2, 3}); }

SolverParams small_params(std::size_t k, std::uint64_t seed) {
  SolverParams p;
  p.k = k;
  p.seed = seed;
  p.stop.max_iterations = 200;
  return p;
}

TEST(SolverParams, ValidationRejectsBadFields) {
  const std::size_t n = 10;
  auto p = small_params(3, 0);
  EXPECT_NO_THROW(p.validate(n));
  auto bad = p;
  bad.k = 0;
  EXPECT_THROW(bad.validate(n), ConfigError);
  bad = p;
  bad.cl = 0;
  EXPECT_THROW(bad.validate(n), ConfigError);
  bad = p;
  bad.tol = -1;
  EXPECT_THROW(bad.validate(n), ConfigError);
  bad = p;
  bad.improve_probability = 1.5;
  EXPECT_THROW(bad.validate(n), ConfigError);
  bad = p;
  bad.presumed_time = -0.1;
  EXPECT_THROW(bad.validate(n), ConfigError);
  bad = p;
  bad.stop = {};
  EXPECT_THROW(bad.validate(n), ConfigError);
  bad = p;
  bad.oracle = OracleKind::exhaustive;
  bad.k = 30;
  EXPECT_THROW(bad.validate(40), ConfigError);
  EXPECT_NO_THROW(bad.validate(20));  // effective k is min(k, N)
  EXPECT_THROW(solve(q_ex(), [] {
                 SolverParams s;
                 s.stop = {};
                 return s;
               }()),
               ConfigError);
}

TEST(Solve, ExhaustiveWholeProblemIsOptimalInOneCall) {
  std::mt19937_64 eng(31);
  for (int t = 0; t < 25; ++t) {
    const std::size_t n = 4 + eng() % 13;
    const auto q = testing::random_dense(n, 0.2 + 0.8 * (eng() % 5) / 4.0, -50, 50, eng())
                       .problem();
    auto p = small_params(n, eng());
    p.oracle = OracleKind::exhaustive;
    p.stop = {};
    p.stop.max_escapes = 2;
    const auto r = solve(q, p);
    EXPECT_EQ(r.best_value, testing::enumerate_min(q).first);
    EXPECT_LE(r.iterations_to_best, 1u);
  }
}

TEST(Solve, SmallExampleReachesOptimum) {
  auto p = small_params(1, 3);
  const auto r = solve(q_ex(), p);
  EXPECT_EQ(r.best_value, -2.0);
  EXPECT_EQ(r.best_bits, (BitVector{1, 1}));
}

TEST(Solve, FlatLandscape) {
  const QuboProblem q(12);
  auto p = small_params(4, 1);
  p.stop = {};
  p.stop.max_escapes = 3;
  const auto r = solve(q, p);
  EXPECT_EQ(r.best_value, 0.0);
  EXPECT_EQ(r.iterations_to_best, 0u);
  EXPECT_EQ(r.stop_reason, StopReason::max_escapes);
  EXPECT_EQ(r.escapes, 3u);
  EXPECT_EQ(r.total_iterations, 3u * p.cl);
}

TEST(Solve, DeterministicUnderSeed) {
  const auto q = testing::random_dense(60, 0.3, -100, 100, 4).problem();
  for (auto escape : {EscapeKind::path_relinking, EscapeKind::f_smart}) {
    auto p = small_params(10, 77);
    p.escape = escape;
    p.choice = ChoiceKind::coupling;
    EXPECT_EQ(solve(q, p), solve(q, p));
  }
}

TEST(Solve, ReportInvariants) {
  const auto q = testing::random_dense(40, 0.4, -100, 100, 5).problem();
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    auto p = small_params(8, seed);
    p.improve = ImprovePhase::probabilistic;
    p.improve_probability = 0.1;
    const auto r = solve(q, p);
    EXPECT_EQ(r.best_value, evaluate(q, r.best_bits));
    EXPECT_LE(r.iterations_to_best, r.total_iterations);
    EXPECT_EQ(r.quantum_time, static_cast<double>(r.total_iterations) * p.presumed_time);
    EXPECT_LE(r.time_to_best, r.modeled_time());
  }
}

TEST(Solve, IncumbentMonotoneAndCacheExact) {
  const auto q = testing::random_dense(50, 0.3, -100, 100, 6).problem();
  for (auto improve : {ImprovePhase::off, ImprovePhase::after_escape,
                       ImprovePhase::after_convergence}) {
    auto p = small_params(7, 9);
    p.improve = improve;
    double last_best = 1e300;
    std::uint64_t escapes = 0, since_escape = 0;
    SolveHooks h;
    h.observer = [&](const StepEvent& e) {
      EXPECT_LE(e.best_value, last_best);
      last_best = e.best_value;
      EXPECT_EQ(e.current_value, evaluate(q, e.state.bits()));
      if (e.kind == StepEvent::Kind::oracle) ++since_escape;
      if (e.kind == StepEvent::Kind::escape) {
        ++escapes;
        EXPECT_GE(since_escape, p.cl);
        since_escape = 0;
      }
    };
    const auto r = solve(q, p, h);
    EXPECT_EQ(r.escapes, escapes);
  }
}

TEST(Solve, IdentityOracleConvergesByCl) {
  const auto q = testing::random_dense(30, 0.5, -10, 10, 7).problem();
  auto p = small_params(5, 1);
  p.stop = {};
  p.stop.max_escapes = 4;
  SolveHooks h;
  h.oracle_factory = [](std::size_t, Rng&) { return std::make_unique<IdentityOracle>(); };
  const auto r = solve(q, p, h);
  EXPECT_EQ(r.escapes, 4u);
  EXPECT_EQ(r.total_iterations, 4u * p.cl);
}

class FailingOracle final : public Oracle {
 public:
  FailingOracle() : Oracle(0.02) {}
  std::string name() const override { return "failing"; }

 protected:
  OracleResult run(const Subproblem&, Rng&) const override {
    throw OracleUnavailable("offline");
  }
};

TEST(Solve, OracleFailureIsANoOp) {
  const auto q = testing::random_dense(20, 0.5, -10, 10, 8).problem();
  auto p = small_params(5, 2);
  p.stop = {};
  p.stop.max_iterations = 6;
  SolveHooks h;
  h.oracle_factory = [](std::size_t, Rng&) { return std::make_unique<FailingOracle>(); };
  const auto r = solve(q, p, h);
  EXPECT_EQ(r.oracle_failures, 6u);
  EXPECT_EQ(r.total_iterations, 6u);
}

TEST(Solve, StopsAtTarget) {
  const auto q = q_ex();
  auto p = small_params(2, 0);
  p.stop.target_value = -2.0;
  const auto r = solve(q, p);
  EXPECT_EQ(r.stop_reason, StopReason::target);
  EXPECT_EQ(r.best_value, -2.0);
}

TEST(Solve, ModeledTimeLimit) {
  const auto q = testing::random_dense(40, 0.4, -100, 100, 10).problem();
  auto p = small_params(8, 3);
  p.stop = {};
  p.stop.max_modeled_time = 1.0;
  const auto r = solve(q, p);
  EXPECT_EQ(r.stop_reason, StopReason::modeled_time);
  EXPECT_GE(r.modeled_time(), 1.0);
  EXPECT_LE(r.total_iterations, 50u);
}

TEST(Solve, KLargerThanProblemIsClamped) {
  const auto q = testing::random_dense(6, 0.8, -10, 10, 11).problem();
  auto p = small_params(50, 0);
  p.stop.max_iterations = 20;
  const auto r = solve(q, p);
  EXPECT_EQ(r.best_value, testing::enumerate_min(q).first);
}

TEST(ImprovementPhase, SmallExample) {
  const auto q = q_ex();
  GainsState s(q, {0, 1});
  improvement_phase_1opt(s, 0, 2);
  EXPECT_EQ(s.value(), -2.0);
}

TEST(ImprovementPhase, FixedPointAndMonotone) {
  std::mt19937_64 eng(12);
  for (int t = 0; t < 100; ++t) {
    const auto q = testing::random_dense(50, 0.2, -100, 100, eng()).problem();
    GainsState s(q, testing::random_assignment(50, eng()));
    const double before = s.value();
    improvement_phase_1opt(s, 0, 50);
    EXPECT_LE(s.value(), before);
    EXPECT_EQ(s.value(), evaluate(q, s.bits()));
    if (t < 10) {
      const BitVector local(s.bits().begin(), s.bits().end());
      improvement_phase_1opt(s, 0, 50);
      EXPECT_EQ(BitVector(s.bits().begin(), s.bits().end()), local);
    }
  }
}

TEST(StopReason, Names) {
  EXPECT_EQ(to_string(StopReason::target), "target");
  EXPECT_EQ(to_string(StopReason::max_iterations), "max_iterations");
}

}  // namespace
}  // namespace gqs
