#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string_view>

#include "gqs/construction.hpp"
#include "gqs/escapes.hpp"
#include "gqs/gains.hpp"
#include "gqs/problem.hpp"
#include "gqs/suboptimizer.hpp"
#include "gqs/variable_choice.hpp"

namespace gqs {

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class EscapeKind { path_relinking, f_smart };
enum class InitKind { random, deterministic_greedy, randomized_greedy };
enum class OracleKind { tabu1opt, exhaustive };
enum class ImprovePhase { off, after_escape, after_convergence, probabilistic };

/// What a step must improve (by more than tol) to reset the convergence count:
/// the run's incumbent V_min, or the lowest value seen since the last escape.
enum class ConvergenceRef { incumbent, phase };

/// How classical (non-oracle) time is charged. `work` counts touched matrix
/// entries and other elementary steps and converts them at a fixed rate, so a
/// run is reproducible bit for bit. `wall` measures it with a steady clock.
enum class ClockKind { work, wall };

enum class StopReason { none, modeled_time, wall_time, max_escapes, target, max_iterations };

std::string_view to_string(StopReason reason) noexcept;

struct StoppingCriteria {
  std::optional<double> max_modeled_time;
  std::optional<double> max_wall_time;
  std::optional<std::size_t> max_escapes;
  /// Stop once V_min <= target + tol.
  std::optional<double> target_value;
  std::optional<std::uint64_t> max_iterations;

  bool any() const noexcept {
    return max_modeled_time || max_wall_time || max_escapes || target_value || max_iterations;
  }
};

struct SolverParams {
  std::size_t k = 50;
  /// Consecutive steps since the last escape without an improvement (see
  /// ConvergenceRef) before the search is declared converged.
  std::size_t cl = 3;
  ConvergenceRef convergence = ConvergenceRef::incumbent;
  /// k-opt tabu tenure; round(0.6 N / k) when unset.
  std::optional<std::size_t> tt;
  bool whole_group = true;
  /// Fusion-guided choices after each fusion escape.
  std::size_t fusion_budget = 1;
  double tol = 1e-8;
  EscapeKind escape = EscapeKind::path_relinking;
  ChoiceKind choice = ChoiceKind::gains;
  InitKind init = InitKind::random;

  ImprovePhase improve = ImprovePhase::off;
  double improve_probability = 0.0;
  std::size_t improve_tenure = 0;
  /// Defaults to N.
  std::optional<std::size_t> improve_conv_len;

  OracleKind oracle = OracleKind::tabu1opt;
  std::size_t oracle_tenure_lo = 15;
  std::size_t oracle_tenure_hi = 20;
  /// Defaults to 10 k.
  std::optional<std::size_t> oracle_conv_len;
  double presumed_time = 0.02;

  std::size_t refset_capacity = 10;
  /// Seed the reference set with random configurations before the first
  /// escape, so fusion starts at once; otherwise it fills with converged runs.
  bool refset_random_init = true;
  PathRelinkingParams path_relinking{};
  /// Defaults to FSmartParams::defaults(N, k).
  std::optional<FSmartParams> f_smart;

  ClockKind clock = ClockKind::work;
  double seconds_per_work_unit = 4e-9;

  StoppingCriteria stop{};
  std::uint64_t seed = 0;

  /// Throws ConfigError describing the first invalid field.
  void validate(std::size_t n) const;
};

struct SolveReport {
  double best_value = 0.0;
  BitVector best_bits;
  std::uint64_t iterations_to_best = 0;
  std::uint64_t total_iterations = 0;
  double quantum_time = 0.0;
  double classical_time = 0.0;
  /// Modeled clock (quantum + classical) when the best was found.
  double time_to_best = 0.0;
  std::size_t escapes = 0;
  StopReason stop_reason = StopReason::none;
  std::uint64_t oracle_failures = 0;
  std::uint64_t improvement_phases = 0;

  double modeled_time() const noexcept { return quantum_time + classical_time; }
  friend bool operator==(const SolveReport&, const SolveReport&) = default;
};

struct StepEvent {
  enum class Kind { start, oracle, improvement, escape };
  Kind kind;
  std::uint64_t iteration;
  double current_value;
  double best_value;
  /// Modeled clock at this event.
  double modeled_time;
  const GainsState& state;
};

struct SolveHooks {
  /// Called after initialization, every step and every escape.
  std::function<void(const StepEvent&)> observer;
  /// Replaces the built-in oracle; called once per run with the effective k.
  std::function<std::unique_ptr<Oracle>(std::size_t k, Rng& rng)> oracle_factory;
};

/// Decomposition search: repeatedly hands k variables to the oracle with the
/// rest clamped, escaping after convergence, until a stopping criterion fires.
/// Returns the best configuration seen.
SolveReport solve(const QuboProblem& problem, const SolverParams& params,
                  const SolveHooks& hooks = {});

/// Full-problem single-flip tabu search from the state's bits; the state ends
/// at the best assignment visited. Returns the number of steps taken.
std::uint64_t improvement_phase_1opt(GainsState& state, std::size_t tenure,
                                     std::size_t conv_len, double tol = 1e-8);

}  // namespace gqs
