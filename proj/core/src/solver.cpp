#include "gqs/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <string>

#include "gqs/tabu_queue.hpp"
#include "gqs/tabu_search.hpp"

namespace gqs {

std::string_view to_string(StopReason reason) noexcept {
  switch (reason) {
    case StopReason::none: return "none";
    case StopReason::modeled_time: return "modeled_time";
    case StopReason::wall_time: return "wall_time";
    case StopReason::max_escapes: return "max_escapes";
    case StopReason::target: return "target";
    case StopReason::max_iterations: return "max_iterations";
  }
  return "unknown";
}

void SolverParams::validate(std::size_t n) const {
  if (k == 0) throw ConfigError("k must be at least 1");
  if (cl == 0) throw ConfigError("convergence length must be at least 1");
  if (!(tol >= 0.0)) throw ConfigError("tol must be non-negative");
  if (!(presumed_time >= 0.0)) throw ConfigError("presumed time must be non-negative");
  if (!(improve_probability >= 0.0 && improve_probability <= 1.0)) {
    throw ConfigError("improvement probability must lie in [0, 1]");
  }
  if (improve == ImprovePhase::probabilistic && improve_probability == 1.0 &&
      !stop.max_modeled_time && !stop.max_wall_time && !stop.target_value &&
      !stop.max_escapes) {
    // Every step is an improvement phase, so iteration limits never trigger.
    throw ConfigError("improvement probability 1 needs a time, escape or target limit");
  }
  if (oracle_tenure_lo > oracle_tenure_hi) throw ConfigError("oracle tenure range is empty");
  if (oracle_conv_len && *oracle_conv_len == 0) throw ConfigError("oracle conv_len must be >= 1");
  if (improve_conv_len && *improve_conv_len == 0) {
    throw ConfigError("improvement conv_len must be >= 1");
  }
  if (refset_capacity == 0) throw ConfigError("reference set capacity must be >= 1");
  if (!(path_relinking.child_fraction >= 0.0 && path_relinking.child_fraction <= 0.5)) {
    throw ConfigError("child fraction must lie in [0, 0.5]");
  }
  if (!(seconds_per_work_unit >= 0.0)) throw ConfigError("work unit cost must be >= 0");
  if (!stop.any()) throw ConfigError("at least one stopping criterion is required");
  if (oracle == OracleKind::exhaustive && std::min(k, n) > ExhaustiveOracle::kMaxVariables) {
    throw ConfigError("exhaustive oracle supports at most " +
                      std::to_string(ExhaustiveOracle::kMaxVariables) + " variables");
  }
}

std::uint64_t improvement_phase_1opt(GainsState& state, std::size_t tenure,
                                     std::size_t conv_len, double tol) {
  const auto found = tabu_search(state, {tenure, conv_len, tol});
  std::vector<Index> moved;
  for (std::size_t i = 0; i < state.size(); ++i) {
    if (state.bit(i) != found.best.bits[i]) moved.push_back(i);
  }
  for (Index i : moved) state.apply_flip(i);
  return found.steps;
}

namespace {

using SteadyClock = std::chrono::steady_clock;

class Run {
 public:
  Run(const QuboProblem& problem, const SolverParams& params, const SolveHooks& hooks)
      : problem_(problem),
        params_(params),
        hooks_(hooks),
        n_(problem.size()),
        k_(std::min(params.k, problem.size())),
        rng_(params.seed),
        state_(problem, initial_bits()),
        tabu_(n_, params.tt.value_or(default_kopt_tenure(n_, k_))),
        refset_(params.refset_capacity),
        flips_(n_),
        f_smart_(params.f_smart.value_or(FSmartParams::defaults(n_, k_))),
        improve_conv_len_(params.improve_conv_len.value_or(n_)) {
    oracle_ = make_oracle();
    for (std::size_t i = 0; i < n_; ++i) full_pass_ += problem_.coupling_span(i) + 1;
  }

  SolveReport execute();

 private:
  BitVector initial_bits() {
    start_ = SteadyClock::now();
    switch (params_.init) {
      case InitKind::deterministic_greedy:
        extra_work_ += n_ * n_;
        return deterministic_greedy(problem_).bits;
      case InitKind::randomized_greedy:
        extra_work_ += n_ * n_;
        return randomized_greedy(problem_, rng_).bits;
      case InitKind::random: break;
    }
    extra_work_ += n_;
    return random_bits(n_, rng_);
  }

  std::unique_ptr<Oracle> make_oracle() {
    if (hooks_.oracle_factory) return hooks_.oracle_factory(k_, rng_);
    if (params_.oracle == OracleKind::exhaustive) {
      return std::make_unique<ExhaustiveOracle>(params_.presumed_time);
    }
    const auto tenure = static_cast<std::size_t>(
        rng_.between(static_cast<std::int64_t>(params_.oracle_tenure_lo),
                     static_cast<std::int64_t>(params_.oracle_tenure_hi)));
    return std::make_unique<Tabu1OptOracle>(tenure, params_.oracle_conv_len.value_or(10 * k_),
                                            params_.presumed_time, params_.tol);
  }

  double wall_elapsed() const {
    return std::chrono::duration<double>(SteadyClock::now() - start_).count();
  }

  double classical_now() const {
    if (params_.clock == ClockKind::wall) return std::max(0.0, wall_elapsed() - oracle_wall_);
    const auto units = retired_work_ + state_.work_units() + extra_work_;
    return static_cast<double>(units) * params_.seconds_per_work_unit;
  }

  double quantum_now() const {
    return static_cast<double>(iterations_) * params_.presumed_time;
  }

  double modeled_now() const { return quantum_now() + classical_now(); }

  void replace_state(BitVector bits) {
    retired_work_ += state_.work_units();
    state_ = GainsState(problem_, std::move(bits));
  }

  void track_best() {
    if (state_.value() < best_.value) {
      best_ = state_.configuration();
      iterations_to_best_ = iterations_;
      time_to_best_ = modeled_now();
    }
  }

  // Must run before track_best so the incumbent reference is the previous V_min.
  void track_phase() {
    const double ref =
        params_.convergence == ConvergenceRef::incumbent ? best_.value : phase_best_;
    if (state_.value() < ref - params_.tol) {
      stale_ = 0;
    } else {
      ++stale_;
    }
    phase_best_ = std::min(phase_best_, state_.value());
  }

  void notify(StepEvent::Kind kind) {
    if (!hooks_.observer) return;
    hooks_.observer(
        StepEvent{kind, iterations_, state_.value(), best_.value, modeled_now(), state_});
  }

  StopReason stop_reason() const {
    const auto& stop = params_.stop;
    if (stop.target_value && best_.value <= *stop.target_value + params_.tol) {
      return StopReason::target;
    }
    if (stop.max_iterations && iterations_ >= *stop.max_iterations) {
      return StopReason::max_iterations;
    }
    if (stop.max_escapes && escapes_ >= *stop.max_escapes) return StopReason::max_escapes;
    if (stop.max_modeled_time && modeled_now() >= *stop.max_modeled_time) {
      return StopReason::modeled_time;
    }
    if (stop.max_wall_time && wall_elapsed() >= *stop.max_wall_time) {
      return StopReason::wall_time;
    }
    return StopReason::none;
  }

  void improve() {
    const auto steps =
        improvement_phase_1opt(state_, params_.improve_tenure, improve_conv_len_, params_.tol);
    extra_work_ += steps * n_;
    ++improvement_phases_;
  }

  void kopt_step();
  void escape();

  const QuboProblem& problem_;
  const SolverParams& params_;
  const SolveHooks& hooks_;
  const std::size_t n_;
  const std::size_t k_;
  SteadyClock::time_point start_;
  Rng rng_;
  std::uint64_t extra_work_ = 0;
  // Cost of one from-scratch evaluation.
  std::uint64_t full_pass_ = 0;
  std::uint64_t retired_work_ = 0;
  double oracle_wall_ = 0.0;

  GainsState state_;
  TabuQueue tabu_;
  ReferenceSet refset_;
  FlipStats flips_;
  FSmartParams f_smart_;
  std::size_t improve_conv_len_;
  std::unique_ptr<Oracle> oracle_;

  Configuration best_;
  std::uint64_t iterations_ = 0;
  std::uint64_t iterations_to_best_ = 0;
  double time_to_best_ = 0.0;
  std::size_t escapes_ = 0;
  std::uint64_t oracle_failures_ = 0;
  std::uint64_t improvement_phases_ = 0;

  double phase_best_ = 0.0;
  std::size_t stale_ = 0;
  double best_at_last_escape_ = 0.0;
  std::optional<FusionParents> parents_;
  std::size_t fusion_left_ = 0;
};

void Run::kopt_step() {
  std::vector<Index> chosen;
  bool fusion_step = false;
  std::vector<Index> candidates;
  if (fusion_left_ > 0 && parents_) {
    --fusion_left_;
    ChoiceContext ctx{{}, state_, &*parents_};
    if (auto picked = choose_fusion_guided(ctx, k_, rng_)) {
      chosen = *std::move(picked);
      fusion_step = true;
    }
  }
  if (!fusion_step) {
    candidates = tabu_.candidates();
    if (candidates.empty()) {
      candidates.resize(n_);
      for (std::size_t i = 0; i < n_; ++i) candidates[i] = i;
    }
    ChoiceContext ctx{candidates, state_, nullptr};
    const ChoiceKind kind =
        params_.choice == ChoiceKind::fusion_guided ? ChoiceKind::gains : params_.choice;
    chosen = choose_variables(kind, ctx, k_, rng_);
    extra_work_ += n_;
    if (kind == ChoiceKind::weighted_gains || kind == ChoiceKind::coupling) {
      extra_work_ += candidates.size() * k_;
    }
  } else {
    extra_work_ += n_;
  }

  const Subproblem sub = project_subproblem(problem_, state_, chosen);
  extra_work_ += chosen.size() * chosen.size();

  std::vector<Index> flipped;
  ++iterations_;
  try {
    const auto before = SteadyClock::now();
    const OracleResult result = oracle_->solve(sub, rng_);
    oracle_wall_ += std::chrono::duration<double>(SteadyClock::now() - before).count();
    const double warm = reduced_objective(sub, sub.warm_start);
    extra_work_ += chosen.size() * chosen.size();
    if (result.value < warm - params_.tol) {
      flipped = state_.apply_group_update(sub.indices, result.bits);
    }
  } catch (const OracleUnavailable& e) {
    ++oracle_failures_;
    std::fprintf(stderr, "gqs: oracle call %llu failed: %s\n",
                 static_cast<unsigned long long>(iterations_), e.what());
  }
  flips_.record(flipped);
  if (!fusion_step) tabu_.update(chosen, flipped, params_.whole_group);
}

void Run::escape() {
  flips_.note_escape(best_.value < best_at_last_escape_);
  best_at_last_escape_ = best_.value;
  parents_.reset();
  fusion_left_ = 0;

  if (params_.escape == EscapeKind::path_relinking) {
    EscapeOutcome out = path_relinking_escape(problem_, refset_, state_.configuration(),
                                              params_.path_relinking, rng_);
    extra_work_ += refset_.size() * refset_.size() * n_ / 2;
    extra_work_ += out.kind == EscapeOutcome::Kind::fusion ? n_ : n_ * n_;
    extra_work_ += full_pass_;
    if (out.parents) {
      parents_ = std::move(out.parents);
      fusion_left_ = params_.fusion_budget;
    }
    replace_state(std::move(out.config.bits));
  } else {
    Configuration next = f_smart_escape(problem_, flips_, state_.bits(), f_smart_, rng_);
    extra_work_ += n_ + full_pass_;
    replace_state(std::move(next.bits));
  }
  tabu_.clear();
  ++escapes_;
  phase_best_ = state_.value();
  stale_ = 0;
  track_best();
  if (params_.improve == ImprovePhase::after_escape) {
    improve();
    phase_best_ = state_.value();
    track_best();
  }
}

SolveReport Run::execute() {
  if (params_.escape == EscapeKind::path_relinking && params_.refset_random_init) {
    // Draws that duplicate a member are dropped; tiny problems may stay short.
    for (std::size_t t = 0; t < 4 * refset_.capacity() && !refset_.full(); ++t) {
      refset_.offer(random_config(problem_, rng_));
      extra_work_ += n_ + full_pass_;
    }
  }
  best_ = state_.configuration();
  phase_best_ = state_.value();
  best_at_last_escape_ = best_.value;
  time_to_best_ = modeled_now();
  notify(StepEvent::Kind::start);

  StopReason reason = stop_reason();
  while (reason == StopReason::none) {
    if (params_.improve == ImprovePhase::probabilistic &&
        rng_.uniform() < params_.improve_probability) {
      improve();
      track_phase();
      track_best();
      notify(StepEvent::Kind::improvement);
    } else {
      kopt_step();
      track_phase();
      track_best();
      notify(StepEvent::Kind::oracle);
    }
    reason = stop_reason();
    if (reason != StopReason::none) break;

    if (stale_ >= params_.cl) {
      if (params_.improve == ImprovePhase::after_convergence) {
        improve();
        track_best();
        notify(StepEvent::Kind::improvement);
      }
      escape();
      notify(StepEvent::Kind::escape);
      reason = stop_reason();
    }
  }

  SolveReport report;
  report.best_value = best_.value;
  report.best_bits = best_.bits;
  report.iterations_to_best = iterations_to_best_;
  report.total_iterations = iterations_;
  report.quantum_time = quantum_now();
  report.classical_time = classical_now();
  report.time_to_best = time_to_best_;
  report.escapes = escapes_;
  report.stop_reason = reason;
  report.oracle_failures = oracle_failures_;
  report.improvement_phases = improvement_phases_;
  return report;
}

}  // namespace

SolveReport solve(const QuboProblem& problem, const SolverParams& params,
                  const SolveHooks& hooks) {
  params.validate(problem.size());
  Run run(problem, params, hooks);
  return run.execute();
}

}  // namespace gqs
