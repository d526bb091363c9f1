#pragma once

#include <span>
#include <vector>

#include "gqs/problem.hpp"
#include "gqs/rng.hpp"

namespace gqs {

/// Assignment over {0, 1/2, 1} used by the greedy constructions. Every
/// variable starts at 1/2 and is fixed exactly once.
///
/// For unset i, directed gains are g0(i) = f(a with a_i = 0) - f(a) and
/// g1(i) = f(a with a_i = 1) - f(a), maintained incrementally as variables
/// are fixed.
class FractionalAssignment {
 public:
  explicit FractionalAssignment(const QuboProblem& problem);

  std::size_t size() const noexcept { return values_.size(); }
  std::span<const double> values() const noexcept { return values_; }
  /// Unset variables in ascending index order.
  std::vector<Index> unset() const;
  std::size_t unset_count() const noexcept { return unset_count_; }
  bool is_unset(Index i) const noexcept { return values_[i] == 0.5; }

  double g0(Index i) const noexcept;
  double g1(Index i) const noexcept;

  /// Fixes an unset variable to bit v.
  void fix(Index i, Bit v);

  /// Lowest-index argmin of g0 (resp. g1) over unset variables.
  Index best_zero() const;
  Index best_one() const;

  /// Binary result; only valid once unset_count() == 0.
  BitVector bits() const;

 private:
  const QuboProblem* problem_;
  std::vector<double> values_;
  // Off-diagonal row sums sum_{j != i} Q[i][j] a_j.
  std::vector<double> cross_;
  std::size_t unset_count_;
};

/// f over a fractional assignment; used to cross-check the directed gains.
double evaluate_fractional(const QuboProblem& problem, std::span<const double> values);

/// Probability of taking the set-to-0 move given the best directed gains.
/// Always in [0, 1]. When exactly one of the two moves improves, it is taken
/// with certainty; a zero-gain move beats a strictly worsening one.
double zero_move_probability(double best_g0, double best_g1) noexcept;

Configuration random_config(const QuboProblem& problem, Rng& rng);
BitVector random_bits(std::size_t n, Rng& rng);

Configuration deterministic_greedy(const QuboProblem& problem);
Configuration randomized_greedy(const QuboProblem& problem, Rng& rng);

}  // namespace gqs
