#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "gqs/problem.hpp"

namespace gqs {

struct FlipChoice {
  Index index;
  double gain;

  friend bool operator==(const FlipChoice&, const FlipChoice&) = default;
};

/// Assignment plus incrementally maintained one-flip gains:
/// gain(i) = f(x with bit i flipped) - f(x).
///
/// The referenced problem must outlive the state.
class GainsState {
 public:
  GainsState(const QuboProblem& problem, BitVector bits);

  const QuboProblem& problem() const noexcept { return *problem_; }
  std::size_t size() const noexcept { return bits_.size(); }

  std::span<const double> gains() const noexcept { return gains_; }
  double gain(Index i) const noexcept { return gains_[i]; }
  std::span<const Bit> bits() const noexcept { return bits_; }
  Bit bit(Index i) const noexcept { return bits_[i]; }
  double value() const noexcept { return value_; }

  /// Q[i][i] + sum_{j != i} 2 Q[i][j] x_j, i.e. the gain of setting bit i to 1
  /// when it is currently 0.
  double local_field(Index i) const noexcept {
    return bits_[i] ? -gains_[i] : gains_[i];
  }

  Configuration configuration() const { return {bits_, value_}; }

  void apply_flip(Index i);

  /// Sets bits[indices[a]] = new_bits[a]; flips only those that change.
  /// Returns the indices that were actually flipped, in input order.
  std::vector<Index> apply_group_update(std::span<const Index> indices,
                                        std::span<const Bit> new_bits);

  /// Candidate with the smallest gain, lowest index on ties.
  std::optional<FlipChoice> best_flip(std::span<const Index> candidates) const;

  /// Matrix entries touched so far by initialization and updates.
  std::uint64_t work_units() const noexcept { return work_units_; }

  friend bool operator==(const GainsState& a, const GainsState& b) {
    return a.problem_ == b.problem_ && a.bits_ == b.bits_ && a.value_ == b.value_ &&
           a.gains_ == b.gains_;
  }

 private:
  const QuboProblem* problem_;
  BitVector bits_;
  std::vector<double> gains_;
  double value_ = 0.0;
  std::uint64_t work_units_ = 0;
  std::vector<std::uint8_t> mark_;
};

inline GainsState init_gains(const QuboProblem& problem, BitVector bits) {
  return GainsState(problem, std::move(bits));
}

}  // namespace gqs
