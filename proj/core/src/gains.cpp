#include "gqs/gains.hpp"

#include <string>

namespace gqs {

GainsState::GainsState(const QuboProblem& problem, BitVector bits)
    : problem_(&problem), bits_(std::move(bits)) {
  const std::size_t n = problem.size();
  if (bits_.size() != n) {
    throw std::invalid_argument("bit vector length " + std::to_string(bits_.size()) +
                                " does not match problem size " + std::to_string(n));
  }
  for (Bit b : bits_) {
    if (b > 1) throw std::invalid_argument("bit vector entries must be 0 or 1");
  }
  gains_.assign(n, 0.0);
  mark_.assign(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    double field = problem.at(i, i);
    problem.for_each_coupling(i, [&](Index j, double q) {
      if (bits_[j]) field += 2.0 * q;
    });
    work_units_ += problem.coupling_span(i) + 1;
    gains_[i] = bits_[i] ? -field : field;
    // x_i (Q_ii + sum_j Q_ij x_j) summed over i is the objective.
    if (bits_[i]) value_ += 0.5 * (field + problem.at(i, i));
  }
}

void GainsState::apply_flip(Index i) {
  const std::size_t n = bits_.size();
  if (i >= n) {
    throw std::invalid_argument("flip index " + std::to_string(i) + " out of range");
  }
  // The local field of each neighbor j moves by +2 Q[i][j] when i goes
  // 0 -> 1 and by -2 Q[i][j] when it goes 1 -> 0.
  const double d = bits_[i] ? -2.0 : 2.0;
  value_ += gains_[i];
  gains_[i] = -gains_[i];
  bits_[i] ^= 1;
  problem_->for_each_coupling(i, [&](Index j, double q) {
    const double delta = d * q;
    gains_[j] += bits_[j] ? -delta : delta;
  });
  work_units_ += problem_->coupling_span(i) + 1;
}

std::vector<Index> GainsState::apply_group_update(std::span<const Index> indices,
                                                  std::span<const Bit> new_bits) {
  if (indices.size() != new_bits.size()) {
    throw std::invalid_argument("group update needs one new bit per index");
  }
  for (Bit b : new_bits) {
    if (b > 1) throw std::invalid_argument("new bits must be 0 or 1");
  }
  for (Index i : indices) {
    if (i >= bits_.size()) {
      for (Index j : indices) {
        if (j < mark_.size()) mark_[j] = 0;
      }
      throw std::invalid_argument("group index " + std::to_string(i) + " out of range");
    }
    if (mark_[i]) {
      for (Index j : indices) {
        if (j < mark_.size()) mark_[j] = 0;
      }
      throw std::invalid_argument("duplicate index " + std::to_string(i) +
                                  " in group update");
    }
    mark_[i] = 1;
  }
  for (Index i : indices) mark_[i] = 0;

  std::vector<Index> flipped;
  for (std::size_t a = 0; a < indices.size(); ++a) {
    if (bits_[indices[a]] != new_bits[a]) {
      apply_flip(indices[a]);
      flipped.push_back(indices[a]);
    }
  }
  return flipped;
}

std::optional<FlipChoice> GainsState::best_flip(std::span<const Index> candidates) const {
  std::optional<FlipChoice> best;
  for (Index i : candidates) {
    const double g = gains_[i];
    if (!best || g < best->gain || (g == best->gain && i < best->index)) {
      best = FlipChoice{i, g};
    }
  }
  return best;
}

}  // namespace gqs
