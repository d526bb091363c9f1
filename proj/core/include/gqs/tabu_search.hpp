#pragma once

#include <cstdint>

#include "gqs/gains.hpp"

namespace gqs {

struct TabuSearchParams {
  /// Steps a flipped variable stays tabu, capped at half the problem size.
  /// 0 disables the tabu list.
  std::size_t tenure = 0;
  /// Consecutive non-improving steps before stopping.
  std::size_t conv_len = 1;
  /// A step improves the best only when it lowers it by more than tol.
  double tol = 1e-8;
};

struct TabuSearchResult {
  Configuration best;
  std::uint64_t steps = 0;
  /// Steps (single-bit flips) taken when the best was last improved.
  std::uint64_t steps_to_best = 0;
};

/// Single-flip tabu search with aspiration, starting from the state's current
/// assignment. Each step flips the admissible variable with the lowest gain
/// (lowest index on ties); a tabu variable is admissible when its flip would
/// beat the best value found so far. The state is left at the last visited
/// assignment, not necessarily the best one.
TabuSearchResult tabu_search(GainsState& state, const TabuSearchParams& params);

}  // namespace gqs
