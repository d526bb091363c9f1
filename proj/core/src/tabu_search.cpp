#include "gqs/tabu_search.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <vector>

namespace gqs {

TabuSearchResult tabu_search(GainsState& state, const TabuSearchParams& params) {
  if (params.conv_len == 0) throw std::invalid_argument("conv_len must be at least 1");
  const std::size_t n = state.size();
  // A tenure near n leaves no admissible move for long stretches and the
  // search cycles; half the size keeps a choice open.
  const std::size_t tenure = std::min(params.tenure, n / 2);
  TabuSearchResult result;
  result.best = state.configuration();

  // tabu_until[i] is the first step at which i is admissible again.
  std::vector<std::uint64_t> tabu_until(n, 0);
  std::size_t stale = 0;
  std::uint64_t step = 0;
  while (stale < params.conv_len) {
    ++step;
    const double value = state.value();
    const double aspiration = result.best.value - params.tol;
    const auto gains = state.gains();
    std::size_t pick = n;
    double pick_gain = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
      const double g = gains[i];
      if (g >= pick_gain) continue;
      if (tabu_until[i] > step && !(value + g < aspiration)) continue;
      pick = i;
      pick_gain = g;
    }
    if (pick == n) {
      ++stale;
      continue;
    }
    state.apply_flip(pick);
    tabu_until[pick] = step + tenure + 1;
    if (state.value() < aspiration) {
      result.best = state.configuration();
      result.steps_to_best = step;
      stale = 0;
    } else {
      ++stale;
    }
  }
  result.steps = step;
  return result;
}

}  // namespace gqs
