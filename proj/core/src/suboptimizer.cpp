#include "gqs/suboptimizer.hpp"

#include <algorithm>
#include <bit>

#include "gqs/tabu_search.hpp"

namespace gqs {

Subproblem project_subproblem(const QuboProblem& problem, const GainsState& state,
                              std::span<const Index> indices) {
  const std::size_t n = problem.size();
  const std::size_t k = indices.size();
  if (k == 0) throw std::invalid_argument("subproblem needs at least one variable");
  std::vector<Index> sorted(indices.begin(), indices.end());
  std::sort(sorted.begin(), sorted.end());
  if (sorted.back() >= n) {
    throw std::invalid_argument("subproblem index " + std::to_string(sorted.back()) +
                                " out of range");
  }
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw std::invalid_argument("subproblem indices must be distinct");
  }

  const auto x = state.bits();
  std::vector<double> m(k * k);
  for (std::size_t a = 0; a < k; ++a) {
    const auto row = problem.row(indices[a]);
    for (std::size_t b = 0; b < k; ++b) m[a * k + b] = row[indices[b]];
  }

  // The local field h_a = Q_aa + sum_{j != a} 2 Q_aj x_j comes from the gains;
  // removing the in-group part leaves the clamped coupling to the fixed bits.
  double in_group = 0.0;  // f restricted to the chosen variables
  double cross = 0.0;     // 2 sum_{a in S, j not in S} Q_aj x_a x_j
  for (std::size_t a = 0; a < k; ++a) {
    double inside = 0.0;
    for (std::size_t b = 0; b < k; ++b) {
      if (b != a && x[indices[b]]) inside += 2.0 * m[a * k + b];
    }
    const double fixed_field = state.local_field(indices[a]) - m[a * k + a] - inside;
    if (x[indices[a]]) {
      in_group += m[a * k + a] + 0.5 * inside;
      cross += fixed_field;
    }
    m[a * k + a] += fixed_field;
  }

  Subproblem sub{QuboProblem::from_dense(k, m), state.value() - in_group - cross,
                 std::vector<Index>(indices.begin(), indices.end()), BitVector(k)};
  for (std::size_t a = 0; a < k; ++a) sub.warm_start[a] = x[indices[a]];
  return sub;
}

double reduced_objective(const Subproblem& sub, std::span<const Bit> y) {
  return evaluate(sub.reduced, y);
}

OracleResult Oracle::solve(const Subproblem& sub, Rng& rng) const {
  OracleResult result = run(sub, rng);
  const double warm = reduced_objective(sub, sub.warm_start);
  if (result.bits.size() != sub.warm_start.size() || !(result.value <= warm)) {
    result.bits = sub.warm_start;
    result.value = warm;
  }
  result.calls = 1;
  result.modeled_time = presumed_time_;
  return result;
}

OracleResult ExhaustiveOracle::run(const Subproblem& sub, Rng&) const {
  const QuboProblem& q = sub.reduced;
  const std::size_t k = q.size();
  if (k > kMaxVariables) {
    throw OracleCapacityError("exhaustive oracle limited to " +
                              std::to_string(kMaxVariables) + " variables, got " +
                              std::to_string(k));
  }
  BitVector y(k, 0);
  std::vector<double> field(k);
  for (std::size_t a = 0; a < k; ++a) field[a] = q.at(a, a);

  OracleResult best{y, 0.0};
  double value = 0.0;
  const std::uint64_t total = std::uint64_t{1} << k;
  for (std::uint64_t t = 1; t < total; ++t) {
    const auto a = static_cast<std::size_t>(std::countr_zero(t));
    const double d = y[a] ? -2.0 : 2.0;
    value += y[a] ? -field[a] : field[a];
    y[a] ^= 1;
    const auto row = q.row(a);
    for (std::size_t b = 0; b < k; ++b) {
      if (b != a) field[b] += d * row[b];
    }
    if (value < best.value ||
        (value == best.value &&
         std::lexicographical_compare(y.begin(), y.end(), best.bits.begin(),
                                      best.bits.end()))) {
      best.value = value;
      best.bits = y;
    }
  }
  return best;
}

Tabu1OptOracle::Tabu1OptOracle(std::size_t tenure, std::size_t conv_len,
                               double presumed_time, double tol)
    : Oracle(presumed_time), tenure_(tenure), conv_len_(conv_len), tol_(tol) {
  if (conv_len == 0) throw std::invalid_argument("conv_len must be at least 1");
}

std::unique_ptr<Tabu1OptOracle> Tabu1OptOracle::for_run(std::size_t k, Rng& rng,
                                                        double presumed_time,
                                                        std::size_t tenure_lo,
                                                        std::size_t tenure_hi) {
  const auto tenure = static_cast<std::size_t>(rng.between(
      static_cast<std::int64_t>(tenure_lo), static_cast<std::int64_t>(tenure_hi)));
  return std::make_unique<Tabu1OptOracle>(tenure, 10 * std::max<std::size_t>(k, 1),
                                          presumed_time);
}

OracleResult Tabu1OptOracle::run(const Subproblem& sub, Rng&) const {
  GainsState state(sub.reduced, sub.warm_start);
  const auto found = tabu_search(state, {tenure_, conv_len_, tol_});
  return {found.best.bits, found.best.value};
}

OracleResult IdentityOracle::run(const Subproblem& sub, Rng&) const {
  return {sub.warm_start, reduced_objective(sub, sub.warm_start)};
}

}  // namespace gqs
