#include "gqs/construction.hpp"

#include <stdexcept>

namespace gqs {

FractionalAssignment::FractionalAssignment(const QuboProblem& problem)
    : problem_(&problem),
      values_(problem.size(), 0.5),
      cross_(problem.size(), 0.0),
      unset_count_(problem.size()) {
  const std::size_t n = problem.size();
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0.0;
    problem.for_each_coupling(i, [&](Index, double q) { s += q; });
    cross_[i] = 0.5 * s;
  }
}

std::vector<Index> FractionalAssignment::unset() const {
  std::vector<Index> out;
  out.reserve(unset_count_);
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (values_[i] == 0.5) out.push_back(i);
  }
  return out;
}

// (v - a_i) * (Q_ii (v + a_i) + 2 sum_{j != i} Q_ij a_j)
double FractionalAssignment::g0(Index i) const noexcept {
  const double a = values_[i];
  return -a * (problem_->at(i, i) * a + 2.0 * cross_[i]);
}

double FractionalAssignment::g1(Index i) const noexcept {
  const double a = values_[i];
  return (1.0 - a) * (problem_->at(i, i) * (1.0 + a) + 2.0 * cross_[i]);
}

void FractionalAssignment::fix(Index i, Bit v) {
  if (i >= values_.size() || values_[i] != 0.5) {
    throw std::invalid_argument("only unset variables can be fixed");
  }
  const double shift = static_cast<double>(v) - 0.5;
  values_[i] = static_cast<double>(v);
  --unset_count_;
  problem_->for_each_coupling(i, [&](Index j, double q) { cross_[j] += q * shift; });
}

Index FractionalAssignment::best_zero() const {
  Index best = values_.size();
  double best_g = 0.0;
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (values_[i] != 0.5) continue;
    const double g = g0(i);
    if (best == values_.size() || g < best_g) {
      best = i;
      best_g = g;
    }
  }
  if (best == values_.size()) throw std::logic_error("no unset variables left");
  return best;
}

Index FractionalAssignment::best_one() const {
  Index best = values_.size();
  double best_g = 0.0;
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (values_[i] != 0.5) continue;
    const double g = g1(i);
    if (best == values_.size() || g < best_g) {
      best = i;
      best_g = g;
    }
  }
  if (best == values_.size()) throw std::logic_error("no unset variables left");
  return best;
}

BitVector FractionalAssignment::bits() const {
  if (unset_count_ != 0) throw std::logic_error("assignment still has unset variables");
  BitVector out(values_.size());
  for (std::size_t i = 0; i < values_.size(); ++i) out[i] = values_[i] == 1.0 ? 1 : 0;
  return out;
}

double evaluate_fractional(const QuboProblem& problem, std::span<const double> values) {
  const std::size_t n = problem.size();
  if (values.size() != n) throw std::invalid_argument("assignment length mismatch");
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto row = problem.row(i);
    for (std::size_t j = 0; j < n; ++j) total += row[j] * values[i] * values[j];
  }
  return total;
}

double zero_move_probability(double g0, double g1) noexcept {
  if (g0 < 0.0 && g1 <= 0.0) return g0 / (g0 + g1);
  if (g0 >= 0.0 && g1 > 0.0) return g1 / (g0 + g1);
  if (g0 < 0.0 && g1 > 0.0) return 1.0;
  if (g0 > 0.0 && g1 <= 0.0) return 0.0;
  if (g0 == 0.0 && g1 < 0.0) return 0.0;
  return 0.5;
}

BitVector random_bits(std::size_t n, Rng& rng) {
  if (n == 0) throw std::invalid_argument("configuration size must be at least 1");
  BitVector bits(n);
  for (auto& b : bits) b = rng.coin() ? 1 : 0;
  return bits;
}

Configuration random_config(const QuboProblem& problem, Rng& rng) {
  return make_configuration(problem, random_bits(problem.size(), rng));
}

Configuration deterministic_greedy(const QuboProblem& problem) {
  FractionalAssignment a(problem);
  while (a.unset_count() > 0) {
    const Index k0 = a.best_zero();
    const Index k1 = a.best_one();
    if (a.g0(k0) < a.g1(k1)) {
      a.fix(k0, 0);
    } else {
      a.fix(k1, 1);
    }
  }
  return make_configuration(problem, a.bits());
}

Configuration randomized_greedy(const QuboProblem& problem, Rng& rng) {
  FractionalAssignment a(problem);
  const Index first = rng.below(problem.size());
  a.fix(first, rng.coin() ? 1 : 0);
  while (a.unset_count() > 0) {
    const Index k0 = a.best_zero();
    const Index k1 = a.best_one();
    const double p = zero_move_probability(a.g0(k0), a.g1(k1));
    if (rng.uniform() < p) {
      a.fix(k0, 0);
    } else {
      a.fix(k1, 1);
    }
  }
  return make_configuration(problem, a.bits());
}

}  // namespace gqs
