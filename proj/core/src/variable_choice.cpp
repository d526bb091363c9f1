#include "gqs/variable_choice.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace gqs {

namespace {

constexpr double kWeightFloor = 1e-12;
constexpr std::size_t kCouplingRoundsPerSlot = 50;

// Index of the bucket that u * total falls in; zero-weight buckets are never hit.
std::size_t draw_weighted(std::span<const double> weights, double total, Rng& rng) {
  const double target = rng.uniform() * total;
  double acc = 0.0;
  std::size_t last_positive = weights.size();
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (weights[i] <= 0.0) continue;
    acc += weights[i];
    last_positive = i;
    if (target < acc) return i;
  }
  return last_positive;
}

}  // namespace

std::string_view to_string(ChoiceKind kind) noexcept {
  switch (kind) {
    case ChoiceKind::random: return "random";
    case ChoiceKind::gains: return "gains";
    case ChoiceKind::weighted_gains: return "weighted";
    case ChoiceKind::fusion_guided: return "fusion";
    case ChoiceKind::coupling: return "coupling";
  }
  return "unknown";
}

std::optional<ChoiceKind> parse_choice_kind(std::string_view text) noexcept {
  if (text == "random") return ChoiceKind::random;
  if (text == "gains") return ChoiceKind::gains;
  if (text == "weighted" || text == "weighted_gains") return ChoiceKind::weighted_gains;
  if (text == "fusion" || text == "fusion_guided") return ChoiceKind::fusion_guided;
  if (text == "coupling") return ChoiceKind::coupling;
  return std::nullopt;
}

FusionParents FusionParents::from(BitVector a, BitVector b) {
  FusionParents p{std::move(a), std::move(b), {}};
  for (std::size_t i = 0; i < p.first.size(); ++i) {
    if (p.first[i] != p.second[i]) p.differing.push_back(i);
  }
  return p;
}

std::vector<Index> choose_random(const ChoiceContext& ctx, std::size_t k, Rng& rng) {
  auto out = rng.sample(ctx.candidates, k);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Index> choose_gains(const ChoiceContext& ctx, std::size_t k) {
  std::vector<Index> out(ctx.candidates.begin(), ctx.candidates.end());
  const auto gains = ctx.state.gains();
  auto better = [&](Index a, Index b) {
    return gains[a] < gains[b] || (gains[a] == gains[b] && a < b);
  };
  if (k < out.size()) {
    std::nth_element(out.begin(), out.begin() + static_cast<std::ptrdiff_t>(k), out.end(),
                     better);
    out.resize(k);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Index> choose_weighted_gains(const ChoiceContext& ctx, std::size_t k,
                                         Rng& rng) {
  std::vector<Index> pool(ctx.candidates.begin(), ctx.candidates.end());
  if (k >= pool.size()) {
    std::sort(pool.begin(), pool.end());
    return pool;
  }
  const auto gains = ctx.state.gains();
  double worst = -INFINITY;
  for (Index i : pool) worst = std::max(worst, gains[i]);
  std::vector<double> weights(pool.size());
  double total = 0.0;
  for (std::size_t p = 0; p < pool.size(); ++p) {
    weights[p] = std::max(worst - gains[pool[p]], kWeightFloor);
    total += weights[p];
  }
  std::vector<Index> out;
  out.reserve(k);
  while (out.size() < k) {
    const std::size_t p = draw_weighted(weights, total, rng);
    out.push_back(pool[p]);
    total -= weights[p];
    weights[p] = 0.0;
    // Guard against drift from repeated subtraction.
    if (total <= 0.0) total = std::accumulate(weights.begin(), weights.end(), 0.0);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::optional<std::vector<Index>> choose_fusion_guided(const ChoiceContext& ctx,
                                                       std::size_t k, Rng& rng) {
  if (ctx.parents == nullptr || ctx.parents->differing.empty()) return std::nullopt;
  const auto& diff = ctx.parents->differing;
  std::vector<Index> out;
  if (k <= diff.size()) {
    out = rng.sample(std::span<const Index>(diff), k);
  } else {
    out = diff;
    std::vector<Index> equal;
    equal.reserve(ctx.state.size() - diff.size());
    std::size_t d = 0;
    for (std::size_t i = 0; i < ctx.state.size(); ++i) {
      if (d < diff.size() && diff[d] == i) {
        ++d;
      } else {
        equal.push_back(i);
      }
    }
    const auto extra = rng.sample(std::span<const Index>(equal), k - diff.size());
    out.insert(out.end(), extra.begin(), extra.end());
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Index> choose_coupling(const ChoiceContext& ctx, std::size_t k, Rng& rng) {
  const auto& cand = ctx.candidates;
  const std::size_t m = cand.size();
  if (k >= m) {
    std::vector<Index> all(cand.begin(), cand.end());
    std::sort(all.begin(), all.end());
    return all;
  }
  const QuboProblem& q = ctx.state.problem();
  const std::size_t n = q.size();

  // Position of each variable inside the candidate list, or m when absent.
  std::vector<std::size_t> pos(n, m);
  for (std::size_t p = 0; p < m; ++p) pos[cand[p]] = p;

  std::vector<double> strength(m, 0.0);
  double total_strength = 0.0;
  for (std::size_t p = 0; p < m; ++p) {
    const Index i = cand[p];
    double s = std::abs(q.at(i, i));
    q.for_each_coupling(i, [&](Index j, double v) {
      if (pos[j] != m) s += std::abs(v);
    });
    strength[p] = s;
    total_strength += s;
  }

  std::vector<std::uint8_t> chosen(m, 0);
  std::vector<std::uint8_t> open(m, 1);  // still eligible for stage 2
  std::vector<Index> out;
  out.reserve(k);
  std::vector<double> conditional(m, 0.0);

  const std::size_t max_rounds = kCouplingRoundsPerSlot * k;
  for (std::size_t round = 0; round < max_rounds && out.size() < k; ++round) {
    const std::size_t p = total_strength > 0.0 ? draw_weighted(strength, total_strength, rng)
                                               : rng.below(m);
    open[p] = 0;
    if (chosen[p]) continue;
    chosen[p] = 1;
    out.push_back(cand[p]);
    if (out.size() == k) break;

    double total = 0.0;
    std::fill(conditional.begin(), conditional.end(), 0.0);
    const Index i = cand[p];
    for (std::size_t r = 0; r < m; ++r) {
      if (!open[r]) continue;
      conditional[r] = std::abs(q.at(cand[r], i));
      total += conditional[r];
    }
    if (total == 0.0) continue;
    const std::size_t partner = draw_weighted(conditional, total, rng);
    open[partner] = 0;
    chosen[partner] = 1;
    out.push_back(cand[partner]);
  }

  if (out.size() < k) {
    std::vector<Index> rest;
    for (std::size_t p = 0; p < m; ++p) {
      if (!chosen[p]) rest.push_back(cand[p]);
    }
    const auto fill = rng.sample(std::span<const Index>(rest), k - out.size());
    out.insert(out.end(), fill.begin(), fill.end());
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Index> choose_variables(ChoiceKind kind, const ChoiceContext& ctx,
                                    std::size_t k, Rng& rng) {
  switch (kind) {
    case ChoiceKind::random: return choose_random(ctx, k, rng);
    case ChoiceKind::weighted_gains: return choose_weighted_gains(ctx, k, rng);
    case ChoiceKind::coupling: return choose_coupling(ctx, k, rng);
    case ChoiceKind::fusion_guided:
      if (auto picked = choose_fusion_guided(ctx, k, rng)) return *std::move(picked);
      return choose_gains(ctx, k);
    case ChoiceKind::gains: break;
  }
  return choose_gains(ctx, k);
}

}  // namespace gqs
