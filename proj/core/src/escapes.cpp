#include "gqs/escapes.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "gqs/construction.hpp"

namespace gqs {

namespace {

std::pair<std::uint64_t, std::uint64_t> ordered(std::uint64_t a, std::uint64_t b) {
  return a < b ? std::pair{a, b} : std::pair{b, a};
}

Configuration restart(const QuboProblem& problem, RestartKind kind, Rng& rng) {
  return kind == RestartKind::random ? random_config(problem, rng)
                                     : randomized_greedy(problem, rng);
}

}  // namespace

ReferenceSet::ReferenceSet(std::size_t capacity) : capacity_(capacity) {
  if (capacity == 0) throw std::invalid_argument("reference set capacity must be >= 1");
}

bool ReferenceSet::contains(std::span<const Bit> bits) const {
  return std::any_of(members_.begin(), members_.end(), [&](const Member& m) {
    return std::equal(m.config.bits.begin(), m.config.bits.end(), bits.begin(), bits.end());
  });
}

bool ReferenceSet::offer(const Configuration& config) {
  if (contains(config.bits)) return false;
  if (full()) {
    if (!(config.value < members_.back().config.value)) return false;
    const std::uint64_t gone = members_.back().id;
    members_.pop_back();
    std::erase_if(fused_, [gone](const auto& p) { return p.first == gone || p.second == gone; });
  }
  // Stable: equal values keep insertion order.
  auto at = std::upper_bound(members_.begin(), members_.end(), config.value,
                             [](double v, const Member& m) { return v < m.config.value; });
  members_.insert(at, Member{config, next_id_++});
  return true;
}

std::vector<std::pair<std::size_t, std::size_t>> ReferenceSet::eligible_pairs(
    std::size_t min_distance) const {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t a = 0; a < members_.size(); ++a) {
    for (std::size_t b = a + 1; b < members_.size(); ++b) {
      if (is_fused(a, b)) continue;
      if (hamming_distance(members_[a].config.bits, members_[b].config.bits) >= min_distance) {
        out.emplace_back(a, b);
      }
    }
  }
  return out;
}

void ReferenceSet::mark_fused(std::size_t a, std::size_t b) {
  fused_.insert(ordered(members_.at(a).id, members_.at(b).id));
}

bool ReferenceSet::is_fused(std::size_t a, std::size_t b) const {
  return fused_.contains(ordered(members_.at(a).id, members_.at(b).id));
}

void ReferenceSet::reset_to_best() {
  if (members_.size() > 1) members_.resize(1);
  fused_.clear();
}

Configuration fuse(const QuboProblem& problem, std::span<const Bit> first,
                   std::span<const Bit> second, double child_fraction,
                   std::size_t min_distance, Rng& rng) {
  std::vector<Index> diff;
  for (std::size_t i = 0; i < first.size(); ++i) {
    if (first[i] != second[i]) diff.push_back(i);
  }
  const std::size_t d = diff.size();
  if (first.size() != second.size() || d < min_distance || d == 0) {
    throw IneligiblePair("parents at Hamming distance " + std::to_string(d) +
                         " are below the fusion threshold " + std::to_string(min_distance));
  }
  // The small slack keeps e.g. 0.3 * 10 from rounding up to 4.
  auto need = static_cast<std::size_t>(std::ceil(child_fraction * static_cast<double>(d) - 1e-9));
  need = std::min(need, d / 2);

  BitVector child(first.begin(), first.end());
  // toward_second[p]: differing position p takes the second parent's bit.
  std::vector<std::uint8_t> toward_second(d);
  std::size_t from_first = 0;  // distance to the first parent
  for (std::size_t p = 0; p < d; ++p) {
    toward_second[p] = rng.coin();
    from_first += toward_second[p];
  }
  // Repair: move randomly chosen positions toward the far parent until both
  // distances are at least `need`.
  auto shift = [&](std::uint8_t from, std::size_t count) {
    std::vector<std::size_t> pool;
    for (std::size_t p = 0; p < d; ++p) {
      if (toward_second[p] == from) pool.push_back(p);
    }
    for (std::size_t p : rng.sample(std::span<const std::size_t>(pool), count)) {
      toward_second[p] = from ^ 1;
    }
  };
  if (from_first < need) {
    shift(0, need - from_first);
  } else if (d - from_first < need) {
    shift(1, need - (d - from_first));
  }
  for (std::size_t p = 0; p < d; ++p) {
    if (toward_second[p]) child[diff[p]] = second[diff[p]];
  }
  return make_configuration(problem, std::move(child));
}

EscapeOutcome path_relinking_escape(const QuboProblem& problem, ReferenceSet& refset,
                                    const Configuration& current,
                                    const PathRelinkingParams& params, Rng& rng) {
  refset.offer(current);
  if (!refset.full()) {
    return {restart(problem, params.restart, rng), EscapeOutcome::Kind::restart, {}};
  }
  const auto pairs = refset.eligible_pairs(params.min_parent_distance);
  if (pairs.empty()) {
    refset.reset_to_best();
    return {restart(problem, params.restart, rng), EscapeOutcome::Kind::reset_restart, {}};
  }
  const auto [a, b] = pairs[rng.below(pairs.size())];
  const auto& first = refset.members()[a].config.bits;
  const auto& second = refset.members()[b].config.bits;
  Configuration child =
      fuse(problem, first, second, params.child_fraction, params.min_parent_distance, rng);
  auto parents = FusionParents::from(first, second);
  refset.mark_fused(a, b);
  return {std::move(child), EscapeOutcome::Kind::fusion, std::move(parents)};
}

FSmartParams FSmartParams::defaults(std::size_t n, std::size_t k) {
  return {std::max<std::size_t>(k, 1), std::max<std::size_t>(k / 4, 1),
          std::max<std::size_t>(n / 4, 1)};
}

std::size_t FSmartParams::flips_for(std::size_t failed_escapes, std::size_t n) const noexcept {
  const std::size_t grown = std::min(base + step * failed_escapes, std::max(cap, base));
  return std::min(grown, n);
}

Configuration f_smart_escape(const QuboProblem& problem, const FlipStats& stats,
                             std::span<const Bit> current, const FSmartParams& params,
                             Rng& rng) {
  const std::size_t n = current.size();
  const std::size_t m = params.flips_for(stats.failed_escapes, n);
  std::vector<Index> order(n);
  std::iota(order.begin(), order.end(), Index{0});
  const std::size_t pool_size = std::min(n, 2 * m);
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(pool_size),
                    order.end(), [&](Index a, Index b) {
                      const auto ca = stats.flip_counts[a];
                      const auto cb = stats.flip_counts[b];
                      return ca > cb || (ca == cb && a < b);
                    });
  order.resize(pool_size);
  BitVector bits(current.begin(), current.end());
  for (Index i : rng.sample(std::span<const Index>(order), m)) bits[i] ^= 1;
  return make_configuration(problem, std::move(bits));
}

}  // namespace gqs
