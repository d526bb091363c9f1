#pragma once

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "gqs/gains.hpp"
#include "gqs/rng.hpp"

namespace gqs {

enum class ChoiceKind { random, gains, weighted_gains, fusion_guided, coupling };

std::string_view to_string(ChoiceKind kind) noexcept;
std::optional<ChoiceKind> parse_choice_kind(std::string_view text) noexcept;

/// Two elite parents and the positions where they differ.
struct FusionParents {
  BitVector first;
  BitVector second;
  std::vector<Index> differing;

  static FusionParents from(BitVector a, BitVector b);
};

struct ChoiceContext {
  /// Non-tabu variables (the candidate set).
  std::span<const Index> candidates;
  const GainsState& state;
  const FusionParents* parents = nullptr;
};

/// Uniform min(k, |C|)-subset of the candidates.
std::vector<Index> choose_random(const ChoiceContext& ctx, std::size_t k, Rng& rng);

/// The k candidates with the lowest one-flip gain, lowest index on ties.
std::vector<Index> choose_gains(const ChoiceContext& ctx, std::size_t k);

/// k draws without replacement, weight max(g_max - g_i, 1e-12).
std::vector<Index> choose_weighted_gains(const ChoiceContext& ctx, std::size_t k, Rng& rng);

/// Picks inside the hypercube spanned by the parents: a random k-subset of the
/// differing positions, or all of them plus k - d equal positions. Ignores the
/// candidate restriction. Returns nullopt (caller falls back) without parents
/// or when the parents are identical.
std::optional<std::vector<Index>> choose_fusion_guided(const ChoiceContext& ctx,
                                                       std::size_t k, Rng& rng);

/// Two-stage strength-proportional draw over the candidate-projected matrix.
/// Stage 1 picks by column absolute sum, stage 2 a partner by |Q[j][i]|.
std::vector<Index> choose_coupling(const ChoiceContext& ctx, std::size_t k, Rng& rng);

/// Dispatch for the non-fusion strategies. fusion_guided falls back to gains.
std::vector<Index> choose_variables(ChoiceKind kind, const ChoiceContext& ctx,
                                    std::size_t k, Rng& rng);

}  // namespace gqs
