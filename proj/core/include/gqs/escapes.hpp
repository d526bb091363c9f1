#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "gqs/problem.hpp"
#include "gqs/rng.hpp"
#include "gqs/variable_choice.hpp"

namespace gqs {

class IneligiblePair : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Bounded elite pool of converged solutions, best first. Each unordered pair
/// of members is fused at most once.
class ReferenceSet {
 public:
  struct Member {
    Configuration config;
    std::uint64_t id;
  };

  explicit ReferenceSet(std::size_t capacity = 10);

  /// Inserts unless the bits are already present, or the set is full and the
  /// offer is not strictly better than the worst member (which it then evicts).
  bool offer(const Configuration& config);

  std::size_t size() const noexcept { return members_.size(); }
  std::size_t capacity() const noexcept { return capacity_; }
  bool full() const noexcept { return members_.size() >= capacity_; }
  const std::vector<Member>& members() const noexcept { return members_; }
  const Configuration& best() const { return members_.front().config; }
  bool contains(std::span<const Bit> bits) const;

  /// Member-position pairs (a < b) not yet fused whose Hamming distance is at
  /// least min_distance.
  std::vector<std::pair<std::size_t, std::size_t>> eligible_pairs(
      std::size_t min_distance) const;
  void mark_fused(std::size_t a, std::size_t b);
  bool is_fused(std::size_t a, std::size_t b) const;
  std::size_t fused_count() const noexcept { return fused_.size(); }

  /// Drops every member except the best and forgets all fusions.
  void reset_to_best();

 private:
  std::size_t capacity_;
  std::vector<Member> members_;
  std::set<std::pair<std::uint64_t, std::uint64_t>> fused_;
  std::uint64_t next_id_ = 0;
};

/// Child agreeing with both parents where they agree and at Hamming distance
/// at least ceil(child_fraction * d) from each, d being the parent distance.
/// Throws IneligiblePair when d < min_distance.
Configuration fuse(const QuboProblem& problem, std::span<const Bit> first,
                   std::span<const Bit> second, double child_fraction,
                   std::size_t min_distance, Rng& rng);

enum class RestartKind { randomized_greedy, random };

struct PathRelinkingParams {
  std::size_t min_parent_distance = 5;
  double child_fraction = 0.33;
  RestartKind restart = RestartKind::randomized_greedy;
};

struct EscapeOutcome {
  enum class Kind { fusion, restart, reset_restart, flips };

  Configuration config;
  Kind kind;
  /// Set for fusion escapes; drives fusion-guided choice afterwards.
  std::optional<FusionParents> parents;
};

/// Offers `current` to the set, then fuses a random eligible unfused pair when
/// the set is full. A full set with no eligible pair is reset to its best
/// member; a restart configuration is returned otherwise.
EscapeOutcome path_relinking_escape(const QuboProblem& problem, ReferenceSet& refset,
                                    const Configuration& current,
                                    const PathRelinkingParams& params, Rng& rng);

/// Per-variable flip counts and the run of escapes without a new incumbent.
struct FlipStats {
  explicit FlipStats(std::size_t n) : flip_counts(n, 0) {}

  void record(std::span<const Index> flipped) {
    for (Index i : flipped) ++flip_counts[i];
  }
  /// Call at each escape: resets the failure run after an improvement.
  void note_escape(bool incumbent_improved) {
    failed_escapes = incumbent_improved ? 0 : failed_escapes + 1;
  }

  std::vector<std::uint64_t> flip_counts;
  std::size_t failed_escapes = 0;
};

struct FSmartParams {
  std::size_t base = 1;
  std::size_t step = 1;
  std::size_t cap = 1;

  /// base = k, step = max(1, k/4), cap = N/4.
  static FSmartParams defaults(std::size_t n, std::size_t k);
  std::size_t flips_for(std::size_t failed_escapes, std::size_t n) const noexcept;
};

/// Flips m of the 2m most-flipped variables, m growing with failed escapes.
Configuration f_smart_escape(const QuboProblem& problem, const FlipStats& stats,
                             std::span<const Bit> current, const FSmartParams& params,
                             Rng& rng);

}  // namespace gqs
