#pragma once

#include <cstdint>
#include <deque>
#include <span>
#include <vector>

#include "gqs/problem.hpp"

namespace gqs {

/// FIFO of recently updated variable groups. A variable is a candidate for
/// selection only while no queued group contains it.
class TabuQueue {
 public:
  TabuQueue(std::size_t n, std::size_t tenure);

  /// Pushes `chosen` when whole_group is set, otherwise `flipped`. The pushed
  /// group may be empty. Evicts the oldest group once `tenure` are held.
  void update(std::span<const Index> chosen, std::span<const Index> flipped,
              bool whole_group);
  void push(std::span<const Index> group);
  void clear();

  /// Non-tabu variables, ascending.
  std::vector<Index> candidates() const;
  bool is_tabu(Index i) const noexcept { return member_counts_[i] != 0; }

  std::size_t size() const noexcept { return queue_.size(); }
  std::size_t tenure() const noexcept { return tenure_; }
  std::size_t problem_size() const noexcept { return member_counts_.size(); }
  const std::deque<std::vector<Index>>& groups() const noexcept { return queue_; }
  std::uint32_t member_count(Index i) const noexcept { return member_counts_[i]; }

 private:
  std::size_t tenure_;
  std::deque<std::vector<Index>> queue_;
  std::vector<std::uint32_t> member_counts_;
};

/// Default k-opt tenure round(0.6 N / k), at least 1.
std::size_t default_kopt_tenure(std::size_t n, std::size_t k);

}  // namespace gqs
