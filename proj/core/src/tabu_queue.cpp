#include "gqs/tabu_queue.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace gqs {

TabuQueue::TabuQueue(std::size_t n, std::size_t tenure)
    : tenure_(tenure), member_counts_(n, 0) {}

void TabuQueue::update(std::span<const Index> chosen, std::span<const Index> flipped,
                       bool whole_group) {
  push(whole_group ? chosen : flipped);
}

void TabuQueue::push(std::span<const Index> group) {
  if (tenure_ == 0) return;
  for (Index i : group) {
    if (i >= member_counts_.size()) {
      throw std::invalid_argument("tabu index " + std::to_string(i) + " out of range");
    }
  }
  if (queue_.size() == tenure_) {
    for (Index i : queue_.front()) --member_counts_[i];
    queue_.pop_front();
  }
  queue_.emplace_back(group.begin(), group.end());
  for (Index i : group) ++member_counts_[i];
}

void TabuQueue::clear() {
  queue_.clear();
  std::fill(member_counts_.begin(), member_counts_.end(), 0);
}

std::vector<Index> TabuQueue::candidates() const {
  std::vector<Index> out;
  out.reserve(member_counts_.size());
  for (std::size_t i = 0; i < member_counts_.size(); ++i) {
    if (member_counts_[i] == 0) out.push_back(i);
  }
  return out;
}

std::size_t default_kopt_tenure(std::size_t n, std::size_t k) {
  if (k == 0) throw std::invalid_argument("k must be at least 1");
  const auto tt = static_cast<std::size_t>(
      std::llround(0.6 * static_cast<double>(n) / static_cast<double>(k)));
  return std::max<std::size_t>(tt, 1);
}

}  // namespace gqs
