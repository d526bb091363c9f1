#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace gqs {

/// Seeded random stream. The raw engine sequence of std::mt19937_64 is fixed
/// by the standard; the mappings below are written out here so that draws are
/// identical across standard library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform integer in [0, bound). bound must be > 0.
  std::uint64_t below(std::uint64_t bound) {
    // Rejection on the top of the range keeps the draw unbiased.
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t r;
    do {
      r = engine_();
    } while (r >= limit);
    return r % bound;
  }

  /// Uniform integer in [lo, hi].
  std::int64_t between(std::int64_t lo, std::int64_t hi) {
    const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<std::int64_t>(below(span));
  }

  /// Uniform real in [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  bool coin() { return (engine_() >> 63) != 0; }

  /// Derives an independent stream for a sub-component.
  Rng split() { return Rng(engine_() ^ 0x9e3779b97f4a7c15ULL); }

  template <class T>
  void shuffle(std::span<T> items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      std::swap(items[i - 1], items[below(i)]);
    }
  }

  /// Uniform k-subset of items (order of the result is random).
  template <class T>
  std::vector<T> sample(std::span<const T> items, std::size_t k) {
    std::vector<T> pool(items.begin(), items.end());
    if (k >= pool.size()) return pool;
    for (std::size_t i = 0; i < k; ++i) {
      std::swap(pool[i], pool[i + below(pool.size() - i)]);
    }
    pool.resize(k);
    return pool;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace gqs
