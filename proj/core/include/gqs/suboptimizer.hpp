#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "gqs/gains.hpp"
#include "gqs/problem.hpp"
#include "gqs/rng.hpp"

namespace gqs {

/// A k-variable QUBO obtained by clamping every other variable at its current
/// value. For every y in {0,1}^k,
///   evaluate(reduced, y) + offset == f(x with indices set to y).
struct Subproblem {
  QuboProblem reduced;
  double offset = 0.0;
  std::vector<Index> indices;
  BitVector warm_start;
};

struct OracleResult {
  BitVector bits;
  /// Reduced objective at bits (offset excluded).
  double value = 0.0;
  std::uint32_t calls = 1;
  double modeled_time = 0.0;
};

/// Raised by oracles that cannot produce an answer (lost hardware, timeouts).
class OracleUnavailable : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when a subproblem exceeds what an oracle can handle.
class OracleCapacityError : public std::length_error {
 public:
  using std::length_error::length_error;
};

/// Clamps the variables outside `indices` at the state's current bits.
/// Throws std::invalid_argument on an empty, duplicate or out-of-range index set.
Subproblem project_subproblem(const QuboProblem& problem, const GainsState& state,
                              std::span<const Index> indices);

double reduced_objective(const Subproblem& sub, std::span<const Bit> y);

/// Subproblem optimizer. Any implementation is wrapped so that the returned
/// value is never worse than the warm start; an implementation that does
/// worse gets the warm start back.
class Oracle {
 public:
  explicit Oracle(double presumed_time) : presumed_time_(presumed_time) {}
  virtual ~Oracle() = default;

  OracleResult solve(const Subproblem& sub, Rng& rng) const;

  double presumed_time() const noexcept { return presumed_time_; }
  virtual std::string name() const = 0;

 protected:
  virtual OracleResult run(const Subproblem& sub, Rng& rng) const = 0;

 private:
  double presumed_time_;
};

/// Gray-code enumeration of all 2^k assignments. Ties go to the
/// lexicographically smallest bit sequence.
class ExhaustiveOracle final : public Oracle {
 public:
  static constexpr std::size_t kMaxVariables = 26;

  explicit ExhaustiveOracle(double presumed_time = 0.02) : Oracle(presumed_time) {}
  std::string name() const override { return "exhaustive"; }

 protected:
  OracleResult run(const Subproblem& sub, Rng& rng) const override;
};

/// Single-flip tabu search with aspiration, warm-started from the current bits.
class Tabu1OptOracle final : public Oracle {
 public:
  Tabu1OptOracle(std::size_t tenure, std::size_t conv_len, double presumed_time = 0.02,
                 double tol = 1e-8);

  /// Tenure drawn uniformly from [tenure_lo, tenure_hi], conv_len = 10 k.
  static std::unique_ptr<Tabu1OptOracle> for_run(std::size_t k, Rng& rng,
                                                 double presumed_time = 0.02,
                                                 std::size_t tenure_lo = 15,
                                                 std::size_t tenure_hi = 20);

  std::size_t tenure() const noexcept { return tenure_; }
  std::size_t conv_len() const noexcept { return conv_len_; }
  std::string name() const override { return "tabu1opt"; }

 protected:
  OracleResult run(const Subproblem& sub, Rng& rng) const override;

 private:
  std::size_t tenure_;
  std::size_t conv_len_;
  double tol_;
};

/// Returns the warm start unchanged.
class IdentityOracle final : public Oracle {
 public:
  explicit IdentityOracle(double presumed_time = 0.02) : Oracle(presumed_time) {}
  std::string name() const override { return "identity"; }

 protected:
  OracleResult run(const Subproblem& sub, Rng& rng) const override;
};

}  // namespace gqs
