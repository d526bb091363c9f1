#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace gqs {

using Bit = std::uint8_t;
using BitVector = std::vector<Bit>;
using Index = std::size_t;

/// Dense symmetric QUBO matrix. The objective is f(x) = sum_ij Q[i][j] x_i x_j,
/// always minimized; maximization sources are negated on ingest.
///
/// Rows carry a nonzero-column index (diagonal excluded) so that sparse
/// problems can be walked in O(degree). Immutable once built.
class QuboProblem {
 public:
  /// Builds an all-zero n x n problem. Throws std::invalid_argument on n == 0.
  explicit QuboProblem(std::size_t n, std::string name = {});

  /// Builds from a row-major n x n matrix. The matrix must be symmetric.
  static QuboProblem from_dense(std::size_t n, std::span<const double> row_major,
                                std::string name = {});

  std::size_t size() const noexcept { return n_; }
  const std::string& name() const noexcept { return name_; }
  bool negated_on_ingest() const noexcept { return negated_; }

  double at(Index i, Index j) const noexcept { return coeffs_[i * n_ + j]; }
  std::span<const double> row(Index i) const noexcept {
    return {coeffs_.data() + i * n_, n_};
  }
  /// True when rows are walked through the nonzero-column index.
  bool use_adjacency() const noexcept { return sparse_; }

  /// Calls f(j, Q[i][j]) for every j != i that may be nonzero. Sparse problems
  /// visit only stored nonzeros; dense ones visit the whole row.
  template <class F>
  void for_each_coupling(Index i, F&& f) const {
    if (sparse_) {
      for (std::size_t p = adj_start_[i]; p < adj_start_[i + 1]; ++p) {
        f(adjacency_[p], adjacency_values_[p]);
      }
    } else {
      const double* row = coeffs_.data() + i * n_;
      for (std::size_t j = 0; j < n_; ++j) {
        if (j != i) f(j, row[j]);
      }
    }
  }

  /// Entries visited by for_each_coupling(i).
  std::size_t coupling_span(Index i) const noexcept {
    return sparse_ ? adj_start_[i + 1] - adj_start_[i] : n_ - 1;
  }

  /// Number of nonzero upper-triangle entries (diagonal included).
  std::size_t upper_nonzeros() const noexcept { return upper_nnz_; }

  /// Multiplies every coefficient by -1 and flips the ingest-negation flag.
  QuboProblem negated() const;

  /// Returns (Q + Q^T)/2 for an arbitrary square matrix.
  static QuboProblem symmetrized(std::size_t n, std::span<const double> row_major,
                                 std::string name = {});

  friend class QuboBuilder;

 private:
  QuboProblem() = default;
  void finalize();

  std::size_t n_ = 0;
  std::vector<double> coeffs_;
  std::vector<std::size_t> adj_start_;
  std::vector<Index> adjacency_;
  // Coefficients in adjacency order, so sparse walks stay contiguous.
  std::vector<double> adjacency_values_;
  std::size_t upper_nnz_ = 0;
  bool sparse_ = false;
  bool negated_ = false;
  std::string name_;
};

/// Accumulates (i, j, v) terms into a symmetric problem. Off-diagonal terms
/// are stored as Q[i][j] = Q[j][i] = v, so one listed pair contributes
/// 2 v x_i x_j to the objective. Repeated terms are summed.
class QuboBuilder {
 public:
  explicit QuboBuilder(std::size_t n, std::string name = {});

  void add(Index i, Index j, double v);
  void set_negated(bool negated) { negated_ = negated; }
  std::size_t size() const noexcept { return n_; }

  QuboProblem build() &&;

 private:
  std::size_t n_;
  std::vector<double> coeffs_;
  bool negated_ = false;
  std::string name_;
};

/// A binary assignment together with its cached objective.
struct Configuration {
  BitVector bits;
  double value = 0.0;

  friend bool operator==(const Configuration&, const Configuration&) = default;
};

/// x^T Q x. Throws std::invalid_argument on a length mismatch or a non-binary entry.
double evaluate(const QuboProblem& problem, std::span<const Bit> bits);

Configuration make_configuration(const QuboProblem& problem, BitVector bits);

/// f(x with bit i flipped) - config.value, by full re-evaluation. Test oracle only.
double flip_delta_bruteforce(const QuboProblem& problem, const Configuration& config,
                             Index i);

std::size_t hamming_distance(std::span<const Bit> a, std::span<const Bit> b);

/// Fraction of upper-triangle slots (diagonal included) holding a nonzero.
double density(const QuboProblem& problem) noexcept;

}  // namespace gqs
