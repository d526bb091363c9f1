#include "gqs/problem.hpp"

#include <string>
#include <utility>

namespace gqs {

namespace {

constexpr double kSparseDensity = 0.5;

void require_binary(std::span<const Bit> bits) {
  for (Bit b : bits) {
    if (b > 1) throw std::invalid_argument("bit vector entries must be 0 or 1");
  }
}

}  // namespace

QuboProblem::QuboProblem(std::size_t n, std::string name) : n_(n), name_(std::move(name)) {
  if (n == 0) throw std::invalid_argument("QUBO problem size must be at least 1");
  coeffs_.assign(n * n, 0.0);
  finalize();
}

QuboProblem QuboProblem::from_dense(std::size_t n, std::span<const double> row_major,
                                    std::string name) {
  if (n == 0) throw std::invalid_argument("QUBO problem size must be at least 1");
  if (row_major.size() != n * n) {
    throw std::invalid_argument("matrix has " + std::to_string(row_major.size()) +
                                " entries, expected " + std::to_string(n * n));
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (row_major[i * n + j] != row_major[j * n + i]) {
        throw std::invalid_argument("matrix is not symmetric at (" + std::to_string(i) +
                                    ", " + std::to_string(j) + ")");
      }
    }
  }
  QuboProblem p;
  p.n_ = n;
  p.name_ = std::move(name);
  p.coeffs_.assign(row_major.begin(), row_major.end());
  p.finalize();
  return p;
}

QuboProblem QuboProblem::symmetrized(std::size_t n, std::span<const double> row_major,
                                     std::string name) {
  if (row_major.size() != n * n) throw std::invalid_argument("matrix must be n x n");
  std::vector<double> sym(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      sym[i * n + j] = 0.5 * (row_major[i * n + j] + row_major[j * n + i]);
    }
  }
  return from_dense(n, sym, std::move(name));
}

QuboProblem QuboProblem::negated() const {
  QuboProblem p = *this;
  for (double& c : p.coeffs_) c = -c;
  p.negated_ = !negated_;
  return p;
}

void QuboProblem::finalize() {
  upper_nnz_ = 0;
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t j = i; j < n_; ++j) upper_nnz_ += coeffs_[i * n_ + j] != 0.0;
  }
  sparse_ = density(*this) < kSparseDensity;
  adj_start_.assign(n_ + 1, 0);
  adjacency_.clear();
  adjacency_values_.clear();
  if (!sparse_) return;
  for (std::size_t i = 0; i < n_; ++i) {
    adj_start_[i] = adjacency_.size();
    for (std::size_t j = 0; j < n_; ++j) {
      if (j != i && coeffs_[i * n_ + j] != 0.0) {
        adjacency_.push_back(j);
        adjacency_values_.push_back(coeffs_[i * n_ + j]);
      }
    }
  }
  adj_start_[n_] = adjacency_.size();
}

QuboBuilder::QuboBuilder(std::size_t n, std::string name)
    : n_(n), coeffs_(n * n, 0.0), name_(std::move(name)) {
  if (n == 0) throw std::invalid_argument("QUBO problem size must be at least 1");
}

void QuboBuilder::add(Index i, Index j, double v) {
  if (i >= n_ || j >= n_) {
    throw std::invalid_argument("term index (" + std::to_string(i) + ", " +
                                std::to_string(j) + ") out of range for n=" +
                                std::to_string(n_));
  }
  coeffs_[i * n_ + j] += v;
  if (i != j) coeffs_[j * n_ + i] += v;
}

QuboProblem QuboBuilder::build() && {
  QuboProblem p;
  p.n_ = n_;
  p.coeffs_ = std::move(coeffs_);
  p.negated_ = negated_;
  p.name_ = std::move(name_);
  p.finalize();
  return p;
}

double evaluate(const QuboProblem& problem, std::span<const Bit> bits) {
  const std::size_t n = problem.size();
  if (bits.size() != n) {
    throw std::invalid_argument("bit vector length " + std::to_string(bits.size()) +
                                " does not match problem size " + std::to_string(n));
  }
  require_binary(bits);
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!bits[i]) continue;
    total += problem.at(i, i);
    problem.for_each_coupling(i, [&](Index j, double q) {
      if (bits[j]) total += q;
    });
  }
  return total;
}

Configuration make_configuration(const QuboProblem& problem, BitVector bits) {
  const double v = evaluate(problem, bits);
  return Configuration{std::move(bits), v};
}

double flip_delta_bruteforce(const QuboProblem& problem, const Configuration& config,
                             Index i) {
  if (i >= problem.size()) {
    throw std::invalid_argument("flip index " + std::to_string(i) + " out of range");
  }
  BitVector flipped = config.bits;
  flipped[i] ^= 1;
  return evaluate(problem, flipped) - config.value;
}

std::size_t hamming_distance(std::span<const Bit> a, std::span<const Bit> b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("hamming distance needs equal-length vectors");
  }
  std::size_t d = 0;
  for (std::size_t i = 0; i < a.size(); ++i) d += (a[i] != b[i]);
  return d;
}

double density(const QuboProblem& problem) noexcept {
  const double n = static_cast<double>(problem.size());
  return static_cast<double>(problem.upper_nonzeros()) / (n * (n + 1.0) / 2.0);
}

}  // namespace gqs
