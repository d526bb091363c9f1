#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "gqs/problem.hpp"

namespace gqs {

enum class Sense { minimize, maximize };
enum class SourceFormat { orlib_multi, triple_single };

std::optional<Sense> parse_sense(std::string_view text) noexcept;

/// Error while reading an instance or registry file; `line` is 1-based.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

struct NamedProblem {
  std::string name;
  QuboProblem problem;
};

struct InstanceFile {
  std::vector<NamedProblem> problems;
  SourceFormat format = SourceFormat::orlib_multi;
  Sense sense = Sense::minimize;
};

/// Reads the OR-Library layout: a problem count, then per problem a line
/// "n nnz" followed by nnz lines "i j v" (1-based). Each off-diagonal triple
/// stands for the symmetric pair. A file that starts directly with "n nnz" is
/// read as a single problem. Repeated triples are summed; maximization input
/// is negated. Problems are named "<base_name>-<k>" (or base_name when the
/// file holds a single headerless problem).
InstanceFile parse_orlib(std::istream& in, Sense sense, const std::string& base_name);

/// Single-problem "n nnz" + triples file.
InstanceFile parse_triple(std::istream& in, Sense sense, const std::string& name);

InstanceFile load_instance_file(const std::string& path, SourceFormat format, Sense sense);

/// Writes problems in the counted OR-Library layout, upper triangle only, in
/// the given sense (minimization problems are re-negated for maximize).
void write_orlib(std::ostream& out, std::span<const NamedProblem> problems, Sense sense);

/// Random instance: each upper-triangle slot (diagonal included) is drawn with
/// probability `density`, its value uniform on the integers [lo, hi]; a drawn 0
/// leaves the slot empty. Deterministic under the seed.
QuboProblem generate_random(std::size_t n, double density, std::int64_t lo, std::int64_t hi,
                            std::uint64_t seed, std::string name = {});

/// `count` problems named "<prefix>-<c>" for c = 1..count; problem c is
/// generate_random(n, density, lo, hi, seed + c - 1).
std::vector<NamedProblem> generate_suite(const std::string& prefix, std::size_t count,
                                         std::size_t n, double density, std::int64_t lo,
                                         std::int64_t hi, std::uint64_t seed);

/// Best-known objective values by instance name, in each instance's own sense.
/// Text format: one "name value" pair per line; '#' starts a comment.
class BestKnownRegistry {
 public:
  static BestKnownRegistry load(std::istream& in);
  static BestKnownRegistry load_file(const std::string& path);
  void save(std::ostream& out) const;

  void set(const std::string& name, double value);
  std::optional<double> find(const std::string& name) const;
  bool contains(const std::string& name) const { return values_.contains(name); }
  std::size_t size() const noexcept { return values_.size(); }
  const std::map<std::string, double>& entries() const noexcept { return values_; }

 private:
  std::map<std::string, double> values_;
};

}  // namespace gqs
