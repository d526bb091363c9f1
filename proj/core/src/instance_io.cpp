#include "gqs/instance_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include <fmt/format.h>

#include "gqs/rng.hpp"

namespace gqs {

namespace {

struct Token {
  std::string text;
  std::size_t line;
};

class TokenReader {
 public:
  explicit TokenReader(std::istream& in) : in_(in) {}

  /// Tokens of the next non-blank line, or empty at end of input.
  std::vector<Token> next_line() {
    std::string line;
    while (std::getline(in_, line)) {
      ++line_no_;
      if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
      std::istringstream words(line);
      std::vector<Token> tokens;
      for (std::string w; words >> w;) tokens.push_back({w, line_no_});
      if (!tokens.empty()) return tokens;
    }
    return {};
  }

  std::size_t line() const noexcept { return line_no_; }

 private:
  std::istream& in_;
  std::size_t line_no_ = 0;
};

long long to_integer(const Token& t, const char* what) {
  long long v = 0;
  const char* end = t.text.data() + t.text.size();
  auto [ptr, ec] = std::from_chars(t.text.data(), end, v);
  if (ec != std::errc{} || ptr != end) {
    throw ParseError(t.line, fmt::format("expected integer {} but found '{}'", what, t.text));
  }
  return v;
}

double to_real(const Token& t, const char* what) {
  double v = 0;
  const char* begin = t.text.data();
  const char* end = begin + t.text.size();
  if (begin != end && *begin == '+') ++begin;
  auto [ptr, ec] = std::from_chars(begin, end, v);
  if (ec != std::errc{} || ptr != end || !std::isfinite(v)) {
    throw ParseError(t.line, fmt::format("expected number {} but found '{}'", what, t.text));
  }
  return v;
}

QuboProblem read_body(TokenReader& reader, const std::vector<Token>& header, Sense sense,
                      const std::string& name) {
  if (header.size() != 2) {
    throw ParseError(header.front().line, "problem header must be 'n nnz'");
  }
  const long long n = to_integer(header[0], "problem size");
  const long long nnz = to_integer(header[1], "nonzero count");
  if (n < 1) throw ParseError(header[0].line, "problem size must be at least 1");
  if (nnz < 0) throw ParseError(header[1].line, "nonzero count must be non-negative");

  QuboBuilder builder(static_cast<std::size_t>(n), name);
  const double sign = sense == Sense::maximize ? -1.0 : 1.0;
  for (long long t = 0; t < nnz; ++t) {
    const auto triple = reader.next_line();
    if (triple.empty()) {
      throw ParseError(reader.line() + 1,
                       fmt::format("file ends after {} of {} terms of '{}'", t, nnz, name));
    }
    if (triple.size() != 3) throw ParseError(triple.front().line, "term line must be 'i j v'");
    const long long i = to_integer(triple[0], "row index");
    const long long j = to_integer(triple[1], "column index");
    const double v = to_real(triple[2], "coefficient");
    if (i < 1 || i > n || j < 1 || j > n) {
      throw ParseError(triple.front().line,
                       fmt::format("index ({}, {}) outside [1, {}]", i, j, n));
    }
    builder.add(static_cast<Index>(i - 1), static_cast<Index>(j - 1), sign * v);
  }
  builder.set_negated(sense == Sense::maximize);
  return std::move(builder).build();
}

std::string format_coefficient(double v) {
  if (v == std::trunc(v) && std::abs(v) < 1e15) return fmt::format("{}", static_cast<long long>(v));
  return fmt::format("{:.17g}", v);
}

}  // namespace

std::optional<Sense> parse_sense(std::string_view text) noexcept {
  if (text == "min" || text == "minimize") return Sense::minimize;
  if (text == "max" || text == "maximize") return Sense::maximize;
  return std::nullopt;
}

InstanceFile parse_orlib(std::istream& in, Sense sense, const std::string& base_name) {
  TokenReader reader(in);
  InstanceFile file;
  file.sense = sense;
  file.format = SourceFormat::orlib_multi;
  auto first = reader.next_line();
  if (first.empty()) throw ParseError(reader.line() + 1, "empty instance file");

  if (first.size() == 2) {
    file.problems.push_back({base_name, read_body(reader, first, sense, base_name)});
  } else {
    if (first.size() != 1) throw ParseError(first.front().line, "expected a problem count");
    const long long count = to_integer(first[0], "problem count");
    if (count < 1) throw ParseError(first[0].line, "problem count must be at least 1");
    for (long long p = 0; p < count; ++p) {
      auto header = reader.next_line();
      if (header.empty()) {
        throw ParseError(reader.line() + 1,
                         fmt::format("file declares {} problems but holds {}", count, p));
      }
      std::string name = fmt::format("{}-{}", base_name, p + 1);
      file.problems.push_back({name, read_body(reader, header, sense, name)});
    }
  }
  if (auto extra = reader.next_line(); !extra.empty()) {
    throw ParseError(extra.front().line, "unexpected content after the last problem");
  }
  return file;
}

InstanceFile parse_triple(std::istream& in, Sense sense, const std::string& name) {
  TokenReader reader(in);
  auto header = reader.next_line();
  if (header.empty()) throw ParseError(reader.line() + 1, "empty instance file");
  InstanceFile file;
  file.sense = sense;
  file.format = SourceFormat::triple_single;
  file.problems.push_back({name, read_body(reader, header, sense, name)});
  if (auto extra = reader.next_line(); !extra.empty()) {
    throw ParseError(extra.front().line, "unexpected content after the last term");
  }
  return file;
}

InstanceFile load_instance_file(const std::string& path, SourceFormat format, Sense sense) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open instance file '" + path + "'");
  std::string stem = path;
  if (auto slash = stem.find_last_of('/'); slash != std::string::npos) stem.erase(0, slash + 1);
  if (auto dot = stem.find_last_of('.'); dot != std::string::npos && dot > 0) stem.resize(dot);
  return format == SourceFormat::triple_single ? parse_triple(in, sense, stem)
                                               : parse_orlib(in, sense, stem);
}

void write_orlib(std::ostream& out, std::span<const NamedProblem> problems, Sense sense) {
  const double sign = sense == Sense::maximize ? -1.0 : 1.0;
  out << problems.size() << '\n';
  for (const auto& [name, q] : problems) {
    const std::size_t n = q.size();
    out << n << ' ' << q.upper_nonzeros() << '\n';
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i; j < n; ++j) {
        const double v = q.at(i, j);
        if (v != 0.0) out << i + 1 << ' ' << j + 1 << ' ' << format_coefficient(sign * v) << '\n';
      }
    }
  }
}

QuboProblem generate_random(std::size_t n, double density, std::int64_t lo, std::int64_t hi,
                            std::uint64_t seed, std::string name) {
  if (n == 0) throw std::invalid_argument("generated problem size must be at least 1");
  if (!(density > 0.0 && density <= 1.0)) throw std::invalid_argument("density must be in (0, 1]");
  if (lo > hi) throw std::invalid_argument("coefficient range is empty");
  Rng rng(seed);
  QuboBuilder builder(n, std::move(name));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      if (density < 1.0 && !(rng.uniform() < density)) continue;
      const auto v = rng.between(lo, hi);
      if (v != 0) builder.add(i, j, static_cast<double>(v));
    }
  }
  return std::move(builder).build();
}

std::vector<NamedProblem> generate_suite(const std::string& prefix, std::size_t count,
                                         std::size_t n, double density, std::int64_t lo,
                                         std::int64_t hi, std::uint64_t seed) {
  std::vector<NamedProblem> out;
  out.reserve(count);
  for (std::size_t c = 0; c < count; ++c) {
    std::string name = fmt::format("{}-{}", prefix, c + 1);
    QuboProblem q = generate_random(n, density, lo, hi, seed + c, name);
    out.push_back({std::move(name), std::move(q)});
  }
  return out;
}

BestKnownRegistry BestKnownRegistry::load(std::istream& in) {
  TokenReader reader(in);
  BestKnownRegistry reg;
  for (auto line = reader.next_line(); !line.empty(); line = reader.next_line()) {
    if (line.size() != 2) throw ParseError(line.front().line, "expected 'name value'");
    if (reg.contains(line[0].text)) {
      throw ParseError(line[0].line, "duplicate entry for '" + line[0].text + "'");
    }
    reg.set(line[0].text, to_real(line[1], "best-known value"));
  }
  return reg;
}

BestKnownRegistry BestKnownRegistry::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open best-known file '" + path + "'");
  return load(in);
}

void BestKnownRegistry::save(std::ostream& out) const {
  for (const auto& [name, v] : values_) out << name << ' ' << format_coefficient(v) << '\n';
}

void BestKnownRegistry::set(const std::string& name, double value) {
  if (!std::isfinite(value)) throw std::invalid_argument("best-known values must be finite");
  values_[name] = value;
}

std::optional<double> BestKnownRegistry::find(const std::string& name) const {
  if (auto it = values_.find(name); it != values_.end()) return it->second;
  return std::nullopt;
}

}  // namespace gqs
