#include <gtest/gtest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

#include "gqs/instance_io.hpp"
#include "oracles.hpp"

namespace gqs {
namespace {

InstanceFile parse(const std::string& text, Sense sense = Sense::minimize) {
  std::istringstream in(text);
  return parse_orlib(in, sense, "t");
}

std::size_t error_line(const std::string& text) {
  try {
    parse(text);
  } catch (const ParseError& e) {
    return e.line();
  }
  ADD_FAILURE() << "no parse error for:\n" << text;
  return 0;
}

TEST(ParseOrlib, SmallExample) {
  const auto f = parse("1\n2 3\n1 1 -1\n1 2 -2\n2 2 3\n");
  ASSERT_EQ(f.problems.size(), 1u);
  const auto& q = f.problems[0].problem;
  EXPECT_EQ(f.problems[0].name, "t-1");
  EXPECT_EQ(q.at(0, 0), -1.0);
  EXPECT_EQ(q.at(0, 1), -2.0);
  EXPECT_EQ(q.at(1, 0), -2.0);
  EXPECT_EQ(q.at(1, 1), 3.0);
  EXPECT_EQ(evaluate(q, BitVector{1, 1}), -2.0);
}

TEST(ParseOrlib, HeaderlessSingleProblem) {
  const auto f = parse("2 1\n1 2 5\n");
  ASSERT_EQ(f.problems.size(), 1u);
  EXPECT_EQ(f.problems[0].name, "t");
  EXPECT_EQ(f.problems[0].problem.at(1, 0), 5.0);
}

TEST(ParseOrlib, MaximizationIsNegatedAndDuplicatesSum) {
  const auto f = parse("1\n2 3\n1 2 4\n2 1 1\n1 1 7\n", Sense::maximize);
  const auto& q = f.problems[0].problem;
  EXPECT_TRUE(q.negated_on_ingest());
  EXPECT_EQ(q.at(0, 1), -5.0);
  EXPECT_EQ(q.at(0, 0), -7.0);
  EXPECT_EQ(f.sense, Sense::maximize);
}

TEST(ParseOrlib, ErrorsNameTheLine) {
  EXPECT_EQ(error_line("2\n2 1\n1 2 5\n"), 4u);           // second problem missing
  EXPECT_EQ(error_line("1\n2 2\n1 2 5\n"), 4u);           // short body
  EXPECT_EQ(error_line("1\n2 1\n1 3 5\n"), 3u);           // index out of range
  EXPECT_EQ(error_line("1\n2 1\n0 1 5\n"), 3u);           // 1-based
  EXPECT_EQ(error_line("1\n2 1\n1 2 x\n"), 3u);           // bad number
  EXPECT_EQ(error_line("1\n2 1 9\n1 2 5\n"), 2u);         // malformed header
  EXPECT_EQ(error_line("1\n2 1\n1 2 5\n7\n"), 4u);        // trailing content
  EXPECT_EQ(error_line(""), 1u);
  EXPECT_EQ(error_line("1\n0 0\n"), 2u);
}

TEST(ParseTriple, SingleProblem) {
  std::istringstream in("3 2\n1 3 -4\n2 2 6\n");
  const auto f = parse_triple(in, Sense::minimize, "p");
  EXPECT_EQ(f.format, SourceFormat::triple_single);
  EXPECT_EQ(f.problems[0].name, "p");
  EXPECT_EQ(f.problems[0].problem.at(2, 0), -4.0);
  std::istringstream bad("3 1\n1 3 -4\n1 1 1\n");
  EXPECT_THROW(parse_triple(bad, Sense::minimize, "p"), ParseError);
}

TEST(WriteOrlib, RoundTripBothSenses) {
  for (Sense sense : {Sense::minimize, Sense::maximize}) {
    std::vector<NamedProblem> ps;
    for (std::uint64_t s = 0; s < 3; ++s) {
      ps.push_back({"x", testing::random_dense(15, 0.3, -100, 100, s).problem()});
    }
    std::ostringstream out;
    write_orlib(out, ps, sense);
    const auto back = parse(out.str(), sense);
    ASSERT_EQ(back.problems.size(), 3u);
    for (std::size_t p = 0; p < 3; ++p) {
      for (Index i = 0; i < 15; ++i) {
        for (Index j = 0; j < 15; ++j) {
          ASSERT_EQ(back.problems[p].problem.at(i, j), ps[p].problem.at(i, j));
        }
      }
    }
  }
}

TEST(LoadInstanceFile, NamesFromStem) {
  const std::string path = ::testing::TempDir() + "/bqpdemo.txt";
  {
    std::ofstream out(path);
    out << "2\n1 1\n1 1 -3\n1 0\n";
  }
  const auto f = load_instance_file(path, SourceFormat::orlib_multi, Sense::maximize);
  EXPECT_EQ(f.problems[0].name, "bqpdemo-1");
  EXPECT_EQ(f.problems[1].name, "bqpdemo-2");
  std::remove(path.c_str());
  EXPECT_THROW(load_instance_file(path, SourceFormat::orlib_multi, Sense::minimize),
               std::runtime_error);
}

TEST(ParseSense, Words) {
  EXPECT_EQ(parse_sense("max"), Sense::maximize);
  EXPECT_EQ(parse_sense("minimize"), Sense::minimize);
  EXPECT_FALSE(parse_sense("up").has_value());
}

TEST(GenerateRandom, DensityAndDeterminism) {
  const auto full = generate_random(3, 1.0, 1, 9, 1);
  EXPECT_EQ(full.upper_nonzeros(), 6u);
  const auto a = generate_random(500, 0.1, -100, 100, 42);
  const auto b = generate_random(500, 0.1, -100, 100, 42);
  EXPECT_GE(density(a), 0.085);
  EXPECT_LE(density(a), 0.115);
  for (Index i = 0; i < 500; ++i) {
    for (Index j = 0; j < 500; ++j) ASSERT_EQ(a.at(i, j), b.at(i, j));
  }
  for (Index i = 0; i < 500; ++i) {
    for (Index j = i; j < 500; ++j) {
      const double v = a.at(i, j);
      ASSERT_EQ(v, std::trunc(v));
      ASSERT_LE(std::abs(v), 100.0);
    }
  }
  EXPECT_THROW(generate_random(0, 0.1, 0, 1, 0), std::invalid_argument);
  EXPECT_THROW(generate_random(5, 0.0, 0, 1, 0), std::invalid_argument);
  EXPECT_THROW(generate_random(5, 0.5, 2, 1, 0), std::invalid_argument);
}

TEST(GenerateSuite, NamesAndSeeds) {
  const auto s = generate_suite("g", 3, 20, 0.3, -5, 5, 10);
  ASSERT_EQ(s.size(), 3u);
  EXPECT_EQ(s[2].name, "g-3");
  const auto third = generate_random(20, 0.3, -5, 5, 12);
  for (Index i = 0; i < 20; ++i) {
    for (Index j = 0; j < 20; ++j) ASSERT_EQ(s[2].problem.at(i, j), third.at(i, j));
  }
}

TEST(BestKnownRegistry, LoadSaveAndErrors) {
  std::istringstream in("# comment\nbqp50-1 2098\n\nbqp50-2  3702 # trailing\n");
  const auto r = BestKnownRegistry::load(in);
  EXPECT_EQ(r.size(), 2u);
  EXPECT_EQ(r.find("bqp50-2"), 3702.0);
  EXPECT_FALSE(r.find("missing").has_value());

  std::ostringstream out;
  r.save(out);
  std::istringstream again(out.str());
  EXPECT_EQ(BestKnownRegistry::load(again).entries(), r.entries());

  std::istringstream dup("a 1\na 2\n");
  EXPECT_THROW(BestKnownRegistry::load(dup), ParseError);
  std::istringstream bad("a\n");
  EXPECT_THROW(BestKnownRegistry::load(bad), ParseError);
  std::istringstream nan("a nan\n");
  EXPECT_ANY_THROW(BestKnownRegistry::load(nan));
  BestKnownRegistry m;
  EXPECT_THROW(m.set("x", INFINITY), std::invalid_argument);
}

}  // namespace
}  // namespace gqs
