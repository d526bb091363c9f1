#include <gtest/gtest.h>

#include <random>
#include <vector>

#include "gqs/tabu_queue.hpp"
#include "gqs/tabu_search.hpp"
#include "oracles.hpp"

namespace gqs {
namespace {

std::vector<Index> all(std::size_t n) {
  std::vector<Index> v(n);
  for (Index i = 0; i < n; ++i) v[i] = i;
  return v;
}

TEST(TabuQueue, FifoEviction) {
  TabuQueue t(6, 2);
  t.push(std::vector<Index>{1, 2});
  t.push(std::vector<Index>{3});
  t.push(std::vector<Index>{4});
  EXPECT_EQ(t.size(), 2u);
  EXPECT_EQ(t.candidates(), (std::vector<Index>{0, 1, 2, 5}));
}

TEST(TabuQueue, FlippedOnlyMayPushEmptyGroup) {
  TabuQueue t(4, 2);
  const std::vector<Index> chosen{0, 1};
  t.update(chosen, std::vector<Index>{0}, false);
  EXPECT_EQ(t.candidates(), (std::vector<Index>{1, 2, 3}));
  t.update(chosen, {}, false);
  EXPECT_EQ(t.size(), 2u);
  EXPECT_EQ(t.candidates(), (std::vector<Index>{1, 2, 3}));
  t.update(chosen, {}, false);  // ages out {0}
  EXPECT_EQ(t.candidates(), all(4));
  t.update(chosen, {}, true);
  EXPECT_EQ(t.candidates(), (std::vector<Index>{2, 3}));
}

TEST(TabuQueue, ZeroTenureKeepsEverythingCandidate) {
  TabuQueue t(5, 0);
  t.push(all(5));
  EXPECT_EQ(t.size(), 0u);
  EXPECT_EQ(t.candidates(), all(5));
}

TEST(TabuQueue, FreshFullAndCleared) {
  TabuQueue t(7, 3);
  EXPECT_EQ(t.candidates(), all(7));
  t.update(all(7), {}, true);
  EXPECT_TRUE(t.candidates().empty());
  t.clear();
  EXPECT_EQ(t.candidates(), all(7));
  EXPECT_THROW(t.push(std::vector<Index>{7}), std::invalid_argument);
}

TEST(TabuQueue, CountsMatchRecomputation) {
  std::mt19937_64 eng(3);
  TabuQueue t(15, 4);
  for (int step = 0; step < 200; ++step) {
    std::vector<Index> g;
    for (Index i = 0; i < 15; ++i) {
      if (eng() % 4 == 0) g.push_back(i);
    }
    t.push(g);
    EXPECT_EQ(t.size(), std::min<std::size_t>(step + 1, 4));
    std::vector<std::uint32_t> counts(15, 0);
    for (const auto& grp : t.groups()) {
      for (Index i : grp) ++counts[i];
    }
    std::vector<Index> expected;
    for (Index i = 0; i < 15; ++i) {
      EXPECT_EQ(t.member_count(i), counts[i]);
      if (counts[i] == 0) expected.push_back(i);
    }
    EXPECT_EQ(t.candidates(), expected);
  }
}

TEST(TabuQueue, DefaultTenure) {
  EXPECT_EQ(default_kopt_tenure(500, 50), 6u);
  EXPECT_EQ(default_kopt_tenure(2500, 200), 8u);  // 7.5 rounds up
  EXPECT_EQ(default_kopt_tenure(10, 50), 1u);
  EXPECT_THROW(default_kopt_tenure(10, 0), std::invalid_argument);
}

TEST(TabuSearch, NeverReportsWorseThanStartAndValueIsExact) {
  std::mt19937_64 eng(4);
  for (int t = 0; t < 20; ++t) {
    const auto q = testing::random_dense(30, 0.3, -50, 50, eng()).problem();
    GainsState s(q, testing::random_assignment(30, eng()));
    const double start = s.value();
    const auto r = tabu_search(s, {5, 60});
    EXPECT_LE(r.best.value, start);
    EXPECT_EQ(r.best.value, evaluate(q, r.best.bits));
    EXPECT_EQ(s.value(), evaluate(q, s.bits()));
    EXPECT_LE(r.steps_to_best, r.steps);
  }
}

TEST(TabuSearch, DescendsToLocalMinimumWithoutTenure) {
  const auto q = QuboProblem::from_dense(2, std::vector<double>{-1, -2, -2, 3});
  GainsState s(q, {0, 1});
  const auto r = tabu_search(s, {0, 2});
  EXPECT_EQ(r.best.value, -2.0);
  EXPECT_EQ(r.best.bits, (BitVector{1, 1}));
}

}  // namespace
}  // namespace gqs
