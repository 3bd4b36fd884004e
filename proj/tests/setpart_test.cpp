#include <algorithm>
#include <set>
#include <vector>

#include <gtest/gtest.h>

#include "pinerve/setpart.hpp"

using namespace pinerve;

namespace
{

// Independent count of set partitions: canonicalize every labelling of
// [n] into a set of blocks and count the distinct results.
std::size_t brute_force_partition_count(int n)
{
  std::set<std::set<std::set<int>>> seen;
  std::vector<int> labels(static_cast<std::size_t>(n), 0);
  while (true) {
    std::vector<std::set<int>> blocks(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
      blocks[static_cast<std::size_t>(labels[static_cast<std::size_t>(i)])].insert(i + 1);
    std::set<std::set<int>> p;
    for (auto& b : blocks)
      if (!b.empty())
        p.insert(b);
    seen.insert(p);
    int pos = 0;
    while (pos < n && ++labels[static_cast<std::size_t>(pos)] == n)
      labels[static_cast<std::size_t>(pos++)] = 0;
    if (pos == n)
      break;
  }
  return seen.size();
}

// Block containment straight from the definition.
bool refines_by_blocks(const Partition& p, const Partition& q)
{
  for (const auto& b : p.blocks()) {
    bool inside = false;
    for (const auto& c : q.blocks())
      if (std::includes(c.begin(), c.end(), b.begin(), b.end()))
        inside = true;
    if (!inside)
      return false;
  }
  return true;
}

} // namespace

TEST(SetPartition, BruteForceOracleAgreesWithFrozenBellNumbers)
{
  EXPECT_EQ(brute_force_partition_count(3), 5u);
  EXPECT_EQ(brute_force_partition_count(4), 15u);
  EXPECT_EQ(brute_force_partition_count(5), 52u);
}

TEST(SetPartition, EnumerateProperCounts)
{
  EXPECT_EQ(enumerate_proper(3).size(), 3u);
  EXPECT_EQ(enumerate_proper(4).size(), 13u);
  EXPECT_EQ(enumerate_proper(5).size(), 50u);
  for (int n = 3; n <= 6; ++n)
    EXPECT_EQ(enumerate_all(n).size(), n <= 5 ? brute_force_partition_count(n) : 203u);
}

TEST(SetPartition, EnumerateProperExcludesEndpointsAndIsSorted)
{
  for (int n = 3; n <= 6; ++n) {
    const auto ps = enumerate_proper(n);
    EXPECT_TRUE(std::is_sorted(ps.begin(), ps.end()));
    EXPECT_EQ(std::adjacent_find(ps.begin(), ps.end()), ps.end());
    for (const auto& p : ps) {
      EXPECT_FALSE(p.is_discrete());
      EXPECT_FALSE(p.is_total());
    }
  }
  const auto all = enumerate_all(4);
  EXPECT_TRUE(all.front().is_total());
  EXPECT_TRUE(all.back().is_discrete());
}

TEST(SetPartition, EnumerateProperRejectsSmallN)
{
  EXPECT_THROW(enumerate_proper(2), InvalidArgument);
  EXPECT_THROW(enumerate_proper(0), InvalidArgument);
}

TEST(SetPartition, Refines)
{
  EXPECT_TRUE(refines(parse_partition("1,2|3|4"), parse_partition("1,2|3,4")));
  EXPECT_FALSE(refines(parse_partition("1,2|3,4"), parse_partition("1,3|2,4")));
  for (const auto& p : enumerate_all(4))
    EXPECT_TRUE(refines(p, p));
  EXPECT_THROW(refines(parse_partition("1|2"), parse_partition("1|2|3")), InvalidArgument);
}

TEST(SetPartition, RefinesMatchesBlockContainment)
{
  const auto all = enumerate_all(5);
  for (const auto& p : all)
    for (const auto& q : all)
      ASSERT_EQ(refines(p, q), refines_by_blocks(p, q)) << format(p) << " vs " << format(q);
}

TEST(SetPartition, RefinesIsPartialOrder)
{
  for (int n = 3; n <= 5; ++n) {
    const auto all = enumerate_all(n);
    for (const auto& p : all)
      for (const auto& q : all) {
        if (p != q && refines(p, q)) {
          ASSERT_FALSE(refines(q, p));
        }
        if (!refines(p, q))
          continue;
        for (const auto& r : all) {
          if (refines(q, r)) {
            ASSERT_TRUE(refines(p, r));
          }
        }
      }
  }
}

TEST(SetPartition, Meet)
{
  EXPECT_EQ(meet(parse_partition("1,2,3|4"), parse_partition("1|2,3,4")), parse_partition("1|2,3|4"));
  const auto p = parse_partition("1,3|2|4,5");
  EXPECT_EQ(meet(p, p), p);
  EXPECT_EQ(meet(parse_partition("1,2|3,4"), parse_partition("1,3|2,4")), Partition::discrete(4));
  EXPECT_THROW(meet(parse_partition("1|2"), parse_partition("1|2|3")), InvalidArgument);
}

TEST(SetPartition, MeetIsGreatestLowerBound)
{
  const auto all = enumerate_all(4);
  for (const auto& p : all)
    for (const auto& q : all) {
      const auto m = meet(p, q);
      ASSERT_TRUE(refines(m, p));
      ASSERT_TRUE(refines(m, q));
      for (const auto& r : all) {
        if (refines(r, p) && refines(r, q)) {
          ASSERT_TRUE(refines(r, m));
        }
      }
    }
}

TEST(SetPartition, ParseAndFormat)
{
  const auto p = parse_partition("1,2|3|4");
  EXPECT_EQ(p.blocks(), (std::vector<std::vector<int>>{{1, 2}, {3}, {4}}));
  EXPECT_EQ(format(parse_partition("3|1,2|4")), "1,2|3|4");
  EXPECT_EQ(format(parse_partition("5,1|4|2|3")), "1,5|2|3|4");
}

TEST(SetPartition, FormatParseRoundTripIsIdentityOnCanonicalText)
{
  for (int n = 1; n <= 6; ++n)
    for (const auto& p : enumerate_all(n)) {
      const auto text = format(p);
      ASSERT_EQ(parse_partition(text), p);
      ASSERT_EQ(format(parse_partition(text)), text);
    }
}

TEST(SetPartition, ParseErrors)
{
  try {
    parse_partition("1,2|2,3");
    FAIL() << "expected a parse error";
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("duplicate element 2"), std::string::npos);
    EXPECT_EQ(e.position, 4u);
  }
  EXPECT_THROW(parse_partition(""), ParseError);
  EXPECT_THROW(parse_partition("1,|2"), ParseError);
  EXPECT_THROW(parse_partition("1|2|"), ParseError);
  EXPECT_THROW(parse_partition("1;2"), ParseError);
  EXPECT_THROW(parse_partition("1|3"), ParseError);     // 3 out of range for two elements
  EXPECT_THROW(parse_partition("1|2", 3), ParseError);  // 3 missing
  EXPECT_THROW(parse_partition("0|1"), ParseError);
}

TEST(SetPartition, ConstructorValidates)
{
  EXPECT_THROW(Partition(3, {{1, 2}, {2, 3}}), InvalidArgument);
  EXPECT_THROW(Partition(3, {{1, 2}}), InvalidArgument);
  EXPECT_THROW(Partition(3, {{1, 2}, {}, {3}}), InvalidArgument);
  EXPECT_THROW(Partition(3, {{1, 2}, {4}}), InvalidArgument);
  EXPECT_EQ(Partition(3, {{3}, {2, 1}}), parse_partition("1,2|3"));
}
