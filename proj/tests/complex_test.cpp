#include <cstdint>
#include <map>
#include <vector>

#include <gtest/gtest.h>

#include "pinerve/complex.hpp"

using namespace pinerve;

namespace
{

// Chain counts by size, enumerating every subset of the poset and keeping
// the totally ordered ones.
std::map<std::size_t, std::size_t> chains_by_subset_enumeration(const std::vector<Partition>& poset)
{
  std::map<std::size_t, std::size_t> counts;
  const std::size_t m = poset.size();
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << m); ++mask) {
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < m; ++i)
      if (mask >> i & 1)
        members.push_back(i);
    bool chain = true;
    for (std::size_t a = 0; a < members.size() && chain; ++a)
      for (std::size_t b = a + 1; b < members.size() && chain; ++b)
        chain = refines(poset[members[a]], poset[members[b]]) ||
                refines(poset[members[b]], poset[members[a]]);
    if (chain)
      ++counts[members.size()];
  }
  return counts;
}

std::size_t factorial(std::size_t k)
{ return k <= 1 ? 1 : k * factorial(k - 1); }

} // namespace

TEST(OrderComplex, SmallestNerves)
{
  const auto c3 = partition_nerve(3);
  EXPECT_EQ(c3.f_vector(), (std::vector<std::size_t>{3}));
  EXPECT_EQ(c3.top_dimension(), 0);

  const auto oracle = chains_by_subset_enumeration(enumerate_proper(4));
  EXPECT_EQ(oracle.at(1), 13u);
  EXPECT_EQ(oracle.at(2), 18u);
  EXPECT_FALSE(oracle.contains(3));
  EXPECT_EQ(partition_nerve(4).f_vector(), (std::vector<std::size_t>{13, 18}));
}

TEST(OrderComplex, FVectorOfFiveMatchesFrozenCounts)
{
  // chain counts of the proper part of Pi_5 by brute-force recursion
  EXPECT_EQ(partition_nerve(5).f_vector(), (std::vector<std::size_t>{50, 205, 180}));
}

TEST(OrderComplex, SingleElement)
{
  const auto c = build_order_complex({parse_partition("1,2|3")});
  EXPECT_EQ(c.f_vector(), (std::vector<std::size_t>{1}));
  EXPECT_EQ(c.euler_characteristic(), 1);
}

TEST(OrderComplex, TopCellCountMatchesMaximalChainFormula)
{
  for (std::size_t n = 3; n <= 6; ++n) {
    const auto c = partition_nerve(static_cast<int>(n));
    const std::size_t expected = factorial(n) * factorial(n - 1) / (std::size_t{1} << (n - 1));
    EXPECT_EQ(c.f_vector().back(), expected) << "n=" << n;
  }
  EXPECT_EQ(partition_nerve(6).f_vector().back(), 2700u);
}

TEST(OrderComplex, EulerCharacteristic)
{
  EXPECT_EQ(partition_nerve(3).euler_characteristic(), 3);
  EXPECT_EQ(partition_nerve(4).euler_characteristic(), -5);
  EXPECT_EQ(partition_nerve(5).euler_characteristic(), 50 - 205 + 180);
}

TEST(OrderComplex, FaceClosureAndCanonicalOrder)
{
  const auto c = partition_nerve(5);
  for (int d = 0; d <= c.top_dimension(); ++d)
    for (CellId x = c.cells().first_of_dim(d); x + 1 < c.cells().end_of_dim(d); ++x) {
      const auto a = c.vertices(x), b = c.vertices(x + 1);
      ASSERT_TRUE(std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end()));
    }
  for (CellId x = 0; static_cast<std::size_t>(x) < c.size(); ++x) {
    const auto s = c.simplex(x);
    for (std::size_t i = 1; i < s.vertices.size(); ++i)
      ASSERT_TRUE(s.vertices[i - 1] != s.vertices[i] && refines(s.vertices[i - 1], s.vertices[i]));
    for (const auto& [face, sign] : faces(s))
      ASSERT_TRUE(c.find(face).has_value()) << format(face);
    ASSERT_EQ(c.find(s), x);
  }
}

TEST(OrderComplex, VertexCellIdsEqualVertexIds)
{
  const auto c = partition_nerve(4);
  for (std::size_t v = 0; v < c.ground().size(); ++v)
    EXPECT_EQ(c.vertices(static_cast<CellId>(v))[0], static_cast<int>(v));
}

TEST(Faces, SignsAndOrder)
{
  const auto a = parse_partition("1,2|3|4"), b = parse_partition("1,2|3,4");
  const Simplex ab{{a, b}};
  const auto f = faces(ab);
  ASSERT_EQ(f.size(), 2u);
  EXPECT_EQ(f[0], (std::pair<Simplex, int>{Simplex{{b}}, 1}));
  EXPECT_EQ(f[1], (std::pair<Simplex, int>{Simplex{{a}}, -1}));

  const auto p = parse_partition("1|2|3,4"), q = parse_partition("1,2|3,4"),
             r = parse_partition("1,2,3,4");
  const auto g = faces(Simplex{{p, q, r}});
  ASSERT_EQ(g.size(), 3u);
  EXPECT_EQ(g[0], (std::pair<Simplex, int>{Simplex{{q, r}}, 1}));
  EXPECT_EQ(g[1], (std::pair<Simplex, int>{Simplex{{p, r}}, -1}));
  EXPECT_EQ(g[2], (std::pair<Simplex, int>{Simplex{{p, q}}, 1}));

  EXPECT_TRUE(faces(Simplex{{a}}).empty());
}

TEST(BoundaryMatrix, EdgesOfFour)
{
  const auto c = partition_nerve(4);
  const auto m = c.boundary_matrix(1);
  EXPECT_EQ(m.rows(), 13u);
  EXPECT_EQ(m.cols(), 18u);
  for (std::size_t j = 0; j < m.cols(); ++j) {
    const auto& col = m.column(j);
    ASSERT_EQ(col.size(), 2u);
    EXPECT_EQ(col[0].second + col[1].second, 0);
    EXPECT_EQ(abs(col[0].second), 1);
  }
}

TEST(BoundaryMatrix, BoundarySquaredVanishes)
{
  for (int n = 3; n <= 6; ++n) {
    const auto c = partition_nerve(n);
    for (int d = 2; d <= c.top_dimension(); ++d)
      EXPECT_TRUE((c.boundary_matrix(d - 1) * c.boundary_matrix(d)).is_zero())
        << "n=" << n << " d=" << d;
  }
}

TEST(BoundaryMatrix, RangeAndEmptyDimension)
{
  const auto c = partition_nerve(4);
  const auto empty = c.boundary_matrix(2);
  EXPECT_EQ(empty.rows(), 18u);
  EXPECT_EQ(empty.cols(), 0u);
  EXPECT_THROW(c.boundary_matrix(0), InvalidArgument);
  EXPECT_THROW(c.boundary_matrix(3), InvalidArgument);
}

TEST(FinitePoset, RejectsNonOrders)
{
  EXPECT_THROW(FinitePoset::from_relation(2, [](std::size_t, std::size_t) { return true; }),
               InvalidPoset);
  // 0 < 1 < 2 without 0 < 2
  EXPECT_THROW(FinitePoset::from_relation(3, [](std::size_t i, std::size_t j) {
                 return (i == 0 && j == 1) || (i == 1 && j == 2);
               }),
               InvalidPoset);
  EXPECT_THROW(FinitePoset::from_relation(2, [](std::size_t i, std::size_t j) { return i != j; }),
               InvalidPoset);
  const auto chain = FinitePoset::from_relation(3, [](std::size_t i, std::size_t j) { return i < j; });
  EXPECT_EQ(chain.covers(), (std::vector<std::pair<std::size_t, std::size_t>>{{0, 1}, {1, 2}}));
}

TEST(OrderComplex, CustomOrder)
{
  // a < m and nothing else
  std::vector<Partition> elems{parse_partition("1,2|3|4"), parse_partition("1,2|3,4")};
  const auto c = build_order_complex(elems, [](std::size_t i, std::size_t j) { return i == 0 && j == 1; });
  EXPECT_EQ(c.f_vector(), (std::vector<std::size_t>{2, 1}));
  EXPECT_THROW(build_order_complex(elems, [](std::size_t i, std::size_t j) { return i != j; }),
               InvalidPoset);
}

TEST(SimplexText, RoundTrip)
{
  const auto c = partition_nerve(5);
  for (CellId x = 0; static_cast<std::size_t>(x) < c.size(); x += 7) {
    const auto text = c.label(x);
    ASSERT_EQ(parse_simplex(text), c.simplex(x));
    ASSERT_EQ(format(parse_simplex(text)), text);
  }
  EXPECT_EQ(format(parse_simplex("5,1|2|3|4 <1,2,5|3|4")), "1,5|2|3|4 < 1,2,5|3|4");
  EXPECT_THROW(parse_simplex("1,2|3|4 < 1,3|2|4"), ParseError);
  EXPECT_THROW(parse_simplex("1,2|3|4 < "), ParseError);
}
