#include <algorithm>
#include <numeric>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "pinerve/homology.hpp"
#include "pinerve/perm.hpp"

using namespace pinerve;

namespace
{

using Dense = std::vector<std::vector<long long>>;

// Laplace expansion along the first row.
Integer laplace(const std::vector<std::vector<Integer>>& a)
{
  const std::size_t n = a.size();
  if (n == 0)
    return 1;
  Integer total = 0;
  for (std::size_t j = 0; j < n; ++j) {
    if (a[0][j] == 0)
      continue;
    std::vector<std::vector<Integer>> minor;
    for (std::size_t i = 1; i < n; ++i) {
      std::vector<Integer> row;
      for (std::size_t k = 0; k < n; ++k)
        if (k != j)
          row.push_back(a[i][k]);
      minor.push_back(row);
    }
    total += (j % 2 ? -1 : 1) * a[0][j] * laplace(minor);
  }
  return total;
}

void subsets(std::size_t n, std::size_t k, std::size_t start, std::vector<std::size_t>& cur,
             std::vector<std::vector<std::size_t>>& out)
{
  if (cur.size() == k) {
    out.push_back(cur);
    return;
  }
  for (std::size_t i = start; i < n; ++i) {
    cur.push_back(i);
    subsets(n, k, i + 1, cur, out);
    cur.pop_back();
  }
}

// Invariant factors from determinantal divisors: d_k is the gcd of all k x k
// minors and the k-th factor is d_k / d_{k-1}.
std::vector<Integer> invariant_factors_by_minors(const Dense& m)
{
  const std::size_t rows = m.size(), cols = rows ? m[0].size() : 0;
  std::vector<Integer> out;
  Integer previous = 1;
  for (std::size_t k = 1; k <= std::min(rows, cols); ++k) {
    std::vector<std::vector<std::size_t>> rs, cs;
    std::vector<std::size_t> cur;
    subsets(rows, k, 0, cur, rs);
    subsets(cols, k, 0, cur, cs);
    Integer g = 0;
    for (const auto& r : rs)
      for (const auto& c : cs) {
        std::vector<std::vector<Integer>> sub(k, std::vector<Integer>(k));
        for (std::size_t i = 0; i < k; ++i)
          for (std::size_t j = 0; j < k; ++j)
            sub[i][j] = m[r[i]][c[j]];
        g = gcd(g, abs(laplace(sub)));
      }
    if (g == 0)
      break;
    out.push_back(g / previous);
    previous = g;
  }
  return out;
}

Dense random_matrix(std::mt19937& rng, std::size_t rows, std::size_t cols, int range, double density)
{
  std::uniform_int_distribution<int> value(-range, range);
  std::bernoulli_distribution keep(density);
  Dense m(rows, std::vector<long long>(cols, 0));
  for (auto& row : m)
    for (auto& x : row)
      if (keep(rng))
        x = value(rng);
  return m;
}

// Boundary of a triangle: three vertices, three edges.
CellComplex circle()
{
  CellComplex c;
  for (int i = 0; i < 3; ++i)
    c.add_cell(0, {});
  c.add_cell(1, {{0, -1}, {1, 1}});
  c.add_cell(1, {{1, -1}, {2, 1}});
  c.add_cell(1, {{0, 1}, {2, -1}});
  return c;
}

// One vertex, one loop, one disc attached along the loop twice.
CellComplex projective_plane()
{
  CellComplex c;
  c.add_cell(0, {});
  c.add_cell(1, {{0, 0}});
  c.add_cell(2, {{1, 2}});
  return c;
}

} // namespace

TEST(SmithNormalForm, SmallExamples)
{
  EXPECT_EQ(smith_normal_form(Dense{{2, 4}, {6, 8}}), (std::vector<Integer>{2, 4}));
  EXPECT_TRUE(smith_normal_form(Dense{{0, 0}, {0, 0}}).empty());
  EXPECT_EQ(smith_normal_form(Dense{{1, 0}, {0, 1}}), (std::vector<Integer>{1, 1}));
  EXPECT_EQ(smith_normal_form(Dense{{2, 0}, {0, 3}}), (std::vector<Integer>{1, 6}));
  EXPECT_TRUE(smith_normal_form(IntMatrix(0, 5)).empty());
  EXPECT_TRUE(smith_normal_form(IntMatrix(4, 0)).empty());
}

TEST(SmithNormalForm, AgreesWithDeterminantalDivisors)
{
  std::mt19937 rng(20261016);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t rows = 1 + rng() % 4, cols = 1 + rng() % 4;
    const auto m = random_matrix(rng, rows, cols, trial % 2 ? 3 : 12, trial % 3 ? 0.6 : 1.0);
    const auto snf = smith_normal_form(m);
    ASSERT_EQ(snf, invariant_factors_by_minors(m)) << "trial " << trial;
    for (std::size_t i = 1; i < snf.size(); ++i)
      ASSERT_EQ(snf[i] % snf[i - 1], 0);
  }
}

TEST(SmithNormalForm, InvariantUnderUnimodularChanges)
{
  std::mt19937 rng(7);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t rows = 3 + rng() % 5, cols = 3 + rng() % 5;
    auto m = random_matrix(rng, rows, cols, 6, 0.5);
    const auto expected = smith_normal_form(m);
    // random elementary row and column operations
    for (int step = 0; step < 30; ++step) {
      const long long k = static_cast<long long>(rng() % 5) - 2;
      if (rng() % 2) {
        const std::size_t a = rng() % rows, b = rng() % rows;
        if (a == b)
          continue;
        for (std::size_t j = 0; j < cols; ++j)
          m[a][j] += k * m[b][j];
      } else {
        const std::size_t a = rng() % cols, b = rng() % cols;
        if (a == b)
          continue;
        for (std::size_t i = 0; i < rows; ++i)
          m[i][a] += k * m[i][b];
      }
    }
    ASSERT_EQ(smith_normal_form(m), expected) << "trial " << trial;
  }
}

TEST(Determinant, AgreesWithLaplace)
{
  std::mt19937 rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = rng() % 6;
    const auto m = random_matrix(rng, n, n, 9, 0.7);
    std::vector<std::vector<Integer>> a(n, std::vector<Integer>(n));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        a[i][j] = m[i][j];
    ASSERT_EQ(determinant(a), laplace(a));
  }
}

TEST(Homology, HandBuiltComplexes)
{
  const auto h = homology_of(circle());
  EXPECT_TRUE(h.reduced);
  EXPECT_TRUE(verify_wedge(h, 1, 1));
  const auto unreduced = homology_of(circle(), false);
  EXPECT_EQ(unreduced.betti(0), 1u);
  EXPECT_EQ(unreduced.betti(1), 1u);

  const auto rp2 = homology_of(projective_plane());
  EXPECT_EQ(rp2.betti(1), 0u);
  EXPECT_EQ(rp2.torsion(1), (std::vector<Integer>{2}));
  EXPECT_EQ(rp2.betti(2), 0u);
  EXPECT_FALSE(verify_wedge(rp2, 2, 0));
}

TEST(Homology, RejectsNonComplexes)
{
  ChainComplexData cc;
  cc.ranks = {1, 1, 1};
  cc.boundaries = {IntMatrix(0, 1), IntMatrix::from_dense({{1}}), IntMatrix::from_dense({{1}})};
  EXPECT_THROW(homology_of(cc), InvalidComplex);
  cc.boundaries[2] = IntMatrix(2, 1);
  EXPECT_THROW(homology_of(cc), InvalidArgument);
}

TEST(Homology, PartitionNervesAreWedgesOfSpheres)
{
  const auto h3 = homology_of(partition_nerve(3).cells());
  EXPECT_TRUE(verify_wedge(h3, 0, 2));
  const auto h4 = homology_of(partition_nerve(4).cells());
  EXPECT_TRUE(verify_wedge(h4, 1, 6));
  const auto h5 = homology_of(partition_nerve(5).cells());
  EXPECT_TRUE(verify_wedge(h5, 2, 24));
  EXPECT_FALSE(verify_wedge(h5, 2, 23));
}

TEST(Homology, MaxDimTruncates)
{
  const auto h = homology_of(partition_nerve(5).cells(), true, 1);
  ASSERT_EQ(h.groups.size(), 2u);
  EXPECT_EQ(h.betti(1), 0u);
}

TEST(Homology, Quotients)
{
  const auto c4 = partition_nerve(4);
  EXPECT_TRUE(verify_wedge(homology_of(quotient_complex(c4, symmetric_group(4)).cells), 0, 0));
  const auto c5 = partition_nerve(5);
  const auto cyclic = homology_of(quotient_complex(c5, generate_group(5, "(1 2 3 4 5)")).cells);
  EXPECT_EQ(cyclic.torsion(1), (std::vector<Integer>{5}));
  EXPECT_EQ(cyclic.betti(1), 0u);
  EXPECT_EQ(cyclic.betti(2), 4u);
  EXPECT_TRUE(cyclic.torsion(2).empty());
}

TEST(Homology, JsonAndCsv)
{
  const auto rp2 = homology_of(projective_plane());
  EXPECT_EQ(to_json(rp2).dump(),
            R"([{"betti":0,"dim":0,"torsion":[]},{"betti":0,"dim":1,"torsion":[2]},{"betti":0,"dim":2,"torsion":[]}])");
  EXPECT_EQ(to_csv(rp2), "dim,betti,torsion\n0,0,\n1,0,2\n2,0,\n");
  EXPECT_EQ(integer_to_json(Integer("123456789012345678901234567890")).dump(),
            "\"123456789012345678901234567890\"");
}
