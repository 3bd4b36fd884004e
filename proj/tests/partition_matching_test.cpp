#include <algorithm>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <vector>

#include <gtest/gtest.h>

#include "pinerve/homology.hpp"
#include "pinerve/partition_matching.hpp"

using namespace pinerve;

namespace
{

std::size_t factorial(int k)
{ return k <= 1 ? 1 : static_cast<std::size_t>(k) * factorial(k - 1); }

// Maximal chains through A built directly: each step adds one new element
// to the block of 1, starting from a doubleton.
std::set<Simplex> chains_through_star_by_hand(int n)
{
  std::set<Simplex> out;
  std::vector<int> rest(static_cast<std::size_t>(n - 1));
  std::iota(rest.begin(), rest.end(), 2);
  do {
    Simplex s;
    std::vector<int> home{1};
    for (int i = 0; i + 1 < static_cast<int>(rest.size()); ++i) {
      home.push_back(rest[static_cast<std::size_t>(i)]);
      std::vector<std::vector<int>> blocks{home};
      for (std::size_t j = static_cast<std::size_t>(i) + 1; j < rest.size(); ++j)
        blocks.push_back({rest[j]});
      s.vertices.push_back(Partition(n, blocks));
    }
    out.insert(s);
  } while (std::next_permutation(rest.begin(), rest.end()));
  return out;
}

std::vector<std::size_t> fixing_n(const PermGroup& g)
{
  std::vector<std::size_t> out;
  for (std::size_t e = 0; e < g.order(); ++e)
    if (g.element(e).fixes(g.degree()))
      out.push_back(e);
  return out;
}

} // namespace

TEST(SpecialSets, SmallCases)
{
  const auto s3 = special_sets(3);
  EXPECT_EQ(s3.star, (std::vector<Partition>{parse_partition("1,2|3"), parse_partition("1,3|2")}));
  EXPECT_EQ(s3.top_chains.size(), 2u);
  EXPECT_EQ(format(s3.alpha), "1|2,3");
  const auto s4 = special_sets(4);
  EXPECT_EQ(s4.star.size(), 6u);
  EXPECT_EQ(s4.top_chains.size(), 6u);
  EXPECT_EQ(special_sets(5).top_chains.size(), 24u);
  EXPECT_THROW(special_sets(2), InvalidArgument);
}

TEST(SpecialSets, CardinalityAndShape)
{
  for (int n = 3; n <= 6; ++n) {
    const auto s = special_sets(n);
    EXPECT_EQ(s.top_chains.size(), factorial(n - 1));
    EXPECT_EQ(std::set<Simplex>(s.top_chains.begin(), s.top_chains.end()), chains_through_star_by_hand(n));
    EXPECT_FALSE(in_star_set(s.alpha));
    for (const auto& v : s.atoms)
      EXPECT_TRUE(in_star_set(v));
    EXPECT_EQ(s.atoms.size(), static_cast<std::size_t>(n - 1));
  }
}

TEST(SpecialSets, Atoms)
{
  EXPECT_EQ(format(atom_vertex(5, 3)), "1,3|2|4|5");
  EXPECT_EQ(format(atom_vertex(4, 4)), "1,4|2|3");
  EXPECT_THROW(atom_vertex(4, 1), InvalidArgument);
  EXPECT_THROW(atom_vertex(4, 5), InvalidArgument);
}

TEST(Phi, Examples)
{
  const NerveLevel level(5);
  const auto& c = level.complex();
  EXPECT_EQ(phi(level, level.vertex_cell(alpha_vertex(5))), 0);
  EXPECT_EQ(phi(level, *c.find(parse_simplex("1,5|2|3|4 < 1,2,5|3|4"))), 4);
  EXPECT_EQ(phi(level, *c.find(parse_simplex("1,2|3|4|5 < 1,2|3,4|5"))), 1);
  EXPECT_EQ(phi(level, *c.find(parse_simplex("1,2,3|4|5 < 1,2,3|4,5"))), 0);
}

TEST(Phi, OrderPreservingAndEquivariant)
{
  for (int n = 3; n <= 6; ++n) {
    const NerveLevel level(n);
    const auto& cells = level.complex().cells();
    for (CellId b = 0; static_cast<std::size_t>(b) < cells.size(); ++b)
      for (const auto& inc : cells.boundary(b))
        ASSERT_TRUE(level.target().less_equal(static_cast<std::size_t>(phi(level, inc.face)),
                                              static_cast<std::size_t>(phi(level, b))));
    const std::size_t stride = n == 6 ? 7 : 1;
    for (std::size_t e = 0; e < level.group().order(); e += stride)
      for (CellId x = 0; static_cast<std::size_t>(x) < cells.size(); ++x)
        ASSERT_EQ(phi(level, level.action().act(e, x)),
                  fiber_target_action(level.group().element(e), phi(level, x)));
  }
}

TEST(Psi, Examples)
{
  EXPECT_EQ(format(psi(parse_simplex("1,2|3|4"))), "1,5|2|3|4 < 1,2,5|3|4");
  EXPECT_EQ(format(psi(parse_simplex("1,2|3|4 < 1,2|3,4"))),
            "1,5|2|3|4 < 1,2,5|3|4 < 1,2,5|3,4");
  EXPECT_EQ(format(psi(parse_simplex("1|2,3|4"))), "1,5|2|3|4 < 1,5|2,3|4");
  const auto s = parse_simplex("1,2|3|4 < 1,2|3,4");
  EXPECT_EQ(psi_inverse(psi(s)), s);
  EXPECT_THROW(psi_inverse(parse_simplex("1,5|2|3|4")), InvalidArgument);
  EXPECT_THROW(psi_inverse(parse_simplex("1,4|2|3|5 < 1,2,4|3|5")), InvalidArgument);
}

TEST(Psi, PosetIsomorphismOntoAtomFiber)
{
  for (int n = 4; n <= 6; ++n) {
    const NerveLevel lower(n - 1), upper(n);
    const auto lift = MainMatchingBuilder::psi_cells(lower, upper);
    const auto& uc = upper.complex();
    const CellId vn = upper.vertex_cell(atom_vertex(n, n));
    std::set<CellId> image(lift.begin(), lift.end());
    ASSERT_EQ(image.size(), lift.size());
    std::set<CellId> fiber;
    for (CellId x = 0; static_cast<std::size_t>(x) < uc.size(); ++x)
      if (phi(upper, x) == n - 1 && x != vn)
        fiber.insert(x);
    ASSERT_EQ(image, fiber);
    for (CellId x = 0; static_cast<std::size_t>(x) < lower.complex().size(); ++x) {
      ASSERT_EQ(uc.simplex(lift[static_cast<std::size_t>(x)]), psi(lower.complex().simplex(x)));
      ASSERT_EQ(psi_inverse(uc.simplex(lift[static_cast<std::size_t>(x)])), lower.complex().simplex(x));
    }
    // faces correspond both ways
    std::map<CellId, CellId> back;
    for (std::size_t x = 0; x < lift.size(); ++x)
      back[lift[x]] = static_cast<CellId>(x);
    for (CellId y : fiber)
      for (const auto& inc : uc.cells().boundary(y)) {
        if (!back.contains(inc.face))
          continue;
        ASSERT_TRUE(lower.complex().cells().is_face(back.at(inc.face), back.at(y)));
      }
    for (CellId x = 0; static_cast<std::size_t>(x) < lower.complex().size(); ++x)
      for (const auto& inc : lower.complex().cells().boundary(x))
        ASSERT_TRUE(uc.cells().is_face(lift[static_cast<std::size_t>(inc.face)],
                                       lift[static_cast<std::size_t>(x)]));
  }
}

TEST(Psi, IntertwinesRestriction)
{
  for (int n = 4; n <= 5; ++n) {
    const NerveLevel lower(n - 1);
    const auto g = point_stabilizer_group(n);
    for (std::size_t e : fixing_n(g)) {
      const auto& sigma = g.element(e);
      const auto small = restrict_permutation(sigma);
      for (CellId x = 0; static_cast<std::size_t>(x) < lower.complex().size(); ++x) {
        const auto s = lower.complex().simplex(x);
        ASSERT_EQ(act(sigma, psi(s)), psi(act(small, s)));
      }
    }
  }
}

TEST(RestrictPermutation, Examples)
{
  EXPECT_EQ(restrict_permutation(parse_cycles("(2 3)", 5)), parse_cycles("(2 3)", 4));
  EXPECT_TRUE(restrict_permutation(Permutation::identity(5)).is_identity());
  EXPECT_EQ(restrict_permutation(parse_cycles("(2 3 4)", 5)), parse_cycles("(2 3 4)", 4));
  EXPECT_THROW(restrict_permutation(parse_cycles("(2 5)", 5)), InvalidArgument);
  EXPECT_THROW(restrict_permutation(parse_cycles("(1 2)", 5)), InvalidArgument);
}

TEST(FiberZero, OnlyAlphaStaysCritical)
{
  for (int n = 3; n <= 6; ++n) {
    const NerveLevel level(n);
    const auto m = fiber_zero_matching(level);
    EXPECT_TRUE(validate_matching(m).is_acyclic);
    EXPECT_TRUE(check_equivariance(m, level.action()));
    std::vector<CellId> critical_in_fiber;
    for (CellId c : m.critical_cells())
      if (phi(level, c) == 0)
        critical_in_fiber.push_back(c);
    EXPECT_EQ(critical_in_fiber, (std::vector<CellId>{level.vertex_cell(alpha_vertex(n))})) << n;
    for (const auto& [a, b] : m.pairs())
      ASSERT_TRUE(phi(level, a) == 0 && phi(level, b) == 0);
  }
  EXPECT_TRUE(fiber_zero_matching(NerveLevel(3)).pairs().empty());
}

TEST(FiberZero, SplitOffClosure)
{
  const NerveLevel level(4);
  const auto closure = split_off_closure(level);
  const auto& ground = level.complex().ground();
  for (std::size_t v = 0; v < ground.size(); ++v) {
    if (closure[v] == kOutsideDomain) {
      EXPECT_NE(phi(level, static_cast<CellId>(v)), 0);
      continue;
    }
    const auto& image = ground[static_cast<std::size_t>(closure[v])];
    EXPECT_EQ(image.block_of(1), 0);
    EXPECT_EQ(image.blocks().front(), std::vector<int>{1});
    EXPECT_TRUE(refines(image, ground[v]));
  }
  EXPECT_EQ(ground[static_cast<std::size_t>(closure[*level.complex().vertex_id(parse_partition("1,2|3,4"))])],
            parse_partition("1|2|3,4"));
}

TEST(MainMatching, CriticalCells)
{
  MainMatchingBuilder builder;
  EXPECT_TRUE(builder.main_matching(3).pairs().empty());
  EXPECT_EQ(builder.main_matching(3).critical_cells().size(), 3u);
  EXPECT_EQ(builder.main_matching(4).critical_counts(), (std::vector<std::size_t>{1, 6}));
  EXPECT_EQ(builder.main_matching(5).critical_counts(), (std::vector<std::size_t>{1, 0, 24}));
  for (int n = 3; n <= 6; ++n) {
    const auto cert = certify_main_matching(builder, n);
    EXPECT_TRUE(cert.acyclic) << n;
    EXPECT_TRUE(cert.equivariant) << n;
    EXPECT_TRUE(cert.critical_set_matches) << n;
    EXPECT_EQ(cert.top_chain_count, factorial(n - 1));
  }
}

TEST(MainMatching, AtomFiberContainsSPair)
{
  MainMatchingBuilder builder;
  const auto& m = builder.atom_fiber(5);
  const auto& level = builder.level(5);
  const CellId vn = level.vertex_cell(atom_vertex(5, 5));
  EXPECT_EQ(format(MainMatchingBuilder::s_vertex(5)), "1,5|2,3,4");
  EXPECT_EQ(level.complex().label(m.partner(vn)), "1,5|2|3|4 < 1,5|2,3,4");
  EXPECT_THROW(builder.atom_fiber(3), InvalidArgument);
}

TEST(MainMatching, OrbitOfTopChainsIsFreeAndTransitive)
{
  for (int n = 3; n <= 6; ++n) {
    const auto orbits = orbits_and_stabilizers(point_stabilizer_group(n), special_sets(n).top_chains);
    ASSERT_EQ(orbits.size(), 1u);
    EXPECT_EQ(orbits.front().stabilizer_order, 1u);
  }
}

TEST(MainMatching, UnexhaustiveBuildAgrees)
{
  MainMatchingBuilder fast(MainMatchingOptions{false}), full;
  for (int n = 4; n <= 5; ++n)
    EXPECT_EQ(fast.main_matching(n).pairs(), full.main_matching(n).pairs());
}

TEST(MainMatching, MorseHomologyMatchesSimplicial)
{
  MainMatchingBuilder builder;
  for (int n = 4; n <= 5; ++n) {
    const auto md = morse_data(builder.main_matching(n));
    EXPECT_EQ(homology_of(morse_chain_complex(md)), homology_of(builder.level(n).complex().cells()));
  }
}

TEST(QuotientMatching, CriticalCounts)
{
  MainMatchingBuilder builder;
  auto sizes = [](const QuotientMatching& q) {
    std::vector<std::size_t> out;
    for (const auto& level : q.critical_by_dim())
      out.push_back(level.size());
    return out;
  };
  EXPECT_EQ(sizes(quotient_critical_cells(builder, 4, trivial_group(4))), (std::vector<std::size_t>{1, 6}));
  EXPECT_EQ(sizes(quotient_critical_cells(builder, 4, point_stabilizer_group(4))),
            (std::vector<std::size_t>{1, 1}));
  EXPECT_EQ(sizes(quotient_critical_cells(builder, 5, generate_group(5, "(2 3 4),(3 4 5)"))),
            (std::vector<std::size_t>{1, 0, 2}));
  EXPECT_THROW(quotient_critical_cells(builder, 5, generate_group(5, "(1 2 3 4 5)")),
               PreconditionViolation);
  EXPECT_THROW(quotient_critical_cells(builder, 4, trivial_group(5)), InvalidArgument);
}

TEST(QuotientMatching, FullGroupLabels)
{
  MainMatchingBuilder builder;
  const auto q = quotient_critical_cells(builder, 4, point_stabilizer_group(4));
  const auto& level = builder.level(4);
  std::set<std::string> labels;
  for (CellId v = 0; v < q.quotient->cells.end_of_dim(0); ++v)
    labels.insert(number_partition_label(level, q, v));
  EXPECT_EQ(labels, (std::set<std::string>{"1⊕3", "1⊕2+1", "2⊕1+1", "2⊕2", "3⊕1"}));
  const auto critical = q.critical_by_dim();
  EXPECT_EQ(number_partition_label(level, q, critical[0][0]), "1⊕3");
  EXPECT_EQ(number_partition_label(parse_partition("1,2|3|4")), "2⊕1+1");
  EXPECT_EQ(number_partition_label(parse_partition("1,2|3,4")), "2⊕2");

  const auto partial = quotient_critical_cells(builder, 4, generate_group(4, "(2 3)"));
  EXPECT_THROW(number_partition_label(level, partial, 0), Unsupported);
}
