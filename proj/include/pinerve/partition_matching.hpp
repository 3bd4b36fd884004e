#ifndef PINERVE_PARTITION_MATCHING_HPP
#define PINERVE_PARTITION_MATCHING_HPP

// The S_1 x S_{n-1}-equivariant acyclic matching on the face poset of the
// nerve of the proper part of the partition lattice, whose critical cells are
// the vertex alpha_n = {1 | 2..n} and the (n-1)! top-dimensional chains
// running through the partitions in which every block avoiding 1 is a
// singleton.
//
// The matching is assembled level by level from n = 3 upward: cells are
// sorted into fibers by the unique atom v_k = {1,k | singletons} they
// contain (fiber "0" if none); fiber 0 is collapsed onto alpha_n by a
// closure-operator matching followed by a cone; the fiber of v_n is a copy of
// the level-(n-1) matching lifted by psi (put n next to 1, prepend v_n) plus
// the pair (v_n, v_n < {1,n | 2..n-1}); the remaining fibers are translates.

#include <algorithm>
#include <cstddef>
#include <map>
#include <memory>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "pinerve/complex.hpp"
#include "pinerve/error.hpp"
#include "pinerve/morse.hpp"
#include "pinerve/perm.hpp"
#include "pinerve/setpart.hpp"

namespace pinerve
{

/// {1 | 2, ..., n}
inline Partition alpha_vertex(int n)
{
  std::vector<int> rest(static_cast<std::size_t>(n - 1));
  std::iota(rest.begin(), rest.end(), 2);
  return Partition(n, {{1}, rest});
}

/// {1, k | singletons}
inline Partition atom_vertex(int n, int k)
{
  if (k < 2 || k > n)
    throw InvalidArgument("atom index out of range 2..n");
  std::vector<std::vector<int>> blocks{{1, k}};
  for (int x = 2; x <= n; ++x)
    if (x != k)
      blocks.push_back({x});
  return Partition(n, blocks);
}

/// Every block not containing 1 is a singleton.
inline bool in_star_set(const Partition& p)
{
  const int home = p.block_of(1);
  std::vector<int> sizes(static_cast<std::size_t>(p.block_count()), 0);
  for (int label : p.labels())
    ++sizes[static_cast<std::size_t>(label)];
  for (std::size_t b = 0; b < sizes.size(); ++b)
    if (static_cast<int>(b) != home && sizes[b] != 1)
      return false;
  return true;
}

struct SpecialSets
{
  int n = 0;
  std::vector<Partition> star;      // A
  std::vector<Simplex> top_chains;  // C_n
  Partition alpha;
  std::vector<Partition> atoms;     // v_2, ..., v_n
};

inline SpecialSets special_sets(int n)
{
  if (n < 3)
    throw InvalidArgument("special sets need n >= 3");
  SpecialSets s;
  s.n = n;
  for (auto& p : enumerate_proper(n))
    if (in_star_set(p))
      s.star.push_back(std::move(p));
  const Complex star_complex = build_order_complex(s.star);
  for (CellId c = star_complex.cells().first_of_dim(n - 3); c < star_complex.cells().end_of_dim(n - 3);
       ++c)
    s.top_chains.push_back(star_complex.simplex(c));
  s.alpha = alpha_vertex(n);
  for (int k = 2; k <= n; ++k)
    s.atoms.push_back(atom_vertex(n, k));
  return s;
}

/// Target poset {0} + {v_2..v_n}: element 0 is the bottom, element k-1
/// stands for v_k, and the atoms are pairwise incomparable.
inline FinitePoset fiber_target(int n)
{
  return FinitePoset::from_relation(static_cast<std::size_t>(n),
                                    [](std::size_t i, std::size_t j) { return i == 0 && j != 0; });
}

inline int fiber_target_action(const Permutation& g, int q)
{ return q == 0 ? 0 : g(q + 1) - 1; }

/// Adds n+1 to the block of 1.
inline Partition lift_partition(const Partition& p)
{
  auto labels = p.labels();
  labels.push_back(p.block_of(1));
  return Partition::from_labels(labels);
}

/// Simplex over [n-1] -> simplex over [n] in the fiber of v_n.
inline Simplex psi(const Simplex& s)
{
  if (s.vertices.empty())
    throw InvalidArgument("psi is defined on nonempty chains");
  const int n = s.vertices.front().size() + 1;
  Simplex out;
  out.vertices.push_back(atom_vertex(n, n));
  for (const auto& v : s.vertices)
    out.vertices.push_back(lift_partition(v));
  return out;
}

inline Simplex psi_inverse(const Simplex& s)
{
  if (s.vertices.size() < 2)
    throw InvalidArgument("psi inverse needs a chain v_n < ... of length at least 2");
  const int n = s.vertices.front().size();
  if (s.vertices.front() != atom_vertex(n, n))
    throw InvalidArgument("chain does not start at v_n");
  Simplex out;
  for (std::size_t i = 1; i < s.vertices.size(); ++i) {
    const auto& p = s.vertices[i];
    if (p.block_of(n) != p.block_of(1))
      throw InvalidArgument("chain vertex " + format(p) + " separates 1 and n");
    auto labels = p.labels();
    labels.pop_back();
    out.vertices.push_back(Partition::from_labels(labels));
  }
  return out;
}

/// sigma fixing 1 and n, restricted to [n-1].
inline Permutation restrict_permutation(const Permutation& sigma)
{
  const int n = sigma.size();
  if (n < 2 || !sigma.fixes(1) || !sigma.fixes(n))
    throw InvalidArgument("restriction needs a permutation fixing 1 and n");
  auto images = sigma.images();
  images.pop_back();
  return Permutation::from_images(images);
}

/// Label "v0⊕v1+...+vr" of a partition: size of the block of 1, then the
/// other block sizes in decreasing order.
inline std::string number_partition_label(const Partition& p)
{
  const auto blocks = p.blocks();
  std::size_t own = 0;
  std::vector<std::size_t> others;
  for (const auto& b : blocks) {
    if (b.front() == 1)
      own = b.size();
    else
      others.push_back(b.size());
  }
  std::sort(others.rbegin(), others.rend());
  std::string out = std::to_string(own) + "⊕";
  for (std::size_t i = 0; i < others.size(); ++i) {
    if (i)
      out += '+';
    out += std::to_string(others[i]);
  }
  return out;
}

/// Everything attached to one ground set size: the nerve, the group
/// S_1 x S_{n-1} acting on it, and the fiber map.
class NerveLevel
{
public:
  explicit NerveLevel(int n)
  : n_(n), complex_(partition_nerve(n)), group_(point_stabilizer_group(n)),
    action_(complex_, group_), target_(fiber_target(n))
  {
    fiber_.resize(complex_.size());
    atom_of_vertex_.assign(complex_.ground().size(), 0);
    for (int k = 2; k <= n; ++k)
      atom_of_vertex_[static_cast<std::size_t>(*complex_.vertex_id(atom_vertex(n, k)))] = k - 1;
    for (CellId c = 0; static_cast<std::size_t>(c) < complex_.size(); ++c)
      fiber_[static_cast<std::size_t>(c)] = compute_fiber(c);
  }

  NerveLevel(const NerveLevel&) = delete;
  NerveLevel& operator=(const NerveLevel&) = delete;

  int n() const
  { return n_; }

  const Complex& complex() const
  { return complex_; }

  const PermGroup& group() const
  { return group_; }

  const CellAction& action() const
  { return action_; }

  const FinitePoset& target() const
  { return target_; }

  /// 0 if the chain contains no atom v_k, otherwise k - 1.
  int fiber(CellId c) const
  { return fiber_[static_cast<std::size_t>(c)]; }

  const std::vector<int>& fibers() const
  { return fiber_; }

  CellId vertex_cell(const Partition& p) const
  { return static_cast<CellId>(*complex_.vertex_id(p)); }

private:
  int compute_fiber(CellId c) const
  {
    int found = 0;
    for (int v : complex_.vertices(c)) {
      const int atom = atom_of_vertex_[static_cast<std::size_t>(v)];
      if (atom == 0)
        continue;
      if (found != 0)
        throw PreconditionViolation("chain " + complex_.label(c) + " contains two atoms");
      found = atom;
    }
    return found;
  }

  int n_;
  Complex complex_;
  PermGroup group_;
  CellAction action_;
  FinitePoset target_;
  std::vector<int> atom_of_vertex_;
  std::vector<int> fiber_;
};

/// phi on a cell of level n: 0 or the index k-1 of its atom v_k.
inline int phi(const NerveLevel& level, CellId c)
{ return level.fiber(c); }

/// The split-off operator x -> x meet {1 | 2..n} on the vertices outside the
/// atoms; atoms are marked outside the domain.
inline std::vector<int> split_off_closure(const NerveLevel& level)
{
  const auto& ground = level.complex().ground();
  const Partition alpha = alpha_vertex(level.n());
  std::vector<int> closure(ground.size(), kOutsideDomain);
  for (std::size_t v = 0; v < ground.size(); ++v) {
    if (level.fiber(static_cast<CellId>(v)) != 0)
      continue;
    closure[v] = *level.complex().vertex_id(meet(ground[v], alpha));
  }
  return closure;
}

/// Matching on the atom-free chains with alpha_n as its only critical cell
/// among them: closure matching for the split-off operator, glued with the
/// cone on its image (apex alpha_n).
inline Matching fiber_zero_matching(const NerveLevel& level)
{
  const Complex& complex = level.complex();
  const auto closure = split_off_closure(level);
  const Matching collapse = closure_matching(complex, closure);

  std::vector<int> image;
  for (std::size_t v = 0; v < closure.size(); ++v)
    if (closure[v] == static_cast<int>(v))
      image.push_back(static_cast<int>(v));
  const int apex = level.vertex_cell(alpha_vertex(level.n()));
  const Matching cone = cone_matching(complex, image, apex);

  // 0: chains inside the image, 1: other atom-free chains, 2: the rest
  std::vector<bool> in_image(closure.size(), false);
  for (int v : image)
    in_image[static_cast<std::size_t>(v)] = true;
  std::vector<int> stage(complex.size(), 2);
  for (CellId c = 0; static_cast<std::size_t>(c) < complex.size(); ++c) {
    if (level.fiber(c) != 0)
      continue;
    const auto verts = complex.vertices(c);
    stage[static_cast<std::size_t>(c)] =
      std::all_of(verts.begin(), verts.end(), [&](int v) { return in_image[static_cast<std::size_t>(v)]; })
        ? 0 : 1;
  }
  const auto stages = FinitePoset::from_relation(3, [](std::size_t i, std::size_t j) { return i < j; });
  std::map<int, Matching> parts;
  parts.emplace(0, cone);
  parts.emplace(1, collapse);
  return patchwork(complex.cells(), stage, stages, parts);
}

struct MainMatchingOptions
{
  /// Exhaustive equivariance and transport checks during assembly. Turn off
  /// for count-only runs at n = 7.
  bool exhaustive = true;
};

/// Builds and memoizes the levels and their main matchings from n = 3 up.
class MainMatchingBuilder
{
public:
  explicit MainMatchingBuilder(MainMatchingOptions options = {})
  : options_(options)
  {}

  const NerveLevel& level(int n)
  {
    if (n < 3)
      throw InvalidArgument("partition nerve levels start at n = 3");
    auto& slot = levels_[n];
    if (!slot)
      slot = std::make_unique<NerveLevel>(n);
    return *slot;
  }

  const Matching& fiber_zero(int n)
  {
    auto& slot = fiber_zero_[n];
    if (!slot)
      slot = std::make_unique<Matching>(fiber_zero_matching(level(n)));
    return *slot;
  }

  /// The lift of the level-(n-1) matching through psi plus (v_n, s_n).
  const Matching& atom_fiber(int n)
  {
    auto& slot = atom_fiber_[n];
    if (slot)
      return *slot;
    if (n < 4)
      throw InvalidArgument("the atom fiber matching is assembled for n >= 4");
    const Matching& below = main_matching(n - 1);
    const NerveLevel& lower = level(n - 1);
    const NerveLevel& upper = level(n);
    const std::vector<CellId> lift = psi_cells(lower, upper);

    std::vector<CellPair> pairs;
    for (const auto& [a, b] : below.pairs())
      pairs.emplace_back(lift[static_cast<std::size_t>(a)], lift[static_cast<std::size_t>(b)]);
    const CellId vn = upper.vertex_cell(atom_vertex(n, n));
    std::vector<int> top_pair{static_cast<int>(vn),
                              static_cast<int>(upper.vertex_cell(s_vertex(n)))};
    pairs.emplace_back(vn, *upper.complex().find(top_pair));
    slot = std::make_unique<Matching>(upper.complex().cells(), std::move(pairs));
    return *slot;
  }

  const Matching& main_matching(int n)
  {
    for (int k = 3; k <= n; ++k)
      if (!main_.contains(k))
        build(k);
    return *main_.at(n);
  }

  /// psi on cell ids: level n-1 cell -> level n cell.
  static std::vector<CellId> psi_cells(const NerveLevel& lower, const NerveLevel& upper)
  {
    const Complex& lc = lower.complex();
    const Complex& uc = upper.complex();
    std::vector<int> lifted_vertex(lc.ground().size());
    for (std::size_t v = 0; v < lc.ground().size(); ++v)
      lifted_vertex[v] = *uc.vertex_id(lift_partition(lc.ground()[v]));
    const int vn = *uc.vertex_id(atom_vertex(upper.n(), upper.n()));
    std::vector<CellId> out(lc.size());
    std::vector<int> chain;
    for (CellId c = 0; static_cast<std::size_t>(c) < lc.size(); ++c) {
      chain.assign(1, vn);
      for (int v : lc.vertices(c))
        chain.push_back(lifted_vertex[static_cast<std::size_t>(v)]);
      out[static_cast<std::size_t>(c)] = *uc.find(chain);
    }
    return out;
  }

  /// {1, n | 2, ..., n-1}
  static Partition s_vertex(int n)
  {
    std::vector<int> rest;
    for (int x = 2; x < n; ++x)
      rest.push_back(x);
    return Partition(n, {{1, n}, rest});
  }

private:
  void build(int n)
  {
    const NerveLevel& lvl = level(n);
    if (n == 3) {
      main_[n] = std::make_unique<Matching>(lvl.complex().cells());
      return;
    }
    const Matching& zero = fiber_zero(n);
    const Matching& atom = atom_fiber(n);
    std::map<int, Matching> reps;
    reps.emplace(0, zero);
    reps.emplace(n - 1, atom);
    const auto& group = lvl.group();
    auto target_action = [&group](std::size_t e, int q) {
      return fiber_target_action(group.element(e), q);
    };
    main_[n] = std::make_unique<Matching>(equivariant_patchwork(
      lvl.complex().cells(), lvl.fibers(), lvl.target(), lvl.action(), target_action, {0, n - 1},
      reps, EquivariantPatchworkOptions{options_.exhaustive}));
  }

  MainMatchingOptions options_;
  std::map<int, std::unique_ptr<NerveLevel>> levels_;
  std::map<int, std::unique_ptr<Matching>> fiber_zero_;
  std::map<int, std::unique_ptr<Matching>> atom_fiber_;
  std::map<int, std::unique_ptr<Matching>> main_;
};

/// Cell ids of C_n inside the level-n nerve, ascending.
inline std::vector<CellId> top_chain_cells(const NerveLevel& level)
{
  std::vector<CellId> out;
  for (const auto& s : special_sets(level.n()).top_chains)
    out.push_back(*level.complex().find(s));
  std::sort(out.begin(), out.end());
  return out;
}

struct MainMatchingCertificate
{
  int n = 0;
  bool acyclic = false;
  bool equivariant = false;
  bool critical_set_matches = false;
  std::vector<std::size_t> critical_counts;
  std::size_t top_chain_count = 0;
};

inline MainMatchingCertificate certify_main_matching(MainMatchingBuilder& builder, int n,
                                                     bool check_equivariant = true)
{
  const NerveLevel& lvl = builder.level(n);
  const Matching& m = builder.main_matching(n);
  MainMatchingCertificate cert;
  cert.n = n;
  cert.acyclic = validate_matching(m).is_acyclic;
  cert.equivariant = check_equivariant && check_equivariance(m, lvl.action());
  auto expected = top_chain_cells(lvl);
  cert.top_chain_count = expected.size();
  expected.push_back(lvl.vertex_cell(alpha_vertex(n)));
  std::sort(expected.begin(), expected.end());
  cert.critical_set_matches = m.critical_cells() == expected;
  cert.critical_counts = m.critical_counts();
  return cert;
}

/// The quotient of the level-n nerve by G (inside S_1 x S_{n-1}) together
/// with the induced matching.
struct QuotientMatching
{
  int n = 0;
  std::unique_ptr<PermGroup> group;
  std::unique_ptr<QuotientComplex> quotient;
  std::unique_ptr<Matching> matching;

  std::vector<std::vector<CellId>> critical_by_dim() const
  {
    std::vector<std::vector<CellId>> out(
      static_cast<std::size_t>(std::max(quotient->cells.top_dimension() + 1, 0)));
    for (CellId c : matching->critical_cells())
      out[static_cast<std::size_t>(quotient->cells.dim(c))].push_back(c);
    return out;
  }
};

inline QuotientMatching quotient_critical_cells(MainMatchingBuilder& builder, int n,
                                                const PermGroup& group)
{
  if (group.degree() != n)
    throw InvalidArgument("group degree does not match n");
  if (!group.fixes_point(1))
    throw PreconditionViolation("the quotient matching needs a group fixing 1");
  const NerveLevel& lvl = builder.level(n);
  QuotientMatching out;
  out.n = n;
  out.group = std::make_unique<PermGroup>(group);
  const CellAction action(lvl.complex(), *out.group);
  out.quotient = std::make_unique<QuotientComplex>(quotient_complex(action));
  out.matching =
    std::make_unique<Matching>(quotient_matching(builder.main_matching(n), *out.quotient, action));
  return out;
}

/// Label of a vertex of the quotient by the full group S_1 x S_{n-1}.
inline std::string number_partition_label(const NerveLevel& level, const QuotientMatching& q,
                                          CellId orbit_vertex)
{
  const auto& g = *q.group;
  std::size_t full = 1;
  for (int k = 2; k < level.n(); ++k)
    full *= static_cast<std::size_t>(k);
  if (!g.fixes_point(1) || g.order() != full)
    throw Unsupported("number-partition labels need the quotient by the full stabilizer of 1");
  if (q.quotient->cells.dim(orbit_vertex) != 0)
    throw InvalidArgument("labels are defined for quotient vertices");
  const CellId rep = q.quotient->representative[static_cast<std::size_t>(orbit_vertex)];
  return number_partition_label(level.complex().ground()[static_cast<std::size_t>(rep)]);
}

} // namespace pinerve

#endif // PINERVE_PARTITION_MATCHING_HPP
