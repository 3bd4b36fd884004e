#ifndef PINERVE_MORSE_HPP
#define PINERVE_MORSE_HPP

// Acyclic matchings on face posets of cell complexes: validation,
// equivariance, patchwork composition (plain and equivariant), quotient
// matchings, cone and closure-operator matchings, and the Morse complex.

#include <algorithm>
#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "pinerve/complex.hpp"
#include "pinerve/error.hpp"
#include "pinerve/homology.hpp"
#include "pinerve/matrix.hpp"
#include "pinerve/perm.hpp"

namespace pinerve
{

using CellPair = std::pair<CellId, CellId>;

/// A set of pairs (a, b) of cells where a should be a codimension-one face
/// of b. Whether the pairs actually form a matching is recorded, not
/// enforced; see validate_matching. The complex must outlive the matching.
class Matching
{
public:
  explicit Matching(const CellComplex& complex)
  : complex_(&complex), partner_(complex.size(), kNoCell)
  {}

  Matching(const CellComplex& complex, std::vector<CellPair> pairs)
  : complex_(&complex), pairs_(std::move(pairs)), partner_(complex.size(), kNoCell)
  {
    std::sort(pairs_.begin(), pairs_.end());
    pairs_.erase(std::unique(pairs_.begin(), pairs_.end()), pairs_.end());
    for (const auto& [a, b] : pairs_) {
      if (!complex.contains(a) || !complex.contains(b))
        throw InvalidMatching("matching references dangling cell id " +
                              std::to_string(complex.contains(a) ? b : a));
      if (complex.dim(b) != complex.dim(a) + 1 || !complex.is_face(a, b)) {
        defect_ = "pair (" + std::to_string(a) + ", " + std::to_string(b) +
                  ") is not a codimension-one incidence";
        continue;
      }
      for (CellId c : {a, b}) {
        if (partner_[static_cast<std::size_t>(c)] != kNoCell) {
          defect_ = "cell " + std::to_string(c) + " appears in two pairs";
        }
      }
      if (partner_[static_cast<std::size_t>(a)] == kNoCell &&
          partner_[static_cast<std::size_t>(b)] == kNoCell) {
        partner_[static_cast<std::size_t>(a)] = b;
        partner_[static_cast<std::size_t>(b)] = a;
      }
    }
  }

  const CellComplex& complex() const
  { return *complex_; }

  const std::vector<CellPair>& pairs() const
  { return pairs_; }

  std::size_t size() const
  { return pairs_.size(); }

  bool is_matching() const
  { return defect_.empty(); }

  const std::string& defect() const
  { return defect_; }

  CellId partner(CellId c) const
  { return partner_[static_cast<std::size_t>(c)]; }

  bool is_critical(CellId c) const
  { return partner(c) == kNoCell; }

  /// Partner one dimension up, or kNoCell.
  CellId up_partner(CellId c) const
  {
    const CellId p = partner(c);
    return p != kNoCell && complex_->dim(p) > complex_->dim(c) ? p : kNoCell;
  }

  bool contains(CellId a, CellId b) const
  { return partner(a) == b && up_partner(a) == b; }

  std::vector<CellId> critical_cells() const
  {
    std::vector<CellId> out;
    for (CellId c = 0; static_cast<std::size_t>(c) < complex_->size(); ++c)
      if (is_critical(c))
        out.push_back(c);
    return out;
  }

  std::vector<std::size_t> critical_counts() const
  {
    std::vector<std::size_t> out(static_cast<std::size_t>(std::max(complex_->top_dimension() + 1, 0)), 0);
    for (CellId c : critical_cells())
      ++out[static_cast<std::size_t>(complex_->dim(c))];
    return out;
  }

  bool operator==(const Matching& other) const
  { return complex_ == other.complex_ && pairs_ == other.pairs_; }

private:
  const CellComplex* complex_;
  std::vector<CellPair> pairs_;
  std::vector<CellId> partner_;
  std::string defect_;
};

struct MatchingCertificate
{
  bool is_matching = false;
  bool is_acyclic = false;
  std::vector<CellId> witness_cycle;   // closed walk in the modified Hasse diagram
  std::string defect;
};

/// Decides whether the matching is acyclic: the Hasse diagram of the face
/// poset with edges b -> a for faces, reversed to a -> b on matched pairs,
/// must have no directed cycle. Cycles can only alternate between two
/// adjacent dimensions; a depth-first search finds one if it exists.
inline MatchingCertificate validate_matching(const Matching& m)
{
  MatchingCertificate cert;
  cert.is_matching = m.is_matching();
  cert.defect = m.defect();
  if (!cert.is_matching)
    return cert;

  const CellComplex& cx = m.complex();
  enum class Mark : unsigned char { white, grey, black };
  std::vector<Mark> mark(cx.size(), Mark::white);

  // successor k of x: k < |boundary| -> k-th face (unless matched with x),
  // k == |boundary| -> up partner.
  auto successor = [&](CellId x, std::size_t k) -> CellId {
    const auto& bd = cx.boundary(x);
    if (k < bd.size()) {
      const CellId face = bd[k].face;
      return m.partner(face) == x ? kNoCell : face;
    }
    return m.up_partner(x);
  };

  std::vector<std::pair<CellId, std::size_t>> stack;
  for (CellId root = 0; static_cast<std::size_t>(root) < cx.size(); ++root) {
    if (mark[static_cast<std::size_t>(root)] != Mark::white)
      continue;
    stack.emplace_back(root, 0);
    mark[static_cast<std::size_t>(root)] = Mark::grey;
    while (!stack.empty()) {
      auto& [x, k] = stack.back();
      if (k > cx.boundary(x).size()) {
        mark[static_cast<std::size_t>(x)] = Mark::black;
        stack.pop_back();
        continue;
      }
      const CellId y = successor(x, k++);
      if (y == kNoCell)
        continue;
      if (mark[static_cast<std::size_t>(y)] == Mark::grey) {
        auto it = std::find_if(stack.begin(), stack.end(),
                               [y](const auto& frame) { return frame.first == y; });
        for (; it != stack.end(); ++it)
          cert.witness_cycle.push_back(it->first);
        cert.witness_cycle.push_back(y);
        return cert;
      }
      if (mark[static_cast<std::size_t>(y)] == Mark::white) {
        mark[static_cast<std::size_t>(y)] = Mark::grey;
        stack.emplace_back(y, 0);
      }
    }
  }
  cert.is_acyclic = true;
  return cert;
}

/// (a, b) in M implies (g a, g b) in M for every g in the acting group.
inline bool check_equivariance(const Matching& m, const CellAction& action)
{
  if (&m.complex() != &action.complex().cells())
    throw InvalidArgument("matching and group action live on different complexes");
  for (std::size_t e = 0; e < action.group().order(); ++e)
    for (const auto& [a, b] : m.pairs())
      if (m.partner(action.act(e, a)) != action.act(e, b))
        return false;
  return true;
}

/// Restricted to a subset of group elements (e.g. a stabilizer).
inline bool check_equivariance(const Matching& m, const CellAction& action,
                               std::span<const std::size_t> elements)
{
  for (std::size_t e : elements)
    for (const auto& [a, b] : m.pairs())
      if (m.partner(action.act(e, a)) != action.act(e, b))
        return false;
  return true;
}

/// Union of matchings on the fibers of an order-preserving map from the face
/// poset to Q. Fiber matchings must stay inside their fiber and be acyclic;
/// the union is then acyclic as well (checked).
inline Matching patchwork(const CellComplex& complex, std::span<const int> fiber_of,
                          const FinitePoset& target, const std::map<int, Matching>& fiber_matchings)
{
  if (fiber_of.size() != complex.size())
    throw InvalidArgument("fiber map must assign a target element to every cell");
  for (int q : fiber_of)
    if (q < 0 || static_cast<std::size_t>(q) >= target.size())
      throw InvalidArgument("fiber map value outside the target poset");
  for (CellId b = 0; static_cast<std::size_t>(b) < complex.size(); ++b)
    for (const auto& inc : complex.boundary(b))
      if (!target.less_equal(static_cast<std::size_t>(fiber_of[static_cast<std::size_t>(inc.face)]),
                             static_cast<std::size_t>(fiber_of[static_cast<std::size_t>(b)])))
        throw InvalidArgument("fiber map is not order-preserving on the face " +
                              std::to_string(inc.face) + " of cell " + std::to_string(b));

  std::vector<CellPair> all;
  std::vector<bool> used(complex.size(), false);
  for (const auto& [q, fm] : fiber_matchings) {
    if (&fm.complex() != &complex)
      throw InvalidArgument("fiber matching lives on another complex");
    if (!validate_matching(fm).is_acyclic)
      throw PreconditionViolation("fiber matching over " + std::to_string(q) + " is not acyclic");
    for (const auto& [a, b] : fm.pairs()) {
      if (fiber_of[static_cast<std::size_t>(a)] != q || fiber_of[static_cast<std::size_t>(b)] != q)
        throw InvalidArgument("fiber matching over " + std::to_string(q) + " leaves its fiber");
      for (CellId c : {a, b}) {
        if (used[static_cast<std::size_t>(c)])
          throw InvalidArgument("fiber matchings overlap at cell " + std::to_string(c));
        used[static_cast<std::size_t>(c)] = true;
      }
      all.emplace_back(a, b);
    }
  }
  Matching result(complex, std::move(all));
  if (!validate_matching(result).is_acyclic)
    throw PreconditionViolation("patchwork union is not acyclic");
  return result;
}

struct EquivariantPatchworkOptions
{
  /// Run the exhaustive checks: the fiber map is a G-map, each
  /// representative matching is stabilizer-equivariant, and every group
  /// element carrying r to q transports the same matching.
  bool exhaustive = true;
};

/// Equivariant patchwork. `target_action(e, q)` is the image of target
/// element q under group element e. For every target element q = g r the
/// matching of r is transported to the fiber of q; the union is G-equivariant
/// and acyclic with critical set the union of the translates g C_r.
inline Matching equivariant_patchwork(const CellComplex& complex, std::span<const int> fiber_of,
                                      const FinitePoset& target, const CellAction& action,
                                      const std::function<int(std::size_t, int)>& target_action,
                                      const std::vector<int>& representatives,
                                      const std::map<int, Matching>& rep_matchings,
                                      EquivariantPatchworkOptions options = {})
{
  if (&complex != &action.complex().cells())
    throw InvalidArgument("group action lives on another complex");
  const std::size_t order = action.group().order();

  // representatives meet every orbit exactly once
  std::vector<int> rep_of(target.size(), -1);
  for (int r : representatives) {
    if (r < 0 || static_cast<std::size_t>(r) >= target.size())
      throw InvalidRepresentatives("representative outside the target poset");
    for (std::size_t e = 0; e < order; ++e) {
      const int q = target_action(e, r);
      if (rep_of[static_cast<std::size_t>(q)] != -1 && rep_of[static_cast<std::size_t>(q)] != r)
        throw InvalidRepresentatives("two representatives share an orbit");
      rep_of[static_cast<std::size_t>(q)] = r;
    }
  }
  for (std::size_t q = 0; q < target.size(); ++q)
    if (rep_of[q] == -1)
      throw InvalidRepresentatives("no representative for the orbit of target element " +
                                   std::to_string(q));

  if (options.exhaustive)
    for (std::size_t e = 0; e < order; ++e)
      for (CellId c = 0; static_cast<std::size_t>(c) < complex.size(); ++c)
        if (fiber_of[static_cast<std::size_t>(action.act(e, c))] !=
            target_action(e, fiber_of[static_cast<std::size_t>(c)]))
          throw PreconditionViolation("fiber map is not equivariant");

  std::map<int, Matching> fibers;
  std::set<CellId> expected_critical;
  for (int r : representatives) {
    auto found = rep_matchings.find(r);
    if (found == rep_matchings.end())
      throw InvalidArgument("missing matching for representative " + std::to_string(r));
    const Matching& mr = found->second;

    std::vector<std::size_t> stabilizer;
    for (std::size_t e = 0; e < order; ++e)
      if (target_action(e, r) == r)
        stabilizer.push_back(e);
    if (options.exhaustive && !check_equivariance(mr, action, stabilizer))
      throw PreconditionViolation("matching over representative " + std::to_string(r) +
                                  " is not equivariant under its stabilizer");

    std::vector<CellId> fiber_critical;
    for (CellId c = 0; static_cast<std::size_t>(c) < complex.size(); ++c)
      if (fiber_of[static_cast<std::size_t>(c)] == r && mr.is_critical(c))
        fiber_critical.push_back(c);

    std::map<int, std::vector<CellPair>> transported;
    for (std::size_t e = 0; e < order; ++e) {
      const int q = target_action(e, r);
      const bool first = !transported.contains(q);
      if (!first && !options.exhaustive)
        continue;
      std::vector<CellPair> pairs;
      pairs.reserve(mr.size());
      for (const auto& [a, b] : mr.pairs())
        pairs.emplace_back(action.act(e, a), action.act(e, b));
      std::sort(pairs.begin(), pairs.end());
      if (first)
        transported.emplace(q, std::move(pairs));
      else if (transported.at(q) != pairs)
        throw PreconditionViolation("transport to fiber " + std::to_string(q) +
                                    " depends on the chosen group element");
      for (CellId c : fiber_critical)
        expected_critical.insert(action.act(e, c));
    }
    for (auto& [q, pairs] : transported)
      fibers.emplace(q, Matching(complex, std::move(pairs)));
  }

  Matching result = patchwork(complex, fiber_of, target, fibers);
  const auto critical = result.critical_cells();
  if (!std::equal(critical.begin(), critical.end(), expected_critical.begin(),
                  expected_critical.end()))
    throw PreconditionViolation("critical set differs from the union of translated fiber critical sets");
  return result;
}

/// The induced matching {([a], [b])} on the quotient by H. M must be
/// H-equivariant.
inline Matching quotient_matching(const Matching& m, const QuotientComplex& quotient,
                                  const CellAction& action)
{
  if (&m.complex() != &action.complex().cells())
    throw InvalidArgument("matching and group action live on different complexes");
  if (quotient.orbit_of.size() != m.complex().size())
    throw InvalidArgument("quotient was built from another complex");
  if (!check_equivariance(m, action))
    throw PreconditionViolation("matching is not equivariant under the quotient group");
  std::vector<CellPair> pairs;
  for (const auto& [a, b] : m.pairs())
    pairs.emplace_back(quotient.orbit_of[static_cast<std::size_t>(a)],
                       quotient.orbit_of[static_cast<std::size_t>(b)]);
  Matching result(quotient.cells, std::move(pairs));
  if (!result.is_matching())
    throw PreconditionViolation("induced quotient pairs do not form a matching: " + result.defect());
  return result;
}

namespace detail
{

inline std::vector<bool> membership(const Complex& complex, std::span<const int> vertices)
{
  std::vector<bool> in(complex.ground().size(), false);
  for (int v : vertices) {
    if (v < 0 || static_cast<std::size_t>(v) >= in.size())
      throw InvalidArgument("vertex id out of range");
    in[static_cast<std::size_t>(v)] = true;
  }
  return in;
}

inline bool chain_inside(const Complex& complex, CellId c, const std::vector<bool>& in)
{
  for (int v : complex.vertices(c))
    if (!in[static_cast<std::size_t>(v)])
      return false;
  return true;
}

} // namespace detail

/// Cone matching on the chains of a subposet with maximum `apex`: sigma is
/// paired with sigma + {apex}. Only the vertex {apex} stays critical among
/// those chains.
inline Matching cone_matching(const Complex& complex, std::span<const int> subposet, int apex)
{
  const auto in = detail::membership(complex, subposet);
  if (apex < 0 || static_cast<std::size_t>(apex) >= in.size() || !in[static_cast<std::size_t>(apex)])
    throw InvalidArgument("cone apex is not in the subposet");
  for (int v : subposet)
    if (!complex.order().less_equal(static_cast<std::size_t>(v), static_cast<std::size_t>(apex)))
      throw InvalidArgument("cone apex is not the maximum of the subposet");

  std::vector<CellPair> pairs;
  std::vector<int> extended;
  for (CellId c = 0; static_cast<std::size_t>(c) < complex.size(); ++c) {
    if (!detail::chain_inside(complex, c, in))
      continue;
    const auto verts = complex.vertices(c);
    if (std::find(verts.begin(), verts.end(), apex) != verts.end())
      continue;
    extended.assign(verts.begin(), verts.end());
    extended.push_back(apex);
    pairs.emplace_back(c, *complex.find(extended));
  }
  return Matching(complex.cells(), std::move(pairs));
}

inline constexpr int kOutsideDomain = -1;

/// Matching induced by a descending closure operator d on a subposet (the
/// domain: vertices v with closure[v] != kOutsideDomain). For a chain sigma
/// in the domain not contained in Im(d), let x be its least element with
/// d(x) != x; sigma is paired with sigma symmetric-difference {d(x)}. Chains
/// inside Im(d) stay critical.
inline Matching closure_matching(const Complex& complex, std::span<const int> closure)
{
  const auto& order = complex.order();
  const std::size_t size = complex.ground().size();
  if (closure.size() != size)
    throw InvalidArgument("closure map must have one entry per ground element");

  auto in_domain = [&](int v) { return v >= 0 && static_cast<std::size_t>(v) < size &&
                                       closure[static_cast<std::size_t>(v)] != kOutsideDomain; };
  std::vector<int> domain;
  for (std::size_t v = 0; v < size; ++v) {
    if (closure[v] == kOutsideDomain)
      continue;
    if (!in_domain(closure[v]))
      throw InvalidArgument("closure image of vertex " + std::to_string(v) + " escapes the domain");
    domain.push_back(static_cast<int>(v));
  }
  for (int x : domain) {
    const auto dx = static_cast<std::size_t>(closure[static_cast<std::size_t>(x)]);
    if (!order.less_equal(dx, static_cast<std::size_t>(x)))
      throw InvalidArgument("closure operator is not descending at vertex " + std::to_string(x));
    if (closure[dx] != static_cast<int>(dx))
      throw InvalidArgument("closure operator is not idempotent at vertex " + std::to_string(x));
    for (int y : domain)
      if (order.less(static_cast<std::size_t>(x), static_cast<std::size_t>(y)) &&
          !order.less_equal(dx, static_cast<std::size_t>(closure[static_cast<std::size_t>(y)])))
        throw InvalidArgument("closure operator is not monotone on vertices " + std::to_string(x) +
                              " < " + std::to_string(y));
  }

  const auto in = detail::membership(complex, domain);
  std::vector<CellPair> pairs;
  std::vector<int> extended;
  for (CellId c = 0; static_cast<std::size_t>(c) < complex.size(); ++c) {
    if (!detail::chain_inside(complex, c, in))
      continue;
    const auto verts = complex.vertices(c);
    auto moved = std::find_if(verts.begin(), verts.end(), [&](int v) {
      return closure[static_cast<std::size_t>(v)] != v;
    });
    if (moved == verts.end())
      continue;
    const int target = closure[static_cast<std::size_t>(*moved)];
    if (std::find(verts.begin(), verts.end(), target) != verts.end())
      continue;   // the upper cell of a pair; emitted from its lower face
    extended.assign(verts.begin(), moved);
    extended.push_back(target);
    extended.insert(extended.end(), moved, verts.end());
    pairs.emplace_back(c, *complex.find(extended));
  }
  return Matching(complex.cells(), std::move(pairs));
}

/// Sparse integer chain (or cochain) on the cells of a complex.
using Chain = std::map<CellId, Integer>;

inline Chain chain_boundary(const CellComplex& cx, const Chain& x)
{
  Chain out;
  for (const auto& [cell, coefficient] : x)
    for (const auto& inc : cx.boundary(cell)) {
      if (inc.coefficient == 0)
        continue;
      auto& slot = out[inc.face];
      slot += coefficient * inc.coefficient;
      if (slot == 0)
        out.erase(inc.face);
    }
  return out;
}

struct MorseData
{
  const CellComplex* complex = nullptr;
  std::vector<CellId> partner;
  std::vector<std::vector<CellId>> critical;     // per dimension, ascending
  std::vector<IntMatrix> boundary;               // [d]: critical d-cells -> critical (d-1)-cells
  std::map<CellId, Chain> cycle_reps;            // gradient-flow image of each critical cell

  std::vector<std::size_t> critical_counts() const
  {
    std::vector<std::size_t> out;
    for (const auto& level : critical)
      out.push_back(level.size());
    return out;
  }
};

namespace detail
{

inline long long unit_incidence(const CellComplex& cx, CellId upper, CellId lower)
{
  const long long w = cx.incidence(upper, lower);
  if (w != 1 && w != -1)
    throw Unsupported("matched pair (" + std::to_string(lower) + ", " + std::to_string(upper) +
                      ") has non-unit incidence " + std::to_string(w));
  return w;
}

/// One step of the gradient flow Phi = 1 + dV + Vd on a homogeneous chain,
/// with V(a) = -[b:a] b for a matched up with b.
inline Chain flow_step(const CellComplex& cx, const std::vector<CellId>& partner, const Chain& x)
{
  auto up = [&](CellId c) {
    const CellId p = partner[static_cast<std::size_t>(c)];
    return p != kNoCell && cx.dim(p) > cx.dim(c) ? p : kNoCell;
  };
  Chain out = x;
  auto add = [&](CellId c, const Integer& v) {
    auto& slot = out[c];
    slot += v;
    if (slot == 0)
      out.erase(c);
  };
  Chain vx;
  for (const auto& [cell, coefficient] : x)
    if (CellId b = up(cell); b != kNoCell)
      vx[b] -= coefficient * unit_incidence(cx, b, cell);
  for (const auto& [cell, coefficient] : chain_boundary(cx, vx))
    add(cell, coefficient);
  for (const auto& [face, coefficient] : chain_boundary(cx, x))
    if (CellId b = up(face); b != kNoCell)
      add(b, -coefficient * unit_incidence(cx, b, face));
  return out;
}

inline Chain stable_flow(const CellComplex& cx, const std::vector<CellId>& partner, Chain x)
{
  for (std::size_t iteration = 0; iteration <= cx.size() + 1; ++iteration) {
    Chain next = flow_step(cx, partner, x);
    if (next == x)
      return x;
    x = std::move(next);
  }
  throw PreconditionViolation("gradient flow did not stabilize; matching is not acyclic");
}

} // namespace detail

/// Critical cells, Morse boundary (signed counts of gradient paths between
/// critical cells of adjacent dimensions) and flow-invariant representatives
/// of every critical cell unless `with_cycle_reps` is off.
inline MorseData morse_data(const Matching& m, bool with_cycle_reps = true)
{
  if (!validate_matching(m).is_acyclic)
    throw PreconditionViolation("Morse data requires an acyclic matching");
  const CellComplex& cx = m.complex();
  for (const auto& [a, b] : m.pairs())
    detail::unit_incidence(cx, b, a);
  MorseData md;
  md.complex = &cx;
  md.partner.resize(cx.size());
  for (CellId c = 0; static_cast<std::size_t>(c) < cx.size(); ++c)
    md.partner[static_cast<std::size_t>(c)] = m.partner(c);

  const int top = cx.top_dimension();
  md.critical.resize(static_cast<std::size_t>(std::max(top + 1, 0)));
  std::vector<std::size_t> critical_index(cx.size(), 0);
  for (CellId c = 0; static_cast<std::size_t>(c) < cx.size(); ++c)
    if (m.is_critical(c)) {
      auto& level = md.critical[static_cast<std::size_t>(cx.dim(c))];
      critical_index[static_cast<std::size_t>(c)] = level.size();
      level.push_back(c);
    }

  // flow[a] for a (d-1)-cell matched upward: its image, projected onto
  // critical (d-1)-cells, after cancelling it along the gradient.
  std::map<CellId, std::map<std::size_t, Integer>> flow;
  auto resolve = [&](CellId root) {
    std::vector<CellId> stack{root};
    while (!stack.empty()) {
      const CellId a = stack.back();
      if (flow.contains(a)) {
        stack.pop_back();
        continue;
      }
      const CellId b = m.up_partner(a);
      bool ready = true;
      for (const auto& inc : cx.boundary(b))
        if (inc.face != a && m.up_partner(inc.face) != kNoCell && !flow.contains(inc.face)) {
          stack.push_back(inc.face);
          ready = false;
        }
      if (!ready)
        continue;
      const long long w = detail::unit_incidence(cx, b, a);
      std::map<std::size_t, Integer> value;
      for (const auto& inc : cx.boundary(b)) {
        if (inc.face == a || inc.coefficient == 0)
          continue;
        const Integer scale = -Integer(inc.coefficient) * w;
        if (m.is_critical(inc.face)) {
          value[critical_index[static_cast<std::size_t>(inc.face)]] += scale;
        } else if (m.up_partner(inc.face) != kNoCell) {
          for (const auto& [k, v] : flow.at(inc.face))
            value[k] += scale * v;
        }
      }
      std::erase_if(value, [](const auto& kv) { return kv.second == 0; });
      flow.emplace(a, std::move(value));
      stack.pop_back();
    }
  };

  md.boundary.resize(md.critical.size());
  if (!md.critical.empty())
    md.boundary[0] = IntMatrix(0, md.critical[0].size());
  for (int d = 1; d <= top; ++d) {
    const auto& upper = md.critical[static_cast<std::size_t>(d)];
    IntMatrix bm(md.critical[static_cast<std::size_t>(d - 1)].size(), upper.size());
    for (std::size_t j = 0; j < upper.size(); ++j)
      for (const auto& inc : cx.boundary(upper[j])) {
        if (inc.coefficient == 0)
          continue;
        if (m.is_critical(inc.face)) {
          bm.add(critical_index[static_cast<std::size_t>(inc.face)], j, Integer(inc.coefficient));
        } else if (m.up_partner(inc.face) != kNoCell) {
          resolve(inc.face);
          for (const auto& [k, v] : flow.at(inc.face))
            bm.add(k, j, v * inc.coefficient);
        }
      }
    md.boundary[static_cast<std::size_t>(d)] = std::move(bm);
  }

  if (!with_cycle_reps)
    return md;
  for (const auto& level : md.critical)
    for (CellId c : level)
      md.cycle_reps.emplace(c, detail::stable_flow(cx, md.partner, Chain{{c, Integer(1)}}));
  return md;
}

/// The Morse complex as a chain complex on the critical cells.
inline ChainComplexData morse_chain_complex(const MorseData& md)
{
  ChainComplexData out;
  out.ranks = md.critical_counts();
  out.boundaries = md.boundary;
  return out;
}

/// Cocycle representatives in the top dimension d: for each critical d-cell
/// c, z_c(sigma) is the coefficient of c in the stabilized gradient flow of
/// sigma, i.e. the signed count of gradient paths from sigma to c.
inline std::vector<Chain> cohomology_representatives(const MorseData& md, int d)
{
  const CellComplex& cx = *md.complex;
  if (d != cx.top_dimension())
    throw Unsupported("cocycle representatives are only available in the top dimension");
  const auto& targets = md.critical[static_cast<std::size_t>(d)];
  std::vector<Chain> out(targets.size());
  for (CellId sigma = cx.first_of_dim(d); sigma < cx.end_of_dim(d); ++sigma) {
    const Chain image = detail::stable_flow(cx, md.partner, Chain{{sigma, Integer(1)}});
    for (std::size_t i = 0; i < targets.size(); ++i)
      if (auto it = image.find(targets[i]); it != image.end())
        out[i].emplace(sigma, it->second);
  }
  return out;
}

/// <z_i, reps_j>.
inline std::vector<std::vector<Integer>> pairing_matrix(const std::vector<Chain>& cochains,
                                                        const std::vector<Chain>& chains)
{
  std::vector<std::vector<Integer>> out(cochains.size(), std::vector<Integer>(chains.size(), 0));
  for (std::size_t i = 0; i < cochains.size(); ++i)
    for (std::size_t j = 0; j < chains.size(); ++j)
      for (const auto& [cell, v] : cochains[i])
        if (auto it = chains[j].find(cell); it != chains[j].end())
          out[i][j] += v * it->second;
  return out;
}

/// {"isMatching", "isAcyclic", "criticalCounts", "witnessCycle"?}
inline nlohmann::json to_json(const MatchingCertificate& cert, const Matching& m)
{
  nlohmann::json j{{"isMatching", cert.is_matching},
                   {"isAcyclic", cert.is_acyclic},
                   {"criticalCounts", m.critical_counts()}};
  if (!cert.witness_cycle.empty())
    j["witnessCycle"] = cert.witness_cycle;
  if (!cert.defect.empty())
    j["defect"] = cert.defect;
  return j;
}

/// One "SIMPLEX_A -> SIMPLEX_B" line per pair.
inline std::string dump_matching(const Matching& m, const Complex& complex)
{
  if (&m.complex() != &complex.cells())
    throw InvalidArgument("matching does not live on this complex");
  std::string out;
  for (const auto& [a, b] : m.pairs())
    out += complex.label(a) + " -> " + complex.label(b) + '\n';
  return out;
}

} // namespace pinerve

#endif // PINERVE_MORSE_HPP
