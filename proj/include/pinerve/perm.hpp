#ifndef PINERVE_PERM_HPP
#define PINERVE_PERM_HPP

// Permutations of [n], finite permutation groups stored as full element
// lists, their actions on partitions, chains and order-complex cells, orbits,
// and quotient complexes.

#include <algorithm>
#include <cctype>
#include <compare>
#include <cstddef>
#include <deque>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "pinerve/complex.hpp"
#include "pinerve/error.hpp"
#include "pinerve/setpart.hpp"

namespace pinerve
{

class Permutation
{
public:
  Permutation() = default;

  static Permutation identity(int n)
  {
    Permutation p;
    p.images_.resize(static_cast<std::size_t>(n));
    std::iota(p.images_.begin(), p.images_.end(), 0);
    return p;
  }

  /// `images[i]` is the image of i+1 (1-based values).
  static Permutation from_images(const std::vector<int>& images)
  {
    Permutation p;
    std::vector<bool> hit(images.size(), false);
    for (int x : images) {
      if (x < 1 || x > static_cast<int>(images.size()) || hit[static_cast<std::size_t>(x - 1)])
        throw InvalidArgument("image list is not a permutation");
      hit[static_cast<std::size_t>(x - 1)] = true;
      p.images_.push_back(x - 1);
    }
    return p;
  }

  int size() const
  { return static_cast<int>(images_.size()); }

  /// Image of the 1-based point x.
  int operator()(int x) const
  { return images_[static_cast<std::size_t>(x - 1)] + 1; }

  std::vector<int> images() const
  {
    std::vector<int> out;
    for (int x : images_)
      out.push_back(x + 1);
    return out;
  }

  bool is_identity() const
  {
    for (std::size_t i = 0; i < images_.size(); ++i)
      if (images_[i] != static_cast<int>(i))
        return false;
    return true;
  }

  bool fixes(int x) const
  { return (*this)(x) == x; }

  Permutation inverse() const
  {
    Permutation p;
    p.images_.resize(images_.size());
    for (std::size_t i = 0; i < images_.size(); ++i)
      p.images_[static_cast<std::size_t>(images_[i])] = static_cast<int>(i);
    return p;
  }

  /// (g * h)(x) = g(h(x)).
  friend Permutation operator*(const Permutation& g, const Permutation& h)
  {
    if (g.size() != h.size())
      throw InvalidArgument("composing permutations of different degree");
    Permutation p;
    p.images_.resize(h.images_.size());
    for (std::size_t i = 0; i < h.images_.size(); ++i)
      p.images_[i] = g.images_[static_cast<std::size_t>(h.images_[i])];
    return p;
  }

  bool operator==(const Permutation&) const = default;
  auto operator<=>(const Permutation&) const = default;

  /// Disjoint cycle notation, e.g. "(2 3)(4 5)"; identity is "()".
  std::string to_string() const
  {
    std::string out;
    std::vector<bool> done(images_.size(), false);
    for (std::size_t i = 0; i < images_.size(); ++i) {
      if (done[i] || images_[i] == static_cast<int>(i))
        continue;
      out += '(';
      std::size_t j = i;
      bool first = true;
      while (!done[j]) {
        done[j] = true;
        if (!first)
          out += ' ';
        first = false;
        out += std::to_string(j + 1);
        j = static_cast<std::size_t>(images_[j]);
      }
      out += ')';
    }
    return out.empty() ? "()" : out;
  }

private:
  std::vector<int> images_;
};

/// Parses a product of cycles such as "(2 3)(4 5)" or "(1,2,3)" as a
/// permutation of [n]. The rightmost cycle acts first. Empty text is the
/// identity.
inline Permutation parse_cycles(std::string_view text, int n)
{
  Permutation result = Permutation::identity(n);
  std::size_t pos = 0;
  auto skip = [&] {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos])))
      ++pos;
  };
  std::vector<Permutation> cycles;
  skip();
  while (pos < text.size()) {
    if (text[pos] != '(')
      throw ParseError(std::string("expected '(' in cycle notation, found '") + text[pos] + "'",
                       pos);
    ++pos;
    std::vector<int> cycle;
    while (true) {
      skip();
      if (pos == text.size())
        throw ParseError("unterminated cycle", pos);
      if (text[pos] == ')') {
        ++pos;
        break;
      }
      if (text[pos] == ',') {
        ++pos;
        continue;
      }
      if (!std::isdigit(static_cast<unsigned char>(text[pos])))
        throw ParseError(std::string("unexpected character '") + text[pos] + "' in cycle", pos);
      const std::size_t start = pos;
      int value = 0;
      while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
        value = value * 10 + (text[pos] - '0');
        if (value > 1'000'000)
          throw ParseError("point too large", start);
        ++pos;
      }
      if (value < 1 || value > n)
        throw ParseError("point " + std::to_string(value) + " out of range 1.." + std::to_string(n),
                         start);
      if (std::find(cycle.begin(), cycle.end(), value) != cycle.end())
        throw ParseError("point " + std::to_string(value) + " repeated in a cycle", start);
      cycle.push_back(value);
    }
    std::vector<int> images(static_cast<std::size_t>(n));
    std::iota(images.begin(), images.end(), 1);
    for (std::size_t i = 0; i < cycle.size(); ++i)
      images[static_cast<std::size_t>(cycle[i] - 1)] = cycle[(i + 1) % cycle.size()];
    cycles.push_back(Permutation::from_images(images));
    skip();
  }
  for (const auto& c : cycles)
    result = result * c;
  return result;
}

/// Splits "(2 3),(2 3 4 5)" at top-level commas and parses each generator.
inline std::vector<Permutation> parse_generators(std::string_view text, int n)
{
  std::vector<Permutation> out;
  int depth = 0;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= text.size(); ++i) {
    if (i == text.size() || (text[i] == ',' && depth == 0)) {
      auto piece = text.substr(start, i - start);
      if (piece.find_first_not_of(" \t") != std::string_view::npos) {
        try {
          out.push_back(parse_cycles(piece, n));
        } catch (const ParseError& e) {
          throw ParseError(e.message, start + e.position);
        }
      }
      start = i + 1;
    } else if (text[i] == '(') {
      ++depth;
    } else if (text[i] == ')') {
      --depth;
    }
  }
  return out;
}

/// A finite group of permutations of [n], materialized as the sorted list of
/// all its elements (identity first).
class PermGroup
{
public:
  PermGroup() = default;

  PermGroup(int n, std::vector<Permutation> generators)
  : n_(n), generators_(std::move(generators))
  {
    if (n < 1)
      throw InvalidArgument("permutation degree must be positive");
    for (const auto& g : generators_)
      if (g.size() != n)
        throw InvalidArgument("generator " + g.to_string() + " is not a permutation of [" +
                              std::to_string(n) + "]");

    std::set<Permutation> seen{Permutation::identity(n)};
    std::deque<Permutation> queue{Permutation::identity(n)};
    while (!queue.empty()) {
      const Permutation x = queue.front();
      queue.pop_front();
      for (const auto& g : generators_) {
        Permutation y = g * x;
        if (seen.insert(y).second)
          queue.push_back(std::move(y));
      }
    }
    elements_.assign(seen.begin(), seen.end());
  }

  int degree() const
  { return n_; }

  std::size_t order() const
  { return elements_.size(); }

  const std::vector<Permutation>& generators() const
  { return generators_; }

  const std::vector<Permutation>& elements() const
  { return elements_; }

  const Permutation& element(std::size_t i) const
  { return elements_[i]; }

  std::optional<std::size_t> index_of(const Permutation& g) const
  {
    auto it = std::lower_bound(elements_.begin(), elements_.end(), g);
    if (it == elements_.end() || *it != g)
      return std::nullopt;
    return static_cast<std::size_t>(it - elements_.begin());
  }

  bool contains(const Permutation& g) const
  { return index_of(g).has_value(); }

  bool is_subgroup_of(const PermGroup& other) const
  {
    return n_ == other.n_ &&
           std::all_of(generators_.begin(), generators_.end(),
                       [&](const Permutation& g) { return other.contains(g); });
  }

  bool fixes_point(int x) const
  {
    return std::all_of(generators_.begin(), generators_.end(),
                       [x](const Permutation& g) { return g.fixes(x); });
  }

  /// Comma-separated generator list in cycle notation.
  std::string description() const
  {
    std::string out;
    for (std::size_t i = 0; i < generators_.size(); ++i) {
      if (i)
        out += ',';
      out += generators_[i].to_string();
    }
    return out;
  }

private:
  int n_ = 0;
  std::vector<Permutation> generators_;
  std::vector<Permutation> elements_;
};

inline PermGroup generate_group(int n, std::vector<Permutation> generators)
{ return PermGroup(n, std::move(generators)); }

inline PermGroup generate_group(int n, std::string_view generator_text)
{ return PermGroup(n, parse_generators(generator_text, n)); }

/// S_1 x S_{n-1}: all permutations of [n] fixing 1.
inline PermGroup point_stabilizer_group(int n)
{
  if (n < 3)
    throw InvalidArgument("point stabilizer group needs n >= 3");
  std::vector<int> long_cycle(static_cast<std::size_t>(n));
  std::iota(long_cycle.begin(), long_cycle.end(), 1);
  for (int x = 2; x <= n; ++x)
    long_cycle[static_cast<std::size_t>(x - 1)] = x == n ? 2 : x + 1;
  std::vector<int> swap(static_cast<std::size_t>(n));
  std::iota(swap.begin(), swap.end(), 1);
  std::swap(swap[1], swap[2]);
  return PermGroup(n, {Permutation::from_images(swap), Permutation::from_images(long_cycle)});
}

inline PermGroup symmetric_group(int n)
{
  if (n < 2)
    return PermGroup(n, {});
  std::vector<int> long_cycle(static_cast<std::size_t>(n));
  for (int x = 1; x <= n; ++x)
    long_cycle[static_cast<std::size_t>(x - 1)] = x == n ? 1 : x + 1;
  std::vector<int> swap(static_cast<std::size_t>(n));
  std::iota(swap.begin(), swap.end(), 1);
  std::swap(swap[0], swap[1]);
  return PermGroup(n, {Permutation::from_images(swap), Permutation::from_images(long_cycle)});
}

inline PermGroup trivial_group(int n)
{ return PermGroup(n, {}); }

inline Partition act(const Permutation& g, const Partition& p)
{
  if (g.size() != p.size())
    throw InvalidArgument("permutation and partition have different degree");
  std::vector<int> labels(static_cast<std::size_t>(p.size()));
  for (int x = 1; x <= p.size(); ++x)
    labels[static_cast<std::size_t>(g(x) - 1)] = p.block_of(x);
  return Partition::from_labels(labels);
}

/// Vertexwise; the result is again a chain in the same order because the
/// action is by poset automorphisms.
inline Simplex act(const Permutation& g, const Simplex& s)
{
  Simplex out;
  for (const auto& v : s.vertices)
    out.vertices.push_back(act(g, v));
  return out;
}

struct Orbit
{
  std::size_t representative;          // index of the smallest member
  std::vector<std::size_t> members;    // indices into the item list, ascending
  std::size_t stabilizer_order;
};

/// Orbits of `items` under G. Every image of an item must itself be an item.
template<typename T>
std::vector<Orbit> orbits_and_stabilizers(const PermGroup& group, const std::vector<T>& items)
{
  std::map<T, std::size_t> index;
  for (std::size_t i = 0; i < items.size(); ++i)
    index.emplace(items[i], i);

  std::vector<bool> assigned(items.size(), false);
  std::vector<Orbit> orbits;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (assigned[i])
      continue;
    Orbit orbit{i, {}, 0};
    std::set<std::size_t> members;
    for (const auto& g : group.elements()) {
      const T image = act(g, items[i]);
      auto it = index.find(image);
      if (it == index.end())
        throw InvalidArgument("item set is not closed under the group action");
      members.insert(it->second);
      if (image == items[i])
        ++orbit.stabilizer_order;
    }
    orbit.members.assign(members.begin(), members.end());
    for (std::size_t m : orbit.members) {
      assigned[m] = true;
      if (items[m] < items[orbit.representative])
        orbit.representative = m;
    }
    orbits.push_back(std::move(orbit));
  }
  return orbits;
}

/// The action of a permutation group on the cells of an order complex of
/// partitions. Vertex images are tabulated per group element; cell images
/// are looked up on demand. Both referenced objects must outlive this one.
class CellAction
{
public:
  CellAction(const Complex& complex, const PermGroup& group)
  : complex_(&complex), group_(&group)
  {
    if (group.degree() != complex.n())
      throw InvalidArgument("group degree " + std::to_string(group.degree()) +
                            " does not match complex ground set size " +
                            std::to_string(complex.n()));
    const auto& ground = complex.ground();
    vertex_images_.resize(group.order() * ground.size());
    for (std::size_t e = 0; e < group.order(); ++e)
      for (std::size_t v = 0; v < ground.size(); ++v) {
        auto image = complex.vertex_id(pinerve::act(group.element(e), ground[v]));
        if (!image)
          throw InvalidArgument("group does not preserve the ground poset");
        vertex_images_[e * ground.size() + v] = *image;
      }
  }

  const Complex& complex() const
  { return *complex_; }

  const PermGroup& group() const
  { return *group_; }

  int act_vertex(std::size_t element, int vertex) const
  { return vertex_images_[element * complex_->ground().size() + static_cast<std::size_t>(vertex)]; }

  CellId act(std::size_t element, CellId cell) const
  {
    const auto verts = complex_->vertices(cell);
    int buffer[32];
    if (verts.size() > std::size(buffer))
      throw Unsupported("chain too long for the cell action buffer");
    for (std::size_t i = 0; i < verts.size(); ++i)
      buffer[i] = act_vertex(element, verts[i]);
    auto image = complex_->find(std::span<const int>(buffer, verts.size()));
    if (!image)
      throw InvalidArgument("group element does not act by poset automorphisms");
    return *image;
  }

  /// Elements g with g(cell) == cell.
  std::vector<std::size_t> stabilizer(CellId cell) const
  {
    std::vector<std::size_t> out;
    for (std::size_t e = 0; e < group_->order(); ++e)
      if (act(e, cell) == cell)
        out.push_back(e);
    return out;
  }

private:
  const Complex* complex_;
  const PermGroup* group_;
  std::vector<int> vertex_images_;
};

/// Delta/H: one cell per orbit of cells, ids ordered by the smallest member.
struct QuotientComplex
{
  CellComplex cells;
  std::vector<CellId> orbit_of;          // original cell -> orbit cell
  std::vector<CellId> representative;    // orbit cell -> smallest original cell
  std::vector<std::size_t> orbit_size;
  std::size_t group_order = 0;
};

inline QuotientComplex quotient_complex(const CellAction& action)
{
  const Complex& complex = action.complex();
  const std::size_t order = action.group().order();
  QuotientComplex q;
  q.group_order = order;
  q.orbit_of.assign(complex.size(), kNoCell);

  for (CellId c = 0; static_cast<std::size_t>(c) < complex.size(); ++c) {
    if (q.orbit_of[static_cast<std::size_t>(c)] != kNoCell)
      continue;
    const auto orbit_id = static_cast<CellId>(q.representative.size());
    std::size_t stabilizer = 0;
    std::size_t members = 0;
    for (std::size_t e = 0; e < order; ++e) {
      const CellId image = action.act(e, c);
      if (image == c) {
        ++stabilizer;
        for (int v : complex.vertices(c))
          if (action.act_vertex(e, v) != v)
            throw PreconditionViolation("setwise stabilizer of a chain does not fix it pointwise");
      }
      auto& slot = q.orbit_of[static_cast<std::size_t>(image)];
      if (slot == kNoCell) {
        slot = orbit_id;
        ++members;
      }
    }
    if (members * stabilizer != order)
      throw PreconditionViolation("orbit-stabilizer count mismatch");
    q.representative.push_back(c);
    q.orbit_size.push_back(members);
  }

  for (std::size_t o = 0; o < q.representative.size(); ++o) {
    const CellId rep = q.representative[o];
    std::map<CellId, long long> acc;
    for (const auto& inc : complex.cells().boundary(rep))
      acc[q.orbit_of[static_cast<std::size_t>(inc.face)]] += inc.coefficient;
    std::vector<Incidence> bd;
    for (const auto& [face, coefficient] : acc)
      bd.push_back(Incidence{face, coefficient});
    q.cells.add_cell(complex.dim(rep), std::move(bd));
  }
  return q;
}

inline QuotientComplex quotient_complex(const Complex& complex, const PermGroup& group)
{ return quotient_complex(CellAction(complex, group)); }

} // namespace pinerve

#endif // PINERVE_PERM_HPP
