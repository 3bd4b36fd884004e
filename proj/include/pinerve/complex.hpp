#ifndef PINERVE_COMPLEX_HPP
#define PINERVE_COMPLEX_HPP

// Finite posets, abstract cell complexes, and the order complex (nerve) of a
// poset of partitions.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include <boost/dynamic_bitset.hpp>

#include "pinerve/error.hpp"
#include "pinerve/matrix.hpp"
#include "pinerve/setpart.hpp"

namespace pinerve
{

using CellId = int;
inline constexpr CellId kNoCell = -1;

/// A finite poset on {0,...,size-1} stored as a strict order relation.
class FinitePoset
{
public:
  FinitePoset() = default;

  explicit FinitePoset(std::size_t size)
  : above_(size, boost::dynamic_bitset<>(size))
  {}

  /// `less(i, j)` must be a strict partial order; this is checked.
  template<typename Less>
  static FinitePoset from_relation(std::size_t size, Less less)
  {
    FinitePoset p(size);
    for (std::size_t i = 0; i < size; ++i)
      for (std::size_t j = 0; j < size; ++j)
        if (less(i, j))
          p.above_[i].set(j);
    p.validate();
    return p;
  }

  std::size_t size() const
  { return above_.size(); }

  bool less(std::size_t i, std::size_t j) const
  { return above_[i].test(j); }

  bool less_equal(std::size_t i, std::size_t j) const
  { return i == j || less(i, j); }

  bool comparable(std::size_t i, std::size_t j) const
  { return less_equal(i, j) || less(j, i); }

  const boost::dynamic_bitset<>& above(std::size_t i) const
  { return above_[i]; }

  /// Throws InvalidPoset unless the relation is irreflexive, antisymmetric
  /// and transitive.
  void validate() const
  {
    for (std::size_t i = 0; i < size(); ++i) {
      if (less(i, i))
        throw InvalidPoset("order relation is not irreflexive at element " + std::to_string(i));
      for (auto j = above_[i].find_first(); j != boost::dynamic_bitset<>::npos;
           j = above_[i].find_next(j)) {
        if (less(j, i))
          throw InvalidPoset("order relation is not antisymmetric on elements " +
                             std::to_string(i) + ", " + std::to_string(j));
        if (!above_[j].is_subset_of(above_[i]))
          throw InvalidPoset("order relation is not transitive through element " +
                             std::to_string(j));
      }
    }
  }

  /// Covering pairs (i, j): i < j with nothing strictly between.
  std::vector<std::pair<std::size_t, std::size_t>> covers() const
  {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (std::size_t i = 0; i < size(); ++i)
      for (auto j = above_[i].find_first(); j != boost::dynamic_bitset<>::npos;
           j = above_[i].find_next(j)) {
        bool covered = true;
        for (auto k = above_[i].find_first(); k != boost::dynamic_bitset<>::npos;
             k = above_[i].find_next(k))
          if (above_[k].test(j)) {
            covered = false;
            break;
          }
        if (covered)
          out.emplace_back(i, j);
      }
    return out;
  }

private:
  std::vector<boost::dynamic_bitset<>> above_;
};

struct Incidence
{
  CellId face;
  long long coefficient;

  bool operator==(const Incidence&) const = default;
};

/// A finite cell complex given by per-cell dimension and boundary
/// incidences. Cells are numbered so that dimensions are nondecreasing;
/// each dimension occupies a contiguous id range.
///
/// An incidence may carry coefficient 0 (a face relation whose signed
/// contributions cancel, as happens in quotients); it still counts as a face
/// for matching purposes.
class CellComplex
{
public:
  CellId add_cell(int dim, std::vector<Incidence> boundary)
  {
    if (dim < 0)
      throw InvalidArgument("cell dimension must be nonnegative");
    if (!dims_.empty() && dim < dims_.back())
      throw InvalidArgument("cells must be added in nondecreasing dimension");
    const auto id = static_cast<CellId>(dims_.size());
    for (const auto& inc : boundary) {
      if (inc.face < 0 || inc.face >= id)
        throw InvalidArgument("boundary references unknown cell " + std::to_string(inc.face));
      if (dims_[static_cast<std::size_t>(inc.face)] != dim - 1)
        throw InvalidArgument("boundary face of wrong dimension");
    }
    std::sort(boundary.begin(), boundary.end(),
              [](const Incidence& a, const Incidence& b) { return a.face < b.face; });
    for (std::size_t i = 1; i < boundary.size(); ++i)
      if (boundary[i].face == boundary[i - 1].face)
        throw InvalidArgument("boundary lists a face twice; merge coefficients first");

    while (static_cast<int>(dim_start_.size()) <= dim)
      dim_start_.push_back(static_cast<CellId>(id));
    dims_.push_back(dim);
    for (const auto& inc : boundary)
      cofaces_[static_cast<std::size_t>(inc.face)].push_back(id);
    boundary_.push_back(std::move(boundary));
    cofaces_.emplace_back();
    return id;
  }

  std::size_t size() const
  { return dims_.size(); }

  int dim(CellId c) const
  { return dims_[static_cast<std::size_t>(c)]; }

  /// -1 for the empty complex.
  int top_dimension() const
  { return dims_.empty() ? -1 : dims_.back(); }

  CellId first_of_dim(int d) const
  {
    if (d < 0)
      return 0;
    if (d >= static_cast<int>(dim_start_.size()))
      return static_cast<CellId>(size());
    return dim_start_[static_cast<std::size_t>(d)];
  }

  CellId end_of_dim(int d) const
  { return first_of_dim(d + 1); }

  std::size_t count(int d) const
  { return static_cast<std::size_t>(end_of_dim(d) - first_of_dim(d)); }

  /// Position of a cell within its dimension.
  std::size_t local_index(CellId c) const
  { return static_cast<std::size_t>(c - first_of_dim(dim(c))); }

  const std::vector<Incidence>& boundary(CellId c) const
  { return boundary_[static_cast<std::size_t>(c)]; }

  const std::vector<CellId>& cofaces(CellId c) const
  { return cofaces_[static_cast<std::size_t>(c)]; }

  bool contains(CellId c) const
  { return c >= 0 && static_cast<std::size_t>(c) < size(); }

  /// Codimension-one face relation.
  bool is_face(CellId a, CellId b) const
  {
    const auto& bd = boundary(b);
    return std::any_of(bd.begin(), bd.end(), [a](const Incidence& i) { return i.face == a; });
  }

  long long incidence(CellId b, CellId a) const
  {
    for (const auto& i : boundary(b))
      if (i.face == a)
        return i.coefficient;
    return 0;
  }

  std::vector<std::size_t> f_vector() const
  {
    std::vector<std::size_t> out;
    for (int d = 0; d <= top_dimension(); ++d)
      out.push_back(count(d));
    return out;
  }

  long long euler_characteristic() const
  {
    long long chi = 0;
    for (int d = 0; d <= top_dimension(); ++d)
      chi += (d % 2 == 0 ? 1 : -1) * static_cast<long long>(count(d));
    return chi;
  }

  /// Matrix of the boundary map from d-cells to (d-1)-cells. `d` may be one
  /// above the top dimension, giving a matrix with no columns.
  IntMatrix boundary_matrix(int d) const
  {
    if (d < 1 || d > top_dimension() + 1)
      throw InvalidArgument("boundary dimension " + std::to_string(d) + " out of range 1.." +
                            std::to_string(top_dimension() + 1));
    IntMatrix m(count(d - 1), count(d));
    const CellId lo = first_of_dim(d - 1);
    for (CellId c = first_of_dim(d); c < end_of_dim(d); ++c)
      for (const auto& inc : boundary(c))
        m.add(static_cast<std::size_t>(inc.face - lo), static_cast<std::size_t>(c - first_of_dim(d)),
              Integer(inc.coefficient));
    return m;
  }

private:
  std::vector<int> dims_;
  std::vector<CellId> dim_start_;
  std::vector<std::vector<Incidence>> boundary_;
  std::vector<std::vector<CellId>> cofaces_;
};

/// A chain of partitions, bottom first.
struct Simplex
{
  std::vector<Partition> vertices;

  int dim() const
  { return static_cast<int>(vertices.size()) - 1; }

  bool operator==(const Simplex&) const = default;
  auto operator<=>(const Simplex&) const = default;
};

/// i-th entry: the simplex with vertex i removed, with sign (-1)^i.
inline std::vector<std::pair<Simplex, int>> faces(const Simplex& s)
{
  std::vector<std::pair<Simplex, int>> out;
  if (s.vertices.size() < 2)
    return out;
  for (std::size_t i = 0; i < s.vertices.size(); ++i) {
    Simplex f;
    for (std::size_t j = 0; j < s.vertices.size(); ++j)
      if (j != i)
        f.vertices.push_back(s.vertices[j]);
    out.emplace_back(std::move(f), i % 2 == 0 ? 1 : -1);
  }
  return out;
}

/// "1,5|2|3|4 < 1,2,5|3|4"
inline std::string format(const Simplex& s)
{
  std::string out;
  for (std::size_t i = 0; i < s.vertices.size(); ++i) {
    if (i)
      out += " < ";
    out += format(s.vertices[i]);
  }
  return out;
}

inline Simplex parse_simplex(std::string_view text)
{
  Simplex s;
  std::size_t start = 0;
  while (true) {
    const auto bar = text.find('<', start);
    const auto piece = text.substr(start, bar == std::string_view::npos ? bar : bar - start);
    try {
      s.vertices.push_back(parse_partition(piece));
    } catch (const ParseError& e) {
      throw ParseError(std::string("in simplex vertex: ") + e.what(), start + e.position);
    }
    if (bar == std::string_view::npos)
      break;
    start = bar + 1;
  }
  for (std::size_t i = 1; i < s.vertices.size(); ++i) {
    if (s.vertices[i].size() != s.vertices[0].size())
      throw ParseError("simplex vertices over different ground sets", 0);
    if (s.vertices[i] == s.vertices[i - 1] || !refines(s.vertices[i - 1], s.vertices[i]))
      throw ParseError("simplex vertices are not a strictly increasing chain", 0);
  }
  return s;
}

/// The order complex of a finite poset of partitions. Cells are the nonempty
/// chains, stored explicitly as vertex-id sequences (bottom first), grouped by
/// dimension and sorted lexicographically within a dimension. The 0-cell of
/// vertex v has id v.
class Complex
{
public:
  Complex(std::vector<Partition> ground, FinitePoset order)
  : ground_(std::move(ground)), order_(std::move(order))
  {
    if (ground_.size() != order_.size())
      throw InvalidArgument("poset order has wrong size");
    order_.validate();
    for (std::size_t i = 0; i < ground_.size(); ++i) {
      if (i && ground_[i].size() != ground_[0].size())
        throw InvalidArgument("ground poset mixes partitions of different sets");
      if (!vertex_index_.emplace(ground_[i], static_cast<int>(i)).second)
        throw InvalidArgument("ground poset lists " + format(ground_[i]) + " twice");
    }
    enumerate_chains();
  }

  /// Ground set size of the partitions (0 for an empty poset).
  int n() const
  { return ground_.empty() ? 0 : ground_.front().size(); }

  const std::vector<Partition>& ground() const
  { return ground_; }

  const FinitePoset& order() const
  { return order_; }

  std::optional<int> vertex_id(const Partition& p) const
  {
    auto it = vertex_index_.find(p);
    if (it == vertex_index_.end())
      return std::nullopt;
    return it->second;
  }

  const CellComplex& cells() const
  { return cells_; }

  std::size_t size() const
  { return cells_.size(); }

  int dim(CellId c) const
  { return cells_.dim(c); }

  int top_dimension() const
  { return cells_.top_dimension(); }

  std::span<const int> vertices(CellId c) const
  {
    const auto lo = offsets_[static_cast<std::size_t>(c)];
    const auto hi = offsets_[static_cast<std::size_t>(c) + 1];
    return std::span<const int>(vertex_data_).subspan(lo, hi - lo);
  }

  std::optional<CellId> find(std::span<const int> chain) const
  {
    if (chain.empty())
      return std::nullopt;
    const int d = static_cast<int>(chain.size()) - 1;
    CellId lo = cells_.first_of_dim(d);
    CellId hi = cells_.end_of_dim(d);
    while (lo < hi) {
      const CellId mid = lo + (hi - lo) / 2;
      const auto v = vertices(mid);
      if (std::lexicographical_compare(v.begin(), v.end(), chain.begin(), chain.end()))
        lo = mid + 1;
      else
        hi = mid;
    }
    if (lo < cells_.end_of_dim(d) && std::ranges::equal(vertices(lo), chain))
      return lo;
    return std::nullopt;
  }

  std::optional<CellId> find(const Simplex& s) const
  {
    std::vector<int> ids;
    for (const auto& v : s.vertices) {
      auto id = vertex_id(v);
      if (!id)
        return std::nullopt;
      ids.push_back(*id);
    }
    return find(ids);
  }

  Simplex simplex(CellId c) const
  {
    Simplex s;
    for (int v : vertices(c))
      s.vertices.push_back(ground_[static_cast<std::size_t>(v)]);
    return s;
  }

  std::string label(CellId c) const
  { return format(simplex(c)); }

  std::vector<std::size_t> f_vector() const
  { return cells_.f_vector(); }

  long long euler_characteristic() const
  { return cells_.euler_characteristic(); }

  IntMatrix boundary_matrix(int d) const
  { return cells_.boundary_matrix(d); }

private:
  void enumerate_chains()
  {
    std::vector<std::vector<std::vector<int>>> by_dim;
    std::vector<int> chain;
    auto extend = [&](auto&& self, int top) -> void {
      chain.push_back(top);
      const auto d = chain.size() - 1;
      if (by_dim.size() <= d)
        by_dim.resize(d + 1);
      by_dim[d].push_back(chain);
      const auto& up = order_.above(static_cast<std::size_t>(top));
      for (auto j = up.find_first(); j != boost::dynamic_bitset<>::npos; j = up.find_next(j))
        self(self, static_cast<int>(j));
      chain.pop_back();
    };
    for (std::size_t v = 0; v < ground_.size(); ++v)
      extend(extend, static_cast<int>(v));

    offsets_.push_back(0);
    for (auto& level : by_dim) {
      std::sort(level.begin(), level.end());
      for (const auto& c : level) {
        vertex_data_.insert(vertex_data_.end(), c.begin(), c.end());
        offsets_.push_back(vertex_data_.size());
      }
    }

    std::vector<int> face;
    for (CellId c = 0; static_cast<std::size_t>(c) + 1 < offsets_.size(); ++c) {
      const auto verts = vertices(c);
      std::vector<Incidence> bd;
      if (verts.size() > 1) {
        for (std::size_t i = 0; i < verts.size(); ++i) {
          face.clear();
          for (std::size_t j = 0; j < verts.size(); ++j)
            if (j != i)
              face.push_back(verts[j]);
          bd.push_back(Incidence{*find(face), i % 2 == 0 ? 1 : -1});
        }
      }
      cells_.add_cell(static_cast<int>(verts.size()) - 1, std::move(bd));
    }
  }

  std::vector<Partition> ground_;
  FinitePoset order_;
  std::unordered_map<Partition, int> vertex_index_;
  std::vector<int> vertex_data_;
  std::vector<std::size_t> offsets_;
  CellComplex cells_;
};

/// Order complex under the refinement order.
inline Complex build_order_complex(std::vector<Partition> elements)
{
  auto order = FinitePoset::from_relation(elements.size(), [&](std::size_t i, std::size_t j) {
    return i != j && refines(elements[i], elements[j]);
  });
  return Complex(std::move(elements), std::move(order));
}

/// Order complex under an arbitrary strict order given on element indices.
template<typename Less>
Complex build_order_complex(std::vector<Partition> elements, Less less)
{
  auto order = FinitePoset::from_relation(elements.size(), less);
  return Complex(std::move(elements), std::move(order));
}

/// The nerve of the proper part of the partition lattice of [n].
inline Complex partition_nerve(int n)
{ return build_order_complex(enumerate_proper(n)); }

} // namespace pinerve

#endif // PINERVE_COMPLEX_HPP
