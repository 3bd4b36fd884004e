#ifndef PINERVE_HOMOLOGY_HPP
#define PINERVE_HOMOLOGY_HPP

// Integral homology of finite chain complexes via Smith normal form.

#include <algorithm>
#include <cstddef>
#include <limits>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "pinerve/complex.hpp"
#include "pinerve/error.hpp"
#include "pinerve/matrix.hpp"

namespace pinerve
{

namespace detail
{

/// Diagonalizes a dense matrix by unimodular row and column operations,
/// pivoting on the entry of least absolute value. Returns the nonzero
/// diagonal entries (absolute values), not yet normalized to a divisibility
/// chain.
inline std::vector<Integer> diagonalize(std::vector<std::vector<Integer>> a)
{
  std::vector<Integer> diagonal;
  const std::size_t rows = a.size();
  const std::size_t cols = rows ? a[0].size() : 0;

  for (std::size_t t = 0; t < std::min(rows, cols); ++t) {
    while (true) {
      // smallest nonzero entry of the trailing block
      std::size_t pr = rows, pc = cols;
      Integer best;
      for (std::size_t r = t; r < rows; ++r)
        for (std::size_t c = t; c < cols; ++c)
          if (a[r][c] != 0 && (pr == rows || abs(a[r][c]) < best)) {
            best = abs(a[r][c]);
            pr = r;
            pc = c;
          }
      if (pr == rows)
        return diagonal;
      std::swap(a[t], a[pr]);
      for (std::size_t r = 0; r < rows; ++r)
        std::swap(a[r][t], a[r][pc]);

      bool clean = true;
      const Integer pivot = a[t][t];
      for (std::size_t r = t + 1; r < rows; ++r) {
        if (a[r][t] == 0)
          continue;
        const Integer q = a[r][t] / pivot;
        if (q != 0)
          for (std::size_t c = t; c < cols; ++c)
            a[r][c] -= q * a[t][c];
        if (a[r][t] != 0)
          clean = false;
      }
      for (std::size_t c = t + 1; c < cols; ++c) {
        if (a[t][c] == 0)
          continue;
        const Integer q = a[t][c] / pivot;
        if (q != 0)
          for (std::size_t r = t; r < rows; ++r)
            a[r][c] -= q * a[r][t];
        if (a[t][c] != 0)
          clean = false;
      }
      if (clean) {
        diagonal.push_back(abs(a[t][t]));
        break;
      }
    }
  }
  return diagonal;
}

/// Turns the diagonal of a diagonal matrix into the invariant factors
/// d_1 | d_2 | ... of the same matrix.
inline std::vector<Integer> normalize_diagonal(std::vector<Integer> diag)
{
  for (std::size_t i = 0; i < diag.size(); ++i)
    for (std::size_t j = i + 1; j < diag.size(); ++j) {
      if (diag[j] % diag[i] == 0)
        continue;
      const Integer g = boost::multiprecision::gcd(diag[i], diag[j]);
      const Integer l = diag[i] / g * diag[j];
      diag[i] = g;
      diag[j] = l;
    }
  std::sort(diag.begin(), diag.end());
  return diag;
}

} // namespace detail

/// Invariant factors d_1 | d_2 | ... | d_r (r = rank) of an integer matrix.
///
/// Sparse elimination on unit pivots first (Markowitz-style choice of the
/// sparsest column), then dense Smith reduction of whatever is left.
inline std::vector<Integer> smith_normal_form(const IntMatrix& m)
{
  // row-major working copy
  std::vector<std::map<std::size_t, Integer>> rows(m.rows());
  std::vector<std::set<std::size_t>> col_rows(m.cols());
  for (std::size_t c = 0; c < m.cols(); ++c)
    for (const auto& [r, v] : m.column(c)) {
      rows[r].emplace(c, v);
      col_rows[c].insert(r);
    }
  std::vector<bool> row_alive(m.rows(), true), col_alive(m.cols(), true);
  std::size_t unit_pivots = 0;

  bool progress = true;
  while (progress) {
    progress = false;
    std::vector<std::size_t> order;
    for (std::size_t c = 0; c < m.cols(); ++c)
      if (col_alive[c] && !col_rows[c].empty())
        order.push_back(c);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return col_rows[a].size() < col_rows[b].size();
    });
    for (std::size_t c : order) {
      if (!col_alive[c] || col_rows[c].empty())
        continue;
      std::size_t pivot_row = m.rows();
      for (std::size_t r : col_rows[c]) {
        const Integer& v = rows[r].at(c);
        if ((v == 1 || v == -1) && (pivot_row == m.rows() || rows[r].size() < rows[pivot_row].size()))
          pivot_row = r;
      }
      if (pivot_row == m.rows())
        continue;

      const Integer unit = rows[pivot_row].at(c);
      const auto pivot_entries = rows[pivot_row];
      const std::vector<std::size_t> targets(col_rows[c].begin(), col_rows[c].end());
      for (std::size_t r : targets) {
        if (r == pivot_row)
          continue;
        const Integer factor = rows[r].at(c) * unit;
        for (const auto& [pc, pv] : pivot_entries) {
          auto [it, inserted] = rows[r].try_emplace(pc, 0);
          it->second -= factor * pv;
          if (it->second == 0) {
            rows[r].erase(it);
            col_rows[pc].erase(r);
          } else if (inserted) {
            col_rows[pc].insert(r);
          }
        }
      }
      for (const auto& [pc, pv] : pivot_entries)
        col_rows[pc].erase(pivot_row);
      rows[pivot_row].clear();
      row_alive[pivot_row] = false;
      col_alive[c] = false;
      ++unit_pivots;
      progress = true;
    }
  }

  std::vector<std::size_t> rest_rows, rest_cols;
  for (std::size_t r = 0; r < m.rows(); ++r)
    if (row_alive[r] && !rows[r].empty())
      rest_rows.push_back(r);
  for (std::size_t c = 0; c < m.cols(); ++c)
    if (col_alive[c] && !col_rows[c].empty())
      rest_cols.push_back(c);

  std::vector<Integer> factors(unit_pivots, Integer(1));
  if (!rest_rows.empty()) {
    std::map<std::size_t, std::size_t> col_pos;
    for (std::size_t i = 0; i < rest_cols.size(); ++i)
      col_pos[rest_cols[i]] = i;
    std::vector<std::vector<Integer>> dense(rest_rows.size(),
                                            std::vector<Integer>(rest_cols.size(), 0));
    for (std::size_t i = 0; i < rest_rows.size(); ++i)
      for (const auto& [c, v] : rows[rest_rows[i]])
        dense[i][col_pos.at(c)] = v;
    for (auto& d : detail::normalize_diagonal(detail::diagonalize(std::move(dense))))
      factors.push_back(std::move(d));
  }
  return detail::normalize_diagonal(std::move(factors));
}

inline std::vector<Integer> smith_normal_form(const std::vector<std::vector<long long>>& dense)
{ return smith_normal_form(IntMatrix::from_dense(dense)); }

/// A chain complex of free abelian groups: rank of C_d for d = 0..top, and
/// boundaries[d] : C_d -> C_{d-1} for d >= 1 (boundaries[0] is unused).
struct ChainComplexData
{
  std::vector<std::size_t> ranks;
  std::vector<IntMatrix> boundaries;
};

inline ChainComplexData chain_complex(const CellComplex& cells)
{
  ChainComplexData out;
  out.ranks = cells.f_vector();
  out.boundaries.resize(out.ranks.size());
  if (!out.ranks.empty())
    out.boundaries[0] = IntMatrix(0, out.ranks[0]);
  for (int d = 1; d < static_cast<int>(out.ranks.size()); ++d)
    out.boundaries[static_cast<std::size_t>(d)] = cells.boundary_matrix(d);
  return out;
}

struct HomologyGroup
{
  int dim;
  std::size_t betti;
  std::vector<Integer> torsion;   // invariant factors > 1

  bool operator==(const HomologyGroup&) const = default;
};

struct HomologyResult
{
  bool reduced = false;
  std::vector<HomologyGroup> groups;

  const HomologyGroup* find(int dim) const
  {
    for (const auto& g : groups)
      if (g.dim == dim)
        return &g;
    return nullptr;
  }

  std::size_t betti(int dim) const
  {
    const auto* g = find(dim);
    return g ? g->betti : 0;
  }

  std::vector<Integer> torsion(int dim) const
  {
    const auto* g = find(dim);
    return g ? g->torsion : std::vector<Integer>{};
  }

  bool operator==(const HomologyResult&) const = default;
};

/// Throws InvalidComplex unless consecutive boundaries compose to zero.
inline void check_boundary_squared(const ChainComplexData& cc)
{
  for (std::size_t d = 2; d < cc.boundaries.size(); ++d)
    if (!(cc.boundaries[d - 1] * cc.boundaries[d]).is_zero())
      throw InvalidComplex("boundary of boundary is nonzero in dimension " + std::to_string(d));
}

/// Homology in dimensions 0..min(top, max_dim). The reduced variant augments
/// C_0 -> Z with every 0-cell mapping to 1.
inline HomologyResult homology_of(const ChainComplexData& cc, bool reduced = true,
                                  int max_dim = -1)
{
  if (cc.boundaries.size() != cc.ranks.size())
    throw InvalidArgument("chain complex needs one boundary slot per dimension");
  for (std::size_t d = 1; d < cc.boundaries.size(); ++d)
    if (cc.boundaries[d].rows() != cc.ranks[d - 1] || cc.boundaries[d].cols() != cc.ranks[d])
      throw InvalidArgument("boundary matrix in dimension " + std::to_string(d) +
                            " has the wrong shape");
  check_boundary_squared(cc);

  const int top = static_cast<int>(cc.ranks.size()) - 1;
  const int last = max_dim < 0 ? top : std::min(top, max_dim);

  // factors[d] = invariant factors of the map out of C_d
  std::vector<std::vector<Integer>> factors(cc.ranks.size());
  for (int d = 0; d <= std::min(top, last + 1); ++d) {
    if (d == 0) {
      if (reduced && cc.ranks[0] > 0) {
        IntMatrix aug(1, cc.ranks[0]);
        for (std::size_t c = 0; c < cc.ranks[0]; ++c)
          aug.add(0, c, 1);
        factors[0] = smith_normal_form(aug);
      }
      continue;
    }
    factors[static_cast<std::size_t>(d)] = smith_normal_form(cc.boundaries[static_cast<std::size_t>(d)]);
  }

  HomologyResult result;
  result.reduced = reduced;
  for (int d = 0; d <= last; ++d) {
    const std::size_t out_rank = factors[static_cast<std::size_t>(d)].size();
    const std::size_t in_rank = d + 1 <= top ? factors[static_cast<std::size_t>(d + 1)].size() : 0;
    HomologyGroup g{d, cc.ranks[static_cast<std::size_t>(d)] - out_rank - in_rank, {}};
    if (d + 1 <= top)
      for (const auto& f : factors[static_cast<std::size_t>(d + 1)])
        if (f > 1)
          g.torsion.push_back(f);
    result.groups.push_back(std::move(g));
  }
  return result;
}

inline HomologyResult homology_of(const CellComplex& cells, bool reduced = true, int max_dim = -1)
{ return homology_of(chain_complex(cells), reduced, max_dim); }

/// True iff the (reduced) homology is Z^count in `dim` and zero elsewhere,
/// with no torsion anywhere.
inline bool verify_wedge(const HomologyResult& h, int dim, std::size_t count)
{
  bool seen_dim = count == 0;
  for (const auto& g : h.groups) {
    if (!g.torsion.empty())
      return false;
    if (g.dim == dim) {
      if (g.betti != count)
        return false;
      seen_dim = true;
    } else if (g.betti != 0) {
      return false;
    }
  }
  return seen_dim;
}

/// Integer determinant (Bareiss fraction-free elimination).
inline Integer determinant(std::vector<std::vector<Integer>> a)
{
  const std::size_t n = a.size();
  for (const auto& row : a)
    if (row.size() != n)
      throw InvalidArgument("determinant of a non-square matrix");
  if (n == 0)
    return 1;
  Integer sign = 1, previous = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a[k][k] == 0) {
      std::size_t swap_row = k + 1;
      while (swap_row < n && a[swap_row][k] == 0)
        ++swap_row;
      if (swap_row == n)
        return 0;
      std::swap(a[k], a[swap_row]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j)
        a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / previous;
    previous = a[k][k];
  }
  return sign * a[n - 1][n - 1];
}

inline nlohmann::json integer_to_json(const Integer& v)
{
  if (v >= std::numeric_limits<long long>::min() && v <= std::numeric_limits<long long>::max())
    return nlohmann::json(static_cast<long long>(v));
  return nlohmann::json(v.str());
}

/// [{"dim":d,"betti":b,"torsion":[...]}]
inline nlohmann::json to_json(const HomologyResult& h)
{
  auto out = nlohmann::json::array();
  for (const auto& g : h.groups) {
    auto torsion = nlohmann::json::array();
    for (const auto& t : g.torsion)
      torsion.push_back(integer_to_json(t));
    out.push_back({{"dim", g.dim}, {"betti", g.betti}, {"torsion", torsion}});
  }
  return out;
}

/// CSV with header "dim,betti,torsion"; torsion factors joined by ';'.
inline std::string to_csv(const HomologyResult& h)
{
  std::string out = "dim,betti,torsion\n";
  for (const auto& g : h.groups) {
    out += std::to_string(g.dim) + ',' + std::to_string(g.betti) + ',';
    for (std::size_t i = 0; i < g.torsion.size(); ++i) {
      if (i)
        out += ';';
      out += g.torsion[i].str();
    }
    out += '\n';
  }
  return out;
}

} // namespace pinerve

#endif // PINERVE_HOMOLOGY_HPP
