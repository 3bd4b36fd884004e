#ifndef PINERVE_MATRIX_HPP
#define PINERVE_MATRIX_HPP

#include <algorithm>
#include <cstddef>
#include <map>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "pinerve/error.hpp"

namespace pinerve
{

using Integer = boost::multiprecision::cpp_int;

/// Sparse integer matrix, column-major. Each column is a list of
/// (row, value) entries sorted by row with no zero values.
class IntMatrix
{
public:
  using Entry = std::pair<std::size_t, Integer>;
  using Column = std::vector<Entry>;

  IntMatrix() = default;

  IntMatrix(std::size_t rows, std::size_t cols)
  : rows_(rows), columns_(cols)
  {}

  static IntMatrix from_dense(const std::vector<std::vector<long long>>& dense)
  {
    const std::size_t rows = dense.size();
    const std::size_t cols = rows ? dense.front().size() : 0;
    IntMatrix m(rows, cols);
    for (std::size_t r = 0; r < rows; ++r) {
      if (dense[r].size() != cols)
        throw InvalidArgument("ragged dense matrix");
      for (std::size_t c = 0; c < cols; ++c)
        if (dense[r][c] != 0)
          m.columns_[c].emplace_back(r, Integer(dense[r][c]));
    }
    return m;
  }

  std::size_t rows() const
  { return rows_; }

  std::size_t cols() const
  { return columns_.size(); }

  const Column& column(std::size_t c) const
  { return columns_[c]; }

  /// Adds `value` at (r, c), merging with an existing entry.
  void add(std::size_t r, std::size_t c, const Integer& value)
  {
    if (r >= rows_ || c >= cols())
      throw InvalidArgument("matrix index out of range");
    if (value == 0)
      return;
    auto& col = columns_[c];
    auto it = std::lower_bound(col.begin(), col.end(), r,
                               [](const Entry& e, std::size_t row) { return e.first < row; });
    if (it != col.end() && it->first == r) {
      it->second += value;
      if (it->second == 0)
        col.erase(it);
    } else {
      col.insert(it, Entry{r, value});
    }
  }

  Integer at(std::size_t r, std::size_t c) const
  {
    const auto& col = columns_[c];
    auto it = std::lower_bound(col.begin(), col.end(), r,
                               [](const Entry& e, std::size_t row) { return e.first < row; });
    return it != col.end() && it->first == r ? it->second : Integer(0);
  }

  std::size_t nonzeros() const
  {
    std::size_t total = 0;
    for (const auto& col : columns_)
      total += col.size();
    return total;
  }

  bool is_zero() const
  { return nonzeros() == 0; }

  std::vector<std::vector<Integer>> to_dense() const
  {
    std::vector<std::vector<Integer>> out(rows_, std::vector<Integer>(cols(), 0));
    for (std::size_t c = 0; c < cols(); ++c)
      for (const auto& [r, v] : columns_[c])
        out[r][c] = v;
    return out;
  }

  IntMatrix transpose() const
  {
    IntMatrix t(cols(), rows_);
    for (std::size_t c = 0; c < cols(); ++c)
      for (const auto& [r, v] : columns_[c])
        t.columns_[r].emplace_back(c, v);
    return t;
  }

  friend IntMatrix operator*(const IntMatrix& a, const IntMatrix& b)
  {
    if (a.cols() != b.rows())
      throw InvalidArgument("matrix dimension mismatch in product");
    IntMatrix out(a.rows(), b.cols());
    for (std::size_t c = 0; c < b.cols(); ++c) {
      std::map<std::size_t, Integer> acc;
      for (const auto& [k, bv] : b.columns_[c])
        for (const auto& [r, av] : a.columns_[k])
          acc[r] += av * bv;
      for (auto& [r, v] : acc)
        if (v != 0)
          out.columns_[c].emplace_back(r, std::move(v));
    }
    return out;
  }

  bool operator==(const IntMatrix&) const = default;

private:
  std::size_t rows_ = 0;
  std::vector<Column> columns_;
};

} // namespace pinerve

#endif // PINERVE_MATRIX_HPP
