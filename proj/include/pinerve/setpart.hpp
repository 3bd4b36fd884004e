#ifndef PINERVE_SETPART_HPP
#define PINERVE_SETPART_HPP

// Set partitions of [n] = {1,...,n} under refinement.
//
// A Partition is stored as its restricted-growth string (RGS): label[i] is the
// index of the block holding element i+1, blocks numbered in order of their
// minima. Two partitions are equal iff their RGS are equal, and the RGS order
// is the canonical enumeration order.

#include <algorithm>
#include <cctype>
#include <compare>
#include <cstddef>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "pinerve/error.hpp"

namespace pinerve
{

class Partition
{
public:
  Partition() = default;

  /// Blocks use 1-based elements; any order is accepted and canonicalized.
  Partition(int n, const std::vector<std::vector<int>>& blocks)
  : labels_(static_cast<std::size_t>(n), -1)
  {
    if (n < 1)
      throw InvalidArgument("partition ground set must be nonempty");

    std::vector<std::vector<int>> sorted = blocks;
    for (auto& block : sorted) {
      if (block.empty())
        throw InvalidArgument("partition block must be nonempty");
      std::sort(block.begin(), block.end());
    }
    std::sort(sorted.begin(), sorted.end());

    for (std::size_t b = 0; b < sorted.size(); ++b) {
      for (int x : sorted[b]) {
        if (x < 1 || x > n)
          throw InvalidArgument("element " + std::to_string(x) + " out of range 1.." +
                                std::to_string(n));
        auto& slot = labels_[static_cast<std::size_t>(x - 1)];
        if (slot != -1)
          throw InvalidArgument("duplicate element " + std::to_string(x));
        slot = static_cast<int>(b);
      }
    }
    for (std::size_t i = 0; i < labels_.size(); ++i)
      if (labels_[i] == -1)
        throw InvalidArgument("element " + std::to_string(i + 1) + " missing");
    block_count_ = static_cast<int>(sorted.size());
  }

  /// Builds from any block labelling (not necessarily restricted-growth).
  static Partition from_labels(const std::vector<int>& labels)
  {
    Partition p;
    p.labels_.assign(labels.size(), 0);
    std::vector<std::pair<int, int>> renumber;
    for (std::size_t i = 0; i < labels.size(); ++i) {
      auto it = std::find_if(renumber.begin(), renumber.end(),
                             [&](const auto& r) { return r.first == labels[i]; });
      if (it == renumber.end()) {
        renumber.emplace_back(labels[i], static_cast<int>(renumber.size()));
        p.labels_[i] = renumber.back().second;
      } else {
        p.labels_[i] = it->second;
      }
    }
    p.block_count_ = static_cast<int>(renumber.size());
    return p;
  }

  static Partition discrete(int n)
  {
    std::vector<int> labels(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
      labels[static_cast<std::size_t>(i)] = i;
    return from_labels(labels);
  }

  static Partition total(int n)
  { return from_labels(std::vector<int>(static_cast<std::size_t>(n), 0)); }

  int size() const
  { return static_cast<int>(labels_.size()); }

  int block_count() const
  { return block_count_; }

  /// Block index (canonical numbering) of 1-based element x.
  int block_of(int x) const
  { return labels_[static_cast<std::size_t>(x - 1)]; }

  const std::vector<int>& labels() const
  { return labels_; }

  std::vector<std::vector<int>> blocks() const
  {
    std::vector<std::vector<int>> out(static_cast<std::size_t>(block_count_));
    for (std::size_t i = 0; i < labels_.size(); ++i)
      out[static_cast<std::size_t>(labels_[i])].push_back(static_cast<int>(i + 1));
    return out;
  }

  std::vector<int> block_containing(int x) const
  {
    std::vector<int> out;
    const int label = block_of(x);
    for (std::size_t i = 0; i < labels_.size(); ++i)
      if (labels_[i] == label)
        out.push_back(static_cast<int>(i + 1));
    return out;
  }

  bool is_discrete() const
  { return block_count_ == size(); }

  bool is_total() const
  { return block_count_ == 1; }

  bool operator==(const Partition&) const = default;

  std::strong_ordering operator<=>(const Partition& other) const
  {
    if (auto c = size() <=> other.size(); c != 0)
      return c;
    return labels_ <=> other.labels_;
  }

private:
  std::vector<int> labels_;
  int block_count_ = 0;
};

inline void require_same_size(const Partition& p, const Partition& q)
{
  if (p.size() != q.size())
    throw InvalidArgument("partitions of different ground sets (" + std::to_string(p.size()) +
                          " vs " + std::to_string(q.size()) + ")");
}

/// p <= q in the refinement order: every block of p lies inside a block of q.
inline bool refines(const Partition& p, const Partition& q)
{
  require_same_size(p, q);
  std::vector<int> image(static_cast<std::size_t>(p.block_count()), -1);
  for (int x = 1; x <= p.size(); ++x) {
    int& slot = image[static_cast<std::size_t>(p.block_of(x))];
    if (slot == -1)
      slot = q.block_of(x);
    else if (slot != q.block_of(x))
      return false;
  }
  return true;
}

/// Common refinement. May be the discrete partition.
inline Partition meet(const Partition& p, const Partition& q)
{
  require_same_size(p, q);
  std::vector<int> labels(static_cast<std::size_t>(p.size()));
  for (int x = 1; x <= p.size(); ++x)
    labels[static_cast<std::size_t>(x - 1)] = p.block_of(x) * q.block_count() + q.block_of(x);
  return Partition::from_labels(labels);
}

/// All partitions of [n] in RGS-lexicographic order (total partition first,
/// discrete partition last).
inline std::vector<Partition> enumerate_all(int n)
{
  if (n < 1)
    throw InvalidArgument("n must be positive");
  std::vector<Partition> out;
  std::vector<int> rgs(static_cast<std::size_t>(n), 0);
  std::function<void(int, int)> rec = [&](int pos, int max_label) {
    if (pos == n) {
      out.push_back(Partition::from_labels(rgs));
      return;
    }
    for (int label = 0; label <= max_label + 1; ++label) {
      rgs[static_cast<std::size_t>(pos)] = label;
      rec(pos + 1, std::max(max_label, label));
    }
  };
  rec(1, 0);
  return out;
}

/// The proper part: everything except the discrete and total partitions.
inline std::vector<Partition> enumerate_proper(int n)
{
  if (n < 3)
    throw InvalidArgument("proper part of the partition lattice needs n >= 3, got " +
                          std::to_string(n));
  auto all = enumerate_all(n);
  std::erase_if(all, [](const Partition& p) { return p.is_discrete() || p.is_total(); });
  return all;
}

/// "1,2|3|4"
inline std::string format(const Partition& p)
{
  std::string out;
  bool first_block = true;
  for (const auto& block : p.blocks()) {
    if (!first_block)
      out += '|';
    first_block = false;
    for (std::size_t i = 0; i < block.size(); ++i) {
      if (i)
        out += ',';
      out += std::to_string(block[i]);
    }
  }
  return out;
}

namespace detail
{

inline void skip_spaces(std::string_view text, std::size_t& pos)
{
  while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos])))
    ++pos;
}

} // namespace detail

/// Parses the block grammar `elem(,elem)*(|elem(,elem)*)*`. The ground set
/// size is the number of elements listed unless `n` is given explicitly.
inline Partition parse_partition(std::string_view text, int n = 0)
{
  std::vector<std::vector<int>> blocks(1);
  std::vector<std::size_t> where;
  std::vector<int> elements;
  std::size_t pos = 0;
  bool expect_number = true;

  detail::skip_spaces(text, pos);
  if (pos == text.size())
    throw ParseError("empty partition", pos);

  while (pos < text.size()) {
    detail::skip_spaces(text, pos);
    if (pos == text.size())
      break;
    const char c = text[pos];
    if (expect_number) {
      if (!std::isdigit(static_cast<unsigned char>(c)))
        throw ParseError(std::string("expected element, found '") + c + "'", pos);
      const std::size_t start = pos;
      long value = 0;
      while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
        value = value * 10 + (text[pos] - '0');
        if (value > 1'000'000)
          throw ParseError("element too large", start);
        ++pos;
      }
      blocks.back().push_back(static_cast<int>(value));
      elements.push_back(static_cast<int>(value));
      where.push_back(start);
      expect_number = false;
    } else {
      if (c == ',') {
        expect_number = true;
      } else if (c == '|') {
        blocks.emplace_back();
        expect_number = true;
      } else {
        throw ParseError(std::string("unexpected character '") + c + "'", pos);
      }
      ++pos;
    }
  }
  if (expect_number)
    throw ParseError("trailing separator", text.size());

  const int ground = n > 0 ? n : static_cast<int>(elements.size());
  std::vector<bool> seen(static_cast<std::size_t>(ground) + 1, false);
  for (std::size_t i = 0; i < elements.size(); ++i) {
    const int x = elements[i];
    if (x < 1 || x > ground)
      throw ParseError("element " + std::to_string(x) + " out of range 1.." +
                           std::to_string(ground),
                       where[i]);
    if (seen[static_cast<std::size_t>(x)])
      throw ParseError("duplicate element " + std::to_string(x), where[i]);
    seen[static_cast<std::size_t>(x)] = true;
  }
  for (int x = 1; x <= ground; ++x)
    if (!seen[static_cast<std::size_t>(x)])
      throw ParseError("element " + std::to_string(x) + " missing", text.size());

  return Partition(ground, blocks);
}

} // namespace pinerve

template<>
struct std::hash<pinerve::Partition>
{
  std::size_t operator()(const pinerve::Partition& p) const noexcept
  {
    std::size_t h = static_cast<std::size_t>(p.size());
    for (int label : p.labels())
      h = h * 31 + static_cast<std::size_t>(label);
    return h;
  }
};

#endif // PINERVE_SETPART_HPP
