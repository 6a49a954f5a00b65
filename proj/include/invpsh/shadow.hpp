#pragma once

// Finite unions of half-open boxes in [0,1)^r, stored on a compressed grid.
//
// A CellSet keeps one sorted breakpoint list shared by all axes; cell k of an
// axis is [bp[k], bp[k+1]). All set algebra is exact on this representation.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "errors.hpp"
#include "model.hpp"

namespace invpsh {

struct Box {
  std::vector<double> lo;
  std::vector<double> hi;

  friend bool operator==(const Box&, const Box&) = default;
};

inline constexpr std::size_t kMaxCells = std::size_t{1} << 24;

class CellSet {
 public:
  CellSet() : CellSet(1, {0.0, 1.0}) {}

  /// Empty set over the grid spanned by `breakpoints` (sorted, unique, >= 2 entries).
  CellSet(std::size_t rank, std::vector<double> breakpoints) : rank_(rank), bp_(std::move(breakpoints)) {
    if (rank_ < 1 || rank_ > kMaxRank) throw ConfigError("cell set: rank out of range");
    if (bp_.size() < 2) throw ConfigError("cell set: need at least two breakpoints");
    if (!std::is_sorted(bp_.begin(), bp_.end()) || std::adjacent_find(bp_.begin(), bp_.end()) != bp_.end())
      throw ConfigError("cell set: breakpoints must be strictly increasing");
    const std::size_t n = per_axis();
    std::size_t total = 1;
    strides_.assign(rank_, 1);
    for (std::size_t j = rank_; j-- > 0;) {
      strides_[j] = total;
      if (total > kMaxCells / n) throw ConfigError("cell set: too many cells (" + std::to_string(n) + "^" +
                                                   std::to_string(rank_) + ")");
      total *= n;
    }
    bits_.assign(total, 0);
  }

  static CellSet from_boxes(std::size_t rank, std::span<const Box> boxes, std::span<const double> extra = {}) {
    std::vector<double> bp(extra.begin(), extra.end());
    for (const Box& b : boxes) {
      if (b.lo.size() != rank || b.hi.size() != rank) throw ConfigError("box dimension does not match rank");
      for (std::size_t j = 0; j < rank; ++j) {
        if (!(b.lo[j] >= 0.0 && b.lo[j] < b.hi[j] && b.hi[j] <= 1.0))
          throw ConfigError("box bounds must satisfy 0 <= lo < hi <= 1");
        bp.push_back(b.lo[j]);
        bp.push_back(b.hi[j]);
      }
    }
    if (bp.empty()) bp = {0.0, 1.0};
    std::sort(bp.begin(), bp.end());
    bp.erase(std::unique(bp.begin(), bp.end()), bp.end());

    CellSet s(rank, std::move(bp));
    for (const Box& b : boxes) {
      std::vector<std::size_t> first(rank), last(rank);
      for (std::size_t j = 0; j < rank; ++j) {
        first[j] = s.axis_index(b.lo[j]);
        last[j] = s.axis_index(b.hi[j]);
      }
      s.for_each_in_range(first, last, [&](std::size_t c) { s.bits_[c] = 1; });
    }
    return s;
  }

  std::size_t rank() const noexcept { return rank_; }
  std::size_t per_axis() const noexcept { return bp_.size() - 1; }
  std::size_t total() const noexcept { return bits_.size(); }
  const std::vector<double>& breakpoints() const noexcept { return bp_; }
  std::size_t stride(std::size_t axis) const { return strides_[axis]; }

  bool test(std::size_t flat) const { return bits_[flat] != 0; }
  void set(std::size_t flat, bool v = true) { bits_[flat] = v ? 1 : 0; }

  std::size_t flat(std::span<const std::size_t> idx) const {
    std::size_t c = 0;
    for (std::size_t j = 0; j < rank_; ++j) c += idx[j] * strides_[j];
    return c;
  }
  std::vector<std::size_t> index(std::size_t flat) const {
    std::vector<std::size_t> idx(rank_);
    for (std::size_t j = 0; j < rank_; ++j) {
      idx[j] = flat / strides_[j];
      flat %= strides_[j];
    }
    return idx;
  }
  std::size_t coord(std::size_t flat, std::size_t axis) const { return (flat / strides_[axis]) % per_axis(); }

  bool empty() const { return std::none_of(bits_.begin(), bits_.end(), [](std::uint8_t b) { return b != 0; }); }
  std::size_t count() const { return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), 1)); }

  /// Breakpoint position of a value that is itself a breakpoint.
  std::size_t axis_index(double x) const {
    const auto it = std::lower_bound(bp_.begin(), bp_.end(), x);
    if (it == bp_.end() || *it != x) throw ConfigError("value is not a breakpoint");
    return static_cast<std::size_t>(it - bp_.begin());
  }

  /// Cell of the axis containing x, or per_axis() if x is outside [bp.front, bp.back).
  std::size_t locate(double x) const {
    if (x < bp_.front() || x >= bp_.back()) return per_axis();
    return static_cast<std::size_t>(std::upper_bound(bp_.begin(), bp_.end(), x) - bp_.begin()) - 1;
  }

  bool contains(std::span<const double> x) const {
    if (x.size() != rank_) throw ConfigError("point dimension does not match rank");
    std::size_t c = 0;
    for (std::size_t j = 0; j < rank_; ++j) {
      const std::size_t k = locate(x[j]);
      if (k == per_axis()) return false;
      c += k * strides_[j];
    }
    return test(c);
  }

  /// Visit all flat indices with first[j] <= idx[j] < last[j].
  template <typename Fn>
  void for_each_in_range(std::span<const std::size_t> first, std::span<const std::size_t> last, Fn&& fn) const {
    for (std::size_t j = 0; j < rank_; ++j)
      if (first[j] >= last[j]) return;
    std::vector<std::size_t> idx(first.begin(), first.end());
    for (;;) {
      fn(flat(idx));
      std::size_t j = rank_;
      while (j-- > 0) {
        if (++idx[j] < last[j]) break;
        idx[j] = first[j];
        if (j == 0) return;
      }
    }
  }

  /// Same set over a superset of the breakpoints.
  CellSet refined(std::vector<double> extra) const {
    extra.insert(extra.end(), bp_.begin(), bp_.end());
    std::sort(extra.begin(), extra.end());
    extra.erase(std::unique(extra.begin(), extra.end()), extra.end());
    CellSet out(rank_, std::move(extra));
    const std::size_t n = out.per_axis();
    std::vector<std::size_t> map(n);
    for (std::size_t k = 0; k < n; ++k) map[k] = locate(out.bp_[k]);
    for (std::size_t c = 0; c < out.total(); ++c) {
      std::size_t old = 0;
      bool inside = true;
      for (std::size_t j = 0; j < rank_ && inside; ++j) {
        const std::size_t m = map[out.coord(c, j)];
        if (m == per_axis()) inside = false;
        old += m * strides_[j];
      }
      out.bits_[c] = inside ? bits_[old] : 0;
    }
    return out;
  }

  /// Drop breakpoints that separate identical slabs, and empty outer slabs.
  CellSet pruned() const {
    if (empty()) return CellSet(rank_, {0.0, 1.0});
    const std::size_t n = per_axis();
    std::vector<std::uint8_t> occupied(n, 0), differs(n, 0);  // differs[k]: slab k-1 != slab k
    for (std::size_t c = 0; c < total(); ++c) {
      for (std::size_t j = 0; j < rank_; ++j) {
        const std::size_t k = coord(c, j);
        if (bits_[c]) occupied[k] = 1;
        if (k + 1 < n && bits_[c] != bits_[c + strides_[j]]) differs[k + 1] = 1;
      }
    }
    std::size_t lo = 0, hi = n;
    while (lo < hi && !occupied[lo]) ++lo;
    while (hi > lo && !occupied[hi - 1]) --hi;
    std::vector<std::size_t> keep_cells{lo};  // first old cell of each new cell
    for (std::size_t k = lo + 1; k < hi; ++k)
      if (differs[k]) keep_cells.push_back(k);
    std::vector<double> bp;
    for (std::size_t k : keep_cells) bp.push_back(bp_[k]);
    bp.push_back(bp_[hi]);
    CellSet out(rank_, std::move(bp));
    for (std::size_t c = 0; c < out.total(); ++c) {
      std::size_t old = 0;
      for (std::size_t j = 0; j < rank_; ++j) old += keep_cells[out.coord(c, j)] * strides_[j];
      out.bits_[c] = bits_[old];
    }
    return out;
  }

  /// Greedy decomposition into disjoint boxes (deterministic, lexicographic).
  std::vector<Box> to_boxes() const {
    std::vector<Box> out;
    std::vector<std::uint8_t> used(total(), 0);
    const std::size_t n = per_axis();
    for (std::size_t c = 0; c < total(); ++c) {
      if (!bits_[c] || used[c]) continue;
      std::vector<std::size_t> first = index(c);
      std::vector<std::size_t> last(first);
      for (auto& v : last) ++v;
      for (std::size_t j = 0; j < rank_; ++j) {
        while (last[j] < n) {
          std::vector<std::size_t> f2(first), l2(last);
          f2[j] = last[j];
          l2[j] = last[j] + 1;
          bool ok = true;
          for_each_in_range(f2, l2, [&](std::size_t q) { ok = ok && bits_[q] && !used[q]; });
          if (!ok) break;
          ++last[j];
        }
      }
      for_each_in_range(first, last, [&](std::size_t q) { used[q] = 1; });
      Box b;
      for (std::size_t j = 0; j < rank_; ++j) {
        b.lo.push_back(bp_[first[j]]);
        b.hi.push_back(bp_[last[j]]);
      }
      out.push_back(std::move(b));
    }
    return out;
  }

  friend bool operator==(const CellSet& a, const CellSet& b) {
    if (a.rank_ != b.rank_) return false;
    if (a.bp_ == b.bp_) return a.bits_ == b.bits_;
    const CellSet ra = a.refined(b.bp_);
    const CellSet rb = b.refined(a.bp_);
    return ra.bits_ == rb.bits_;
  }

  /// a ⊆ b.
  friend bool is_subset(const CellSet& a, const CellSet& b) {
    const CellSet ra = a.refined(b.bp_);
    const CellSet rb = b.refined(a.bp_);
    for (std::size_t c = 0; c < ra.total(); ++c)
      if (ra.bits_[c] && !rb.bits_[c]) return false;
    return true;
  }

  friend CellSet set_union(const CellSet& a, const CellSet& b) {
    CellSet ra = a.refined(b.bp_);
    const CellSet rb = b.refined(a.bp_);
    for (std::size_t c = 0; c < ra.total(); ++c) ra.bits_[c] |= rb.bits_[c];
    return ra;
  }

 private:
  std::size_t rank_;
  std::vector<double> bp_;
  std::vector<std::size_t> strides_;
  std::vector<std::uint8_t> bits_;
};

/// Closure under coordinate permutations.
inline CellSet symmetrize(const CellSet& s) {
  std::vector<std::uint8_t> canonical(s.total(), 0);  // flat index of the sorted multi-index
  for (std::size_t c = 0; c < s.total(); ++c) {
    if (!s.test(c)) continue;
    auto idx = s.index(c);
    std::sort(idx.begin(), idx.end());
    canonical[s.flat(idx)] = 1;
  }
  CellSet out = s;
  for (std::size_t c = 0; c < s.total(); ++c) {
    auto idx = s.index(c);
    std::sort(idx.begin(), idx.end());
    out.set(c, canonical[s.flat(idx)] != 0);
  }
  return out;
}

/// Down-closure in every modulus coordinate: x in S, 0 <= y <= x  ⇒  y in result.
inline CellSet down_closure(const CellSet& s) {
  CellSet out = s.breakpoints().front() == 0.0 ? s : s.refined({0.0});
  const std::size_t n = out.per_axis();
  for (std::size_t j = 0; j < out.rank(); ++j) {
    for (std::size_t c = out.total(); c-- > 0;) {
      if (out.coord(c, j) + 1 < n && out.test(c + out.stride(j))) out.set(c);
    }
  }
  return out;
}

/// True when some cell of S lies on a coordinate hyperplane {x_j = 0}.
inline bool touches_hyperplane(const CellSet& s) {
  if (s.breakpoints().front() != 0.0) return false;
  for (std::size_t c = 0; c < s.total(); ++c) {
    if (!s.test(c)) continue;
    for (std::size_t j = 0; j < s.rank(); ++j)
      if (s.coord(c, j) == 0) return true;
  }
  return false;
}

/// Connectedness of the union of closed cells (corner contact counts).
inline bool cells_connected(const CellSet& s) {
  const std::size_t r = s.rank();
  const std::size_t n = s.per_axis();
  std::vector<std::uint8_t> seen(s.total(), 0);
  std::size_t start = s.total();
  for (std::size_t c = 0; c < s.total(); ++c)
    if (s.test(c)) {
      start = c;
      break;
    }
  if (start == s.total()) return false;

  std::size_t neighbours = 1;
  for (std::size_t j = 0; j < r; ++j) neighbours *= 3;
  std::deque<std::size_t> queue{start};
  seen[start] = 1;
  std::size_t reached = 1;
  while (!queue.empty()) {
    const std::size_t c = queue.front();
    queue.pop_front();
    const auto idx = s.index(c);
    for (std::size_t d = 0; d < neighbours; ++d) {
      std::size_t code = d, q = 0;
      bool ok = true;
      for (std::size_t j = 0; j < r; ++j) {
        const long k = static_cast<long>(idx[j]) + static_cast<long>(code % 3) - 1;
        code /= 3;
        if (k < 0 || k >= static_cast<long>(n)) {
          ok = false;
          break;
        }
        q += static_cast<std::size_t>(k) * s.stride(j);
      }
      if (ok && s.test(q) && !seen[q]) {
        seen[q] = 1;
        ++reached;
        queue.push_back(q);
      }
    }
  }
  return reached == s.count();
}

/// Permutation-invariant subset of modulus space [0,1)^r given as a union of boxes.
class ReinhardtShadow {
 public:
  ReinhardtShadow() = default;

  static ReinhardtShadow from_boxes(std::size_t rank, std::span<const Box> boxes) {
    if (rank < 1 || rank > kMaxRank) throw ConfigError("shadow: rank out of range");
    const CellSet raw = CellSet::from_boxes(rank, boxes);
    const CellSet sym = symmetrize(raw);
    ReinhardtShadow s(sym);
    s.symmetrized_ = !(sym == raw);
    return s;
  }

  static ReinhardtShadow from_cells(const CellSet& cells) {
    const CellSet sym = symmetrize(cells);
    ReinhardtShadow s(sym);
    s.symmetrized_ = !(sym == cells);
    return s;
  }

  /// The full polydisk [0,1)^r.
  static ReinhardtShadow full(std::size_t rank) {
    const Box b{std::vector<double>(rank, 0.0), std::vector<double>(rank, 1.0)};
    return from_boxes(rank, std::span<const Box>(&b, 1));
  }

  std::size_t rank() const noexcept { return cells_.rank(); }
  bool symmetrized() const noexcept { return symmetrized_; }
  bool empty() const { return cells_.empty(); }
  const CellSet& cells() const noexcept { return cells_; }
  const std::vector<Box>& boxes() const noexcept { return boxes_; }
  const std::vector<double>& breakpoints() const noexcept { return cells_.breakpoints(); }

  bool contains(std::span<const double> moduli) const { return cells_.contains(moduli); }

  friend bool operator==(const ReinhardtShadow& a, const ReinhardtShadow& b) { return a.cells_ == b.cells_; }
  friend bool is_subset(const ReinhardtShadow& a, const ReinhardtShadow& b) { return is_subset(a.cells_, b.cells_); }

 private:
  explicit ReinhardtShadow(const CellSet& cells) : cells_(cells.pruned()), boxes_(cells_.to_boxes()) {}

  CellSet cells_;
  std::vector<Box> boxes_;
  bool symmetrized_ = false;
};

}  // namespace invpsh
