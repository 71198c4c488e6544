#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <vector>

namespace subw {

/// Set of dense vertex indices. The first 64 indices live in one inline word;
/// larger universes spill into a trimmed overflow vector.
class VertexSet {
 public:
  VertexSet() = default;
  VertexSet(std::initializer_list<int> elements) {
    for (int v : elements) insert(v);
  }
  static VertexSet from_mask(std::uint64_t mask) {
    VertexSet s;
    s.lo_ = mask;
    return s;
  }
  static VertexSet range(int n) {
    VertexSet s;
    for (int v = 0; v < n; ++v) s.insert(v);
    return s;
  }
  template <class Range>
  static VertexSet of(const Range& elements) {
    VertexSet s;
    for (int v : elements) s.insert(v);
    return s;
  }

  void insert(int v) {
    if (v < 64) {
      lo_ |= std::uint64_t{1} << v;
      return;
    }
    std::size_t w = static_cast<std::size_t>(v / 64 - 1);
    if (hi_.size() <= w) hi_.resize(w + 1, 0);
    hi_[w] |= std::uint64_t{1} << (v % 64);
  }
  void erase(int v) {
    if (v < 64) {
      lo_ &= ~(std::uint64_t{1} << v);
      return;
    }
    std::size_t w = static_cast<std::size_t>(v / 64 - 1);
    if (w < hi_.size()) hi_[w] &= ~(std::uint64_t{1} << (v % 64));
    trim();
  }
  bool contains(int v) const {
    if (v < 0) return false;
    if (v < 64) return (lo_ >> v) & 1U;
    std::size_t w = static_cast<std::size_t>(v / 64 - 1);
    return w < hi_.size() && ((hi_[w] >> (v % 64)) & 1U);
  }
  int size() const {
    int total = std::popcount(lo_);
    for (auto w : hi_) total += std::popcount(w);
    return total;
  }
  bool empty() const { return lo_ == 0 && hi_.empty(); }
  bool fits_in_word() const { return hi_.empty(); }
  std::uint64_t mask() const { return lo_; }

  /// Smallest element, or -1 when empty.
  int first() const {
    if (lo_ != 0) return std::countr_zero(lo_);
    for (std::size_t i = 0; i < hi_.size(); ++i) {
      if (hi_[i] != 0) return static_cast<int>(64 * (i + 1)) + std::countr_zero(hi_[i]);
    }
    return -1;
  }

  std::vector<int> elements() const {
    std::vector<int> out;
    out.reserve(static_cast<std::size_t>(size()));
    for_each([&](int v) { out.push_back(v); });
    return out;
  }

  template <class Fn>
  void for_each(Fn&& fn) const {
    for (std::uint64_t w = lo_; w != 0; w &= w - 1) fn(std::countr_zero(w));
    for (std::size_t i = 0; i < hi_.size(); ++i) {
      for (std::uint64_t w = hi_[i]; w != 0; w &= w - 1) {
        fn(static_cast<int>(64 * (i + 1)) + std::countr_zero(w));
      }
    }
  }

  VertexSet& operator|=(const VertexSet& o) {
    lo_ |= o.lo_;
    if (hi_.size() < o.hi_.size()) hi_.resize(o.hi_.size(), 0);
    for (std::size_t i = 0; i < o.hi_.size(); ++i) hi_[i] |= o.hi_[i];
    return *this;
  }
  VertexSet& operator&=(const VertexSet& o) {
    lo_ &= o.lo_;
    if (hi_.size() > o.hi_.size()) hi_.resize(o.hi_.size());
    for (std::size_t i = 0; i < hi_.size(); ++i) hi_[i] &= o.hi_[i];
    trim();
    return *this;
  }
  VertexSet& operator-=(const VertexSet& o) {
    lo_ &= ~o.lo_;
    for (std::size_t i = 0; i < hi_.size() && i < o.hi_.size(); ++i) hi_[i] &= ~o.hi_[i];
    trim();
    return *this;
  }
  friend VertexSet operator|(VertexSet a, const VertexSet& b) { return a |= b; }
  friend VertexSet operator&(VertexSet a, const VertexSet& b) { return a &= b; }
  friend VertexSet operator-(VertexSet a, const VertexSet& b) { return a -= b; }

  bool intersects(const VertexSet& o) const {
    if (lo_ & o.lo_) return true;
    for (std::size_t i = 0; i < hi_.size() && i < o.hi_.size(); ++i) {
      if (hi_[i] & o.hi_[i]) return true;
    }
    return false;
  }
  bool is_subset_of(const VertexSet& o) const {
    if (lo_ & ~o.lo_) return false;
    for (std::size_t i = 0; i < hi_.size(); ++i) {
      std::uint64_t other = i < o.hi_.size() ? o.hi_[i] : 0;
      if (hi_[i] & ~other) return false;
    }
    return true;
  }

  friend bool operator==(const VertexSet& a, const VertexSet& b) { return a.lo_ == b.lo_ && a.hi_ == b.hi_; }
  friend bool operator!=(const VertexSet& a, const VertexSet& b) { return !(a == b); }

  /// Canonical order: lexicographic on the increasing element lists.
  friend bool operator<(const VertexSet& a, const VertexSet& b) {
    if (a.fits_in_word() && b.fits_in_word()) {
      std::uint64_t x = a.lo_, y = b.lo_;
      while (x != 0 && y != 0) {
        int ex = std::countr_zero(x), ey = std::countr_zero(y);
        if (ex != ey) return ex < ey;
        x &= x - 1;
        y &= y - 1;
      }
      return x == 0 && y != 0;
    }
    auto ea = a.elements(), eb = b.elements();
    return ea < eb;
  }

  std::size_t hash() const {
    std::size_t h = std::hash<std::uint64_t>{}(lo_);
    for (auto w : hi_) h = h * 1000003U ^ std::hash<std::uint64_t>{}(w);
    return h;
  }

 private:
  void trim() {
    while (!hi_.empty() && hi_.back() == 0) hi_.pop_back();
  }

  std::uint64_t lo_ = 0;
  std::vector<std::uint64_t> hi_;
};

struct VertexSetHash {
  std::size_t operator()(const VertexSet& s) const { return s.hash(); }
};

/// Calls fn(subset) for every subset of `set`, including the empty set and `set` itself.
/// Requires a universe of at most 64 vertices.
template <class Fn>
void for_each_subset(const VertexSet& set, Fn&& fn) {
  const std::uint64_t full = set.mask();
  std::uint64_t sub = 0;
  while (true) {
    fn(VertexSet::from_mask(sub));
    if (sub == full) break;
    sub = (sub - full) & full;
  }
}

}  // namespace subw
