#pragma once

#include <bit>
#include <cstdint>
#include <initializer_list>
#include <iterator>
#include <vector>

namespace pathcov {

using NodeIndex = int;

/// Diagrams are capped at this many nodes so that node sets fit one word.
inline constexpr int kMaxNodes = 64;

/// Set of node indices of one diagram, stored as a 64-bit mask.
class NodeSet {
 public:
  class iterator {
   public:
    using iterator_category = std::forward_iterator_tag;
    using value_type = NodeIndex;
    using difference_type = std::ptrdiff_t;
    using pointer = void;
    using reference = NodeIndex;

    iterator() = default;
    explicit iterator(std::uint64_t rest) : rest_(rest) {}
    NodeIndex operator*() const { return std::countr_zero(rest_); }
    iterator& operator++() {
      rest_ &= rest_ - 1;
      return *this;
    }
    iterator operator++(int) {
      auto old = *this;
      ++*this;
      return old;
    }
    friend bool operator==(iterator a, iterator b) { return a.rest_ == b.rest_; }

   private:
    std::uint64_t rest_ = 0;
  };

  constexpr NodeSet() = default;
  constexpr explicit NodeSet(std::uint64_t bits) : bits_(bits) {}
  NodeSet(std::initializer_list<NodeIndex> nodes) {
    for (NodeIndex n : nodes) insert(n);
  }
  template <typename Range>
  static NodeSet of(const Range& nodes) {
    NodeSet s;
    for (NodeIndex n : nodes) s.insert(n);
    return s;
  }
  static NodeSet single(NodeIndex n) { return NodeSet(std::uint64_t{1} << n); }

  std::uint64_t bits() const { return bits_; }
  bool contains(NodeIndex n) const { return (bits_ >> n) & 1U; }
  bool empty() const { return bits_ == 0; }
  int size() const { return std::popcount(bits_); }
  void insert(NodeIndex n) { bits_ |= std::uint64_t{1} << n; }
  void erase(NodeIndex n) { bits_ &= ~(std::uint64_t{1} << n); }
  bool intersects(NodeSet o) const { return (bits_ & o.bits_) != 0; }
  bool is_subset_of(NodeSet o) const { return (bits_ & ~o.bits_) == 0; }

  std::vector<NodeIndex> to_vector() const { return {begin(), end()}; }

  iterator begin() const { return iterator(bits_); }
  iterator end() const { return iterator(0); }

  NodeSet& operator|=(NodeSet o) { bits_ |= o.bits_; return *this; }
  NodeSet& operator&=(NodeSet o) { bits_ &= o.bits_; return *this; }
  NodeSet& operator-=(NodeSet o) { bits_ &= ~o.bits_; return *this; }
  friend NodeSet operator|(NodeSet a, NodeSet b) { return a |= b; }
  friend NodeSet operator&(NodeSet a, NodeSet b) { return a &= b; }
  friend NodeSet operator-(NodeSet a, NodeSet b) { return a -= b; }
  friend bool operator==(NodeSet a, NodeSet b) = default;
  friend auto operator<=>(NodeSet a, NodeSet b) = default;

 private:
  std::uint64_t bits_ = 0;
};

}  // namespace pathcov
