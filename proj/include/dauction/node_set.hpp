#pragma once

#include <bit>
#include <cstdint>
#include <initializer_list>

namespace dauction {

// Set of node indices in [0, 64).  Backed by one machine word so the hot
// loops (restriction, reachability, candidate scans) stay branch-light.
class NodeSet {
  public:
    constexpr NodeSet() = default;
    constexpr explicit NodeSet(std::uint64_t bits) : bits_(bits) {}
    NodeSet(std::initializer_list<int> xs) {
        for (int x : xs) add(x);
    }

    static constexpr NodeSet first_n(int n) {
        return NodeSet(n >= 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << n) - 1));
    }

    constexpr bool contains(int i) const { return (bits_ >> i) & 1u; }
    constexpr void add(int i) { bits_ |= std::uint64_t{1} << i; }
    constexpr void remove(int i) { bits_ &= ~(std::uint64_t{1} << i); }
    constexpr bool empty() const { return bits_ == 0; }
    constexpr int size() const { return std::popcount(bits_); }
    constexpr std::uint64_t bits() const { return bits_; }

    constexpr bool subset_of(NodeSet o) const { return (bits_ & ~o.bits_) == 0; }
    constexpr bool intersects(NodeSet o) const { return (bits_ & o.bits_) != 0; }

    friend constexpr NodeSet operator|(NodeSet a, NodeSet b) { return NodeSet(a.bits_ | b.bits_); }
    friend constexpr NodeSet operator&(NodeSet a, NodeSet b) { return NodeSet(a.bits_ & b.bits_); }
    friend constexpr NodeSet operator-(NodeSet a, NodeSet b) { return NodeSet(a.bits_ & ~b.bits_); }
    NodeSet& operator|=(NodeSet o) { bits_ |= o.bits_; return *this; }
    NodeSet& operator&=(NodeSet o) { bits_ &= o.bits_; return *this; }
    friend constexpr bool operator==(NodeSet a, NodeSet b) { return a.bits_ == b.bits_; }
    friend constexpr bool operator!=(NodeSet a, NodeSet b) { return a.bits_ != b.bits_; }

    // Iterates members in increasing index order.
    class iterator {
      public:
        constexpr explicit iterator(std::uint64_t rest) : rest_(rest) {}
        constexpr int operator*() const { return std::countr_zero(rest_); }
        constexpr iterator& operator++() { rest_ &= rest_ - 1; return *this; }
        constexpr bool operator!=(const iterator& o) const { return rest_ != o.rest_; }

      private:
        std::uint64_t rest_;
    };
    constexpr iterator begin() const { return iterator(bits_); }
    constexpr iterator end() const { return iterator(0); }

    constexpr int lowest() const { return std::countr_zero(bits_); }

  private:
    std::uint64_t bits_ = 0;
};

}  // namespace dauction
