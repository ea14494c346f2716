#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <limits>
#include <vector>

namespace fdrelay {

/// Small set of 0-based indices stored as a bitmask.
template <class Word>
class IndexSet {
 public:
  static constexpr std::size_t kCapacity = std::numeric_limits<Word>::digits;

  constexpr IndexSet() = default;
  constexpr explicit IndexSet(Word bits) : bits_(bits) {}
  constexpr IndexSet(std::initializer_list<std::size_t> indices) {
    for (auto i : indices) insert(i);
  }

  /// {0, ..., n-1}
  static constexpr IndexSet all(std::size_t n) {
    return IndexSet(n >= kCapacity ? ~Word{0} : static_cast<Word>((Word{1} << n) - 1));
  }

  constexpr void insert(std::size_t i) { bits_ |= Word{1} << i; }
  constexpr void erase(std::size_t i) { bits_ &= ~(Word{1} << i); }
  constexpr bool contains(std::size_t i) const { return (bits_ >> i) & Word{1}; }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr std::size_t size() const { return static_cast<std::size_t>(std::popcount(bits_)); }
  constexpr Word bits() const { return bits_; }

  constexpr bool is_subset_of(IndexSet other) const { return (bits_ & ~other.bits_) == 0; }
  constexpr bool disjoint(IndexSet other) const { return (bits_ & other.bits_) == 0; }

  /// Members in increasing order.
  std::vector<std::size_t> indices() const {
    std::vector<std::size_t> out;
    out.reserve(size());
    for (Word b = bits_; b != 0; b &= b - 1) {
      out.push_back(static_cast<std::size_t>(std::countr_zero(b)));
    }
    return out;
  }

  friend constexpr IndexSet operator|(IndexSet a, IndexSet b) { return IndexSet(a.bits_ | b.bits_); }
  friend constexpr IndexSet operator&(IndexSet a, IndexSet b) { return IndexSet(a.bits_ & b.bits_); }
  /// Set difference.
  friend constexpr IndexSet operator-(IndexSet a, IndexSet b) {
    return IndexSet(static_cast<Word>(a.bits_ & ~b.bits_));
  }
  friend constexpr bool operator==(IndexSet, IndexSet) = default;

 private:
  Word bits_ = 0;
};

/// Relays of one cluster.
using RelaySet = IndexSet<std::uint32_t>;
/// Variables of a covariance bundle.
using VarSet = IndexSet<std::uint64_t>;

}  // namespace fdrelay
