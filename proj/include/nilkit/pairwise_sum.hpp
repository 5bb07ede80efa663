#pragma once

#include <array>
#include <cstddef>
#include <cstdint>

namespace nilkit {

/// Streaming pairwise (tree) summation. Terms are combined like a binary
/// counter, so the result depends only on the order in which terms arrive,
/// and the rounding error grows as O(log n).
template <class T>
class PairwiseSum {
 public:
  void add(const T& x) {
    T carry = x;
    std::size_t level = 0;
    std::uint64_t c = count_;
    while (c & 1u) {
      carry = partial_[level] + carry;
      partial_[level] = T{};
      c >>= 1;
      ++level;
    }
    partial_[level] = carry;
    ++count_;
  }

  T total() const {
    T acc{};
    std::uint64_t c = count_;
    for (std::size_t level = 0; c != 0; ++level, c >>= 1) {
      if (c & 1u) acc = partial_[level] + acc;
    }
    return acc;
  }

  std::uint64_t count() const { return count_; }

 private:
  std::array<T, 64> partial_{};
  std::uint64_t count_ = 0;
};

}  // namespace nilkit
