// Copyright 2026 The cachenet Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <bit>
#include <compare>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <vector>

namespace cachenet {

/// Largest transmitter or receiver count representable by NodeSet.
inline constexpr int kMaxNodes = 32;

/// A subset of node indices {0, ..., kMaxNodes-1}. Indices are 0-based in
/// code; str() renders them 1-based, e.g. {0,1} prints as "{1,2}".
class NodeSet {
 public:
  constexpr NodeSet() = default;
  NodeSet(std::initializer_list<int> members);
  static constexpr NodeSet from_mask(std::uint64_t mask) {
    NodeSet s;
    s.mask_ = mask;
    return s;
  }
  /// {0, ..., count-1}.
  static NodeSet first(int count);

  std::uint64_t mask() const { return mask_; }
  int size() const { return std::popcount(mask_); }
  bool empty() const { return mask_ == 0; }
  bool contains(int node) const { return (mask_ >> node) & 1U; }

  NodeSet with(int node) const { return from_mask(mask_ | (std::uint64_t{1} << node)); }
  NodeSet without(int node) const { return from_mask(mask_ & ~(std::uint64_t{1} << node)); }
  NodeSet operator|(NodeSet rhs) const { return from_mask(mask_ | rhs.mask_); }
  NodeSet operator&(NodeSet rhs) const { return from_mask(mask_ & rhs.mask_); }
  NodeSet minus(NodeSet rhs) const { return from_mask(mask_ & ~rhs.mask_); }
  bool intersects(NodeSet rhs) const { return (mask_ & rhs.mask_) != 0; }

  /// Members in increasing order.
  std::vector<int> members() const;

  /// 1-based display form, "{1,2}" or "{}".
  std::string str() const;
  /// Compact 1-based label as used in subfile names, "12"; empty set is "0".
  std::string label() const;

  friend bool operator==(NodeSet, NodeSet) = default;
  /// Lexicographic order on the sorted member lists.
  friend std::strong_ordering operator<=>(NodeSet lhs, NodeSet rhs);

 private:
  std::uint64_t mask_ = 0;
};

/// Exact binomial coefficient. Throws std::domain_error when k > n and
/// std::overflow_error if the value does not fit in 64 bits.
std::uint64_t binomial(int n, int k);

/// All `size`-element subsets of {0, ..., ground-1} in lexicographic order.
/// Throws std::domain_error when size > ground or ground > kMaxNodes.
std::vector<NodeSet> enumerate_subsets(int ground, int size);

/// Index of `subset` within enumerate_subsets(ground, subset.size()).
std::size_t subset_rank(int ground, NodeSet subset);

}  // namespace cachenet
