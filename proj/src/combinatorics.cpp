// Copyright 2026 The cachenet Authors
// SPDX-License-Identifier: Apache-2.0

#include "cachenet/combinatorics.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace cachenet {

NodeSet::NodeSet(std::initializer_list<int> members) {
  for (int m : members) {
    if (m < 0 || m >= kMaxNodes) throw std::out_of_range("node index out of range");
    mask_ |= std::uint64_t{1} << m;
  }
}

NodeSet NodeSet::first(int count) {
  if (count < 0 || count > kMaxNodes) throw std::out_of_range("node count out of range");
  return from_mask(count == 0 ? 0 : (~std::uint64_t{0} >> (64 - count)));
}

std::vector<int> NodeSet::members() const {
  std::vector<int> out;
  out.reserve(static_cast<std::size_t>(size()));
  for (std::uint64_t m = mask_; m != 0; m &= m - 1) out.push_back(std::countr_zero(m));
  return out;
}

std::string NodeSet::str() const {
  std::string out = "{";
  bool first_member = true;
  for (int m : members()) {
    if (!first_member) out += ',';
    out += std::to_string(m + 1);
    first_member = false;
  }
  return out + "}";
}

std::string NodeSet::label() const {
  if (empty()) return "0";
  std::string out;
  for (int m : members()) out += std::to_string(m + 1);
  return out;
}

std::strong_ordering operator<=>(NodeSet lhs, NodeSet rhs) {
  std::uint64_t a = lhs.mask_;
  std::uint64_t b = rhs.mask_;
  while (a != 0 && b != 0) {
    int x = std::countr_zero(a);
    int y = std::countr_zero(b);
    if (x != y) return x <=> y;
    a &= a - 1;
    b &= b - 1;
  }
  // A proper prefix sorts first.
  if (a == 0 && b == 0) return std::strong_ordering::equal;
  return a == 0 ? std::strong_ordering::less : std::strong_ordering::greater;
}

std::uint64_t binomial(int n, int k) {
  if (n < 0 || k < 0 || k > n) {
    throw std::domain_error("binomial(" + std::to_string(n) + ", " + std::to_string(k) +
                            ") requires 0 <= k <= n");
  }
  k = std::min(k, n - k);
  unsigned __int128 result = 1;
  for (int i = 1; i <= k; ++i) {
    // result * (n - k + i) / i stays integral at every step.
    result = result * static_cast<unsigned>(n - k + i) / static_cast<unsigned>(i);
    if (result > std::numeric_limits<std::uint64_t>::max()) {
      throw std::overflow_error("binomial coefficient overflow");
    }
  }
  return static_cast<std::uint64_t>(result);
}

std::vector<NodeSet> enumerate_subsets(int ground, int size) {
  if (ground < 0 || ground > kMaxNodes) throw std::domain_error("subset ground set out of range");
  if (size < 0 || size > ground) {
    throw std::domain_error("cannot choose " + std::to_string(size) + " of " + std::to_string(ground));
  }
  std::vector<NodeSet> out;
  out.reserve(binomial(ground, size));
  std::vector<int> idx(static_cast<std::size_t>(size));
  for (int i = 0; i < size; ++i) idx[static_cast<std::size_t>(i)] = i;
  while (true) {
    std::uint64_t mask = 0;
    for (int i : idx) mask |= std::uint64_t{1} << i;
    out.push_back(NodeSet::from_mask(mask));
    // Advance to the next combination in lexicographic order.
    int pos = size - 1;
    while (pos >= 0 && idx[static_cast<std::size_t>(pos)] == ground - size + pos) --pos;
    if (pos < 0) break;
    ++idx[static_cast<std::size_t>(pos)];
    for (int j = pos + 1; j < size; ++j) {
      idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
    }
  }
  return out;
}

std::size_t subset_rank(int ground, NodeSet subset) {
  // Combinatorial number system for lexicographic order.
  const int k = subset.size();
  std::size_t rank = 0;
  int prev = -1;
  int i = 0;
  for (int m : subset.members()) {
    for (int v = prev + 1; v < m; ++v) rank += binomial(ground - v - 1, k - i - 1);
    prev = m;
    ++i;
  }
  return rank;
}

}  // namespace cachenet
