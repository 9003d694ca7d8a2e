// Copyright 2026 The cachenet Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace cachenet {

/// Seedable generator with a fixed, documented algorithm. The engine is
/// std::mt19937_64, whose output sequence the standard pins down exactly;
/// the bounded-integer and Gaussian transforms are implemented here so that
/// results do not depend on the standard library vendor.
class Rng {
 public:
  static constexpr std::string_view kAlgorithm = "mt19937_64/splitmix64-seeded";

  /// `stream` selects an independent sequence for the same user seed.
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0);

  std::uint64_t next_u64() { return engine_(); }
  /// Uniform integer in [0, bound). Rejection sampling, so unbiased.
  std::uint64_t below(std::uint64_t bound);
  /// Uniform double in [0, 1) with 53 random bits.
  double uniform01();
  /// Standard normal sample (Box-Muller, both outputs used).
  double normal();

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// SplitMix64 finaliser; used to derive well-separated engine seeds.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace cachenet
