// Copyright 2026 The cachenet Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cachenet/network.hpp"

namespace cachenet {

/// Coordinated placement: every file is split into C(K_T,t_T)*C(K_R,t_R)
/// equal subfiles A_{X,Y}, with |X| = t_T and |Y| = t_R.
struct CentralizedPlacement {
  NetworkConfig cfg;
  int t_tx = 0;
  int t_rx = 0;
  /// Subfiles of every file, file-major then (tx_set, rx_set) lexicographic.
  std::vector<SubfileId> subfiles;
  std::vector<std::vector<SubfileId>> tx_cache;  ///< indexed by transmitter
  std::vector<std::vector<SubfileId>> rx_cache;  ///< indexed by receiver
  Rational subfile_fraction;                     ///< size of one subfile relative to F

  std::size_t subfiles_per_file() const { return subfiles.size() / static_cast<std::size_t>(cfg.n_files()); }
  /// Cached amount at a node, in files.
  Rational tx_load(int transmitter) const;
  Rational rx_load(int receiver) const;
};

/// Throws MemorySharingRequired when t_T or t_R is not an integer.
CentralizedPlacement place_centralized(const NetworkConfig& cfg);

/// One transmitter partition of a file under decentralized placement.
struct PartitionId {
  int file = 0;
  NodeSet tx_set;
  friend bool operator==(const PartitionId&, const PartitionId&) = default;
};

/// Transmitters hold C(K_T,t_T) equal partitions per file (each at t_T
/// transmitters); every receiver independently stores floor(M_R*F/N)
/// uniformly chosen bits of every file.
struct DecentralizedPlacement {
  NetworkConfig cfg;
  int t_tx = 0;
  std::uint64_t seed = 0;
  std::uint64_t file_bits = 0;     ///< F as configured
  std::uint64_t padded_bits = 0;   ///< F rounded up to a multiple of C(K_T,t_T)
  std::uint64_t partition_bits = 0;
  std::uint64_t cached_bits_per_file = 0;  ///< floor(M_R*F/N)
  std::vector<NodeSet> partitions;          ///< tx sets, lexicographic
  std::vector<std::vector<PartitionId>> tx_cache;
  /// rx_bits[receiver * N + file][bit] is true when the receiver stores the bit.
  std::vector<std::vector<bool>> rx_bits;

  const std::vector<bool>& cached(int receiver, int file) const {
    return rx_bits[static_cast<std::size_t>(receiver * cfg.n_files() + file)];
  }
  /// Index into `partitions` of the partition that holds `bit`.
  std::size_t partition_of(std::uint64_t bit) const { return bit / partition_bits; }
  /// Receivers that store `bit` of `file`.
  NodeSet holders(int file, std::uint64_t bit) const;
};

/// Throws ConfigError if the config has no file length and
/// MemorySharingRequired for non-integral t_T.
DecentralizedPlacement place_decentralized(const NetworkConfig& cfg, std::uint64_t seed);

/// Bit counts of one file grouped by (tx partition, exact holder set).
struct SubsetProfile {
  struct Entry {
    NodeSet tx_set;
    NodeSet rx_set;
    std::uint64_t bits = 0;
  };
  int file = 0;
  /// Every (partition, rx subset) class, including empty ones, ordered by
  /// partition then rx mask.
  std::vector<Entry> entries;

  std::uint64_t bits(NodeSet tx_set, NodeSet rx_set) const;
  std::uint64_t total() const;
};

SubsetProfile subset_profile(const DecentralizedPlacement& placement, int file);

/// Number of subfile classes per file: C(K_T,t_T) * 2^K_R.
std::uint64_t subfile_class_count(const NetworkConfig& cfg);

/// Expected share of a file held by one specific set of exactly `t`
/// receivers: (M_R/N)^t (1 - M_R/N)^(K_R - t).
Rational expected_fraction(const NetworkConfig& cfg, int t);

/// Line-oriented text listing of node contents.
std::string export_placement(const CentralizedPlacement& placement);
std::string export_placement(const DecentralizedPlacement& placement);

}  // namespace cachenet
