// Copyright 2026 The cachenet Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cachenet/combinatorics.hpp"
#include "cachenet/rational.hpp"

namespace cachenet {

/// Invalid network parameters, demand vectors or run configuration.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A corner-point formula was asked for a non-integral t_T or t_R.
class MemorySharingRequired : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A replication factor K*M/N together with its integrality.
struct ReplicationFactor {
  Rational value;
  bool integral() const { return value.is_integer(); }
  int as_int() const;  ///< Throws MemorySharingRequired when not integral.
};

struct TParams {
  ReplicationFactor t_tx;
  ReplicationFactor t_rx;
};

/// The network tuple (K_T, K_R, N, M_T, M_R) and an optional file length.
/// Cache sizes are in files and may be fractional; values above the
/// library size are clamped to N.
class NetworkConfig {
 public:
  NetworkConfig(int k_tx, int k_rx, int n_files, Rational m_tx, Rational m_rx,
                std::optional<std::uint64_t> file_bits = std::nullopt);

  int k_tx() const { return k_tx_; }
  int k_rx() const { return k_rx_; }
  int n_files() const { return n_files_; }
  const Rational& m_tx() const { return m_tx_; }
  const Rational& m_rx() const { return m_rx_; }
  const std::optional<std::uint64_t>& file_bits() const { return file_bits_; }

  /// t_T = K_T * M_T / N.
  ReplicationFactor t_tx() const { return {Rational(k_tx_) * m_tx_ / n_files_}; }
  /// t_R = K_R * M_R / N.
  ReplicationFactor t_rx() const { return {Rational(k_rx_) * m_rx_ / n_files_}; }
  /// M_R / N, the fraction of every file each receiver stores.
  Rational rx_fraction() const { return m_rx_ / n_files_; }

  NetworkConfig with_m_rx(Rational m_rx) const;
  NetworkConfig with_m_tx(Rational m_tx) const;
  NetworkConfig with_file_bits(std::uint64_t bits) const;

  /// "kt=4 kr=4 n=4 mt=2 mr=1".
  std::string str() const;

  friend bool operator==(const NetworkConfig&, const NetworkConfig&) = default;

 private:
  int k_tx_;
  int k_rx_;
  int n_files_;
  Rational m_tx_;
  Rational m_rx_;
  std::optional<std::uint64_t> file_bits_;
};

TParams derive_t_params(const NetworkConfig& cfg);

/// A piece of one file, identified by where it is cached. Files and nodes
/// are 0-based.
struct SubfileId {
  int file = 0;
  NodeSet tx_set;
  NodeSet rx_set;

  friend bool operator==(const SubfileId&, const SubfileId&) = default;
  friend auto operator<=>(const SubfileId&, const SubfileId&) = default;

  /// Display form "W1_{12,2}" with 1-based labels.
  std::string str() const;
};

/// Requested file per receiver, 0-based.
class DemandVector {
 public:
  DemandVector(std::vector<int> files, int n_files);

  /// (0, 1, ..., K_R-1) mod N.
  static DemandVector distinct_default(int k_rx, int n_files);

  int operator[](int receiver) const { return files_[static_cast<std::size_t>(receiver)]; }
  int size() const { return static_cast<int>(files_.size()); }
  const std::vector<int>& files() const { return files_; }
  /// True when every receiver asks for a different file.
  bool worst_case() const;
  /// 1-based comma list, "1,2,3,4".
  std::string str() const;

  friend bool operator==(const DemandVector&, const DemandVector&) = default;

 private:
  std::vector<int> files_;
};

}  // namespace cachenet
