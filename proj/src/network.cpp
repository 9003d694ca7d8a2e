// Copyright 2026 The cachenet Authors
// SPDX-License-Identifier: Apache-2.0

#include "cachenet/network.hpp"

#include <set>
#include <sstream>

namespace cachenet {

int ReplicationFactor::as_int() const {
  if (!integral()) {
    throw MemorySharingRequired("replication factor " + value.str() +
                                " is not an integer; evaluate the neighbouring integer corner "
                                "points and combine them with memory sharing");
  }
  return static_cast<int>(value.num());
}

NetworkConfig::NetworkConfig(int k_tx, int k_rx, int n_files, Rational m_tx, Rational m_rx,
                             std::optional<std::uint64_t> file_bits)
    : k_tx_(k_tx), k_rx_(k_rx), n_files_(n_files), m_tx_(m_tx), m_rx_(m_rx), file_bits_(file_bits) {
  if (k_tx < 1 || k_tx > kMaxNodes) throw ConfigError("transmitter count must be in [1, 32]");
  if (k_rx < 1 || k_rx > kMaxNodes) throw ConfigError("receiver count must be in [1, 32]");
  if (n_files < 1) throw ConfigError("library must contain at least one file");
  if (m_tx < 0) throw ConfigError("transmitter cache size must be non-negative");
  if (m_rx < 0) throw ConfigError("receiver cache size must be non-negative");
  if (file_bits && *file_bits == 0) throw ConfigError("file length must be positive");
  m_tx_ = min(m_tx_, Rational(n_files));
  m_rx_ = min(m_rx_, Rational(n_files));
  if (Rational(k_tx) * m_tx_ + m_rx_ < n_files) {
    throw ConfigError("infeasible caches: need K_T*M_T + M_R >= N (got " +
                      (Rational(k_tx) * m_tx_ + m_rx_).str() + " < " + std::to_string(n_files) + ")");
  }
}

NetworkConfig NetworkConfig::with_m_rx(Rational m_rx) const {
  return {k_tx_, k_rx_, n_files_, m_tx_, m_rx, file_bits_};
}

NetworkConfig NetworkConfig::with_m_tx(Rational m_tx) const {
  return {k_tx_, k_rx_, n_files_, m_tx, m_rx_, file_bits_};
}

NetworkConfig NetworkConfig::with_file_bits(std::uint64_t bits) const {
  return {k_tx_, k_rx_, n_files_, m_tx_, m_rx_, bits};
}

std::string NetworkConfig::str() const {
  std::ostringstream os;
  os << "kt=" << k_tx_ << " kr=" << k_rx_ << " n=" << n_files_ << " mt=" << m_tx_ << " mr=" << m_rx_;
  if (file_bits_) os << " file_bits=" << *file_bits_;
  return os.str();
}

TParams derive_t_params(const NetworkConfig& cfg) { return {cfg.t_tx(), cfg.t_rx()}; }

std::string SubfileId::str() const {
  return "W" + std::to_string(file + 1) + "_{" + tx_set.label() + "," + rx_set.label() + "}";
}

DemandVector::DemandVector(std::vector<int> files, int n_files) : files_(std::move(files)) {
  if (files_.empty()) throw ConfigError("demand vector is empty");
  for (int f : files_) {
    if (f < 0 || f >= n_files) {
      throw ConfigError("demanded file " + std::to_string(f + 1) + " outside library of " +
                        std::to_string(n_files));
    }
  }
}

DemandVector DemandVector::distinct_default(int k_rx, int n_files) {
  std::vector<int> files(static_cast<std::size_t>(k_rx));
  for (int j = 0; j < k_rx; ++j) files[static_cast<std::size_t>(j)] = j % n_files;
  return {std::move(files), n_files};
}

bool DemandVector::worst_case() const {
  return std::set<int>(files_.begin(), files_.end()).size() == files_.size();
}

std::string DemandVector::str() const {
  std::string out;
  for (std::size_t i = 0; i < files_.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(files_[i] + 1);
  }
  return out;
}

}  // namespace cachenet
