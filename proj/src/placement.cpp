// Copyright 2026 The cachenet Authors
// SPDX-License-Identifier: Apache-2.0

#include "cachenet/placement.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "cachenet/rng.hpp"

namespace cachenet {

Rational CentralizedPlacement::tx_load(int transmitter) const {
  return Rational(static_cast<std::int64_t>(tx_cache[static_cast<std::size_t>(transmitter)].size())) *
         subfile_fraction;
}

Rational CentralizedPlacement::rx_load(int receiver) const {
  return Rational(static_cast<std::int64_t>(rx_cache[static_cast<std::size_t>(receiver)].size())) *
         subfile_fraction;
}

CentralizedPlacement place_centralized(const NetworkConfig& cfg) {
  CentralizedPlacement p{cfg, cfg.t_tx().as_int(), cfg.t_rx().as_int(), {}, {}, {}, {}};
  const auto tx_sets = enumerate_subsets(cfg.k_tx(), p.t_tx);
  const auto rx_sets = enumerate_subsets(cfg.k_rx(), p.t_rx);
  p.subfile_fraction = Rational(1, static_cast<std::int64_t>(tx_sets.size() * rx_sets.size()));
  p.tx_cache.resize(static_cast<std::size_t>(cfg.k_tx()));
  p.rx_cache.resize(static_cast<std::size_t>(cfg.k_rx()));

  for (int file = 0; file < cfg.n_files(); ++file) {
    for (NodeSet x : tx_sets) {
      for (NodeSet y : rx_sets) {
        SubfileId id{file, x, y};
        p.subfiles.push_back(id);
        for (int i : x.members()) p.tx_cache[static_cast<std::size_t>(i)].push_back(id);
        for (int j : y.members()) p.rx_cache[static_cast<std::size_t>(j)].push_back(id);
      }
    }
  }
  return p;
}

NodeSet DecentralizedPlacement::holders(int file, std::uint64_t bit) const {
  NodeSet out;
  for (int j = 0; j < cfg.k_rx(); ++j) {
    if (cached(j, file)[bit]) out = out.with(j);
  }
  return out;
}

DecentralizedPlacement place_decentralized(const NetworkConfig& cfg, std::uint64_t seed) {
  if (!cfg.file_bits()) throw ConfigError("decentralized placement needs a finite file length");
  if (*cfg.file_bits() > 0xFFFFFFFFULL) throw ConfigError("file length above 2^32 bits is not supported");
  DecentralizedPlacement p{cfg, 0, 0, 0, 0, 0, 0, {}, {}, {}};
  p.t_tx = cfg.t_tx().as_int();
  p.seed = seed;
  p.file_bits = *cfg.file_bits();
  p.partitions = enumerate_subsets(cfg.k_tx(), p.t_tx);

  const std::uint64_t n_parts = p.partitions.size();
  p.padded_bits = (p.file_bits + n_parts - 1) / n_parts * n_parts;
  p.partition_bits = p.padded_bits / n_parts;
  p.cached_bits_per_file = (Rational(static_cast<std::int64_t>(p.file_bits)) * cfg.rx_fraction()).floor();

  p.tx_cache.resize(static_cast<std::size_t>(cfg.k_tx()));
  for (int file = 0; file < cfg.n_files(); ++file) {
    for (NodeSet x : p.partitions) {
      for (int i : x.members()) p.tx_cache[static_cast<std::size_t>(i)].push_back({file, x});
    }
  }

  // One generator per placement, consumed receiver-major then file-major.
  // Each draw is a partial Fisher-Yates shuffle over the F real bits.
  Rng rng(seed);
  const std::uint64_t F = p.file_bits;
  const std::uint64_t k = p.cached_bits_per_file;
  std::vector<std::uint32_t> order(F);
  p.rx_bits.reserve(static_cast<std::size_t>(cfg.k_rx() * cfg.n_files()));
  for (int j = 0; j < cfg.k_rx(); ++j) {
    for (int file = 0; file < cfg.n_files(); ++file) {
      std::iota(order.begin(), order.end(), std::uint32_t{0});
      std::vector<bool> bits(F, false);
      for (std::uint64_t i = 0; i < k; ++i) {
        std::uint64_t pick = i + rng.below(F - i);
        std::swap(order[i], order[pick]);
        bits[order[i]] = true;
      }
      p.rx_bits.push_back(std::move(bits));
    }
  }
  return p;
}

std::uint64_t SubsetProfile::bits(NodeSet tx_set, NodeSet rx_set) const {
  for (const auto& e : entries) {
    if (e.tx_set == tx_set && e.rx_set == rx_set) return e.bits;
  }
  return 0;
}

std::uint64_t SubsetProfile::total() const {
  std::uint64_t sum = 0;
  for (const auto& e : entries) sum += e.bits;
  return sum;
}

SubsetProfile subset_profile(const DecentralizedPlacement& placement, int file) {
  if (file < 0 || file >= placement.cfg.n_files()) throw ConfigError("file index out of range");
  const int k_rx = placement.cfg.k_rx();
  if (k_rx > 20) throw ConfigError("receiver-subset profile limited to 20 receivers");
  const std::size_t n_masks = std::size_t{1} << k_rx;
  std::vector<std::uint64_t> counts(placement.partitions.size() * n_masks, 0);

  std::vector<const std::vector<bool>*> rows;
  for (int j = 0; j < k_rx; ++j) rows.push_back(&placement.cached(j, file));
  for (std::uint64_t bit = 0; bit < placement.file_bits; ++bit) {
    std::uint64_t mask = 0;
    for (int j = 0; j < k_rx; ++j) {
      if ((*rows[static_cast<std::size_t>(j)])[bit]) mask |= std::uint64_t{1} << j;
    }
    ++counts[placement.partition_of(bit) * n_masks + mask];
  }

  SubsetProfile profile;
  profile.file = file;
  profile.entries.reserve(counts.size());
  for (std::size_t part = 0; part < placement.partitions.size(); ++part) {
    for (std::size_t mask = 0; mask < n_masks; ++mask) {
      profile.entries.push_back({placement.partitions[part], NodeSet::from_mask(mask), counts[part * n_masks + mask]});
    }
  }
  return profile;
}

std::uint64_t subfile_class_count(const NetworkConfig& cfg) {
  const int t_tx = cfg.t_tx().as_int();
  std::uint64_t rx_classes = 0;
  for (int j = 0; j <= cfg.k_rx(); ++j) rx_classes += binomial(cfg.k_rx(), j);
  return binomial(cfg.k_tx(), t_tx) * rx_classes;
}

Rational expected_fraction(const NetworkConfig& cfg, int t) {
  if (t < 0 || t > cfg.k_rx()) throw std::domain_error("holder count outside [0, K_R]");
  const Rational p = cfg.rx_fraction();
  return pow(p, static_cast<unsigned>(t)) * pow(Rational(1) - p, static_cast<unsigned>(cfg.k_rx() - t));
}

std::string export_placement(const CentralizedPlacement& placement) {
  std::ostringstream os;
  os << "# placement centralized " << placement.cfg.str() << " t_tx=" << placement.t_tx
     << " t_rx=" << placement.t_rx << " subfile_fraction=" << placement.subfile_fraction << '\n';
  auto emit = [&os](const std::string& node, const std::vector<SubfileId>& items) {
    for (const auto& id : items) {
      os << "node=" << node << " file=" << id.file + 1 << " txset=" << id.tx_set.str()
         << " rxset=" << id.rx_set.str() << '\n';
    }
  };
  for (std::size_t i = 0; i < placement.tx_cache.size(); ++i) emit("tx" + std::to_string(i + 1), placement.tx_cache[i]);
  for (std::size_t j = 0; j < placement.rx_cache.size(); ++j) emit("rx" + std::to_string(j + 1), placement.rx_cache[j]);
  return os.str();
}

std::string export_placement(const DecentralizedPlacement& placement) {
  std::ostringstream os;
  os << "# placement decentralized " << placement.cfg.str() << " t_tx=" << placement.t_tx
     << " seed=" << placement.seed << " rng=" << Rng::kAlgorithm << " padded_bits=" << placement.padded_bits
     << " cached_bits_per_file=" << placement.cached_bits_per_file << '\n';
  for (std::size_t i = 0; i < placement.tx_cache.size(); ++i) {
    for (const auto& part : placement.tx_cache[i]) {
      const std::size_t idx = subset_rank(placement.cfg.k_tx(), part.tx_set);
      const std::uint64_t lo = idx * placement.partition_bits;
      const std::uint64_t hi = std::min(lo + placement.partition_bits, placement.file_bits);
      os << "node=tx" << i + 1 << " file=" << part.file + 1 << " txset=" << part.tx_set.str() << " bits=";
      if (hi > lo) os << lo << '-' << hi - 1;
      os << '\n';
    }
  }
  // Cached bits as inclusive index ranges.
  for (int j = 0; j < placement.cfg.k_rx(); ++j) {
    for (int file = 0; file < placement.cfg.n_files(); ++file) {
      const auto& bits = placement.cached(j, file);
      os << "node=rx" << j + 1 << " file=" << file + 1 << " bits=";
      bool first = true;
      for (std::uint64_t b = 0; b < bits.size();) {
        if (!bits[b]) {
          ++b;
          continue;
        }
        std::uint64_t e = b;
        while (e + 1 < bits.size() && bits[e + 1]) ++e;
        if (!first) os << ',';
        os << b;
        if (e != b) os << '-' << e;
        first = false;
        b = e + 1;
      }
      os << '\n';
    }
  }
  return os.str();
}

}  // namespace cachenet
