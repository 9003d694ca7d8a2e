// Copyright 2026 The cachenet Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "cachenet/network.hpp"
#include "cachenet/placement.hpp"

namespace cachenet {

/// A scheduled entry breaks a structural rule (destination already caches
/// it, ZF target overlaps the destination, wrong file, ...).
class PlanError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// One subfile transmission inside a channel block.
struct ScheduledSubfile {
  SubfileId subfile;
  int dest = 0;
  /// Receivers at which the transmitters in subfile.tx_set null this signal.
  NodeSet zf_targets;
  int block = 0;

  friend bool operator==(const ScheduledSubfile&, const ScheduledSubfile&) = default;
};

enum class PlanMode { kCentralized, kDecentralizedTier };

struct DeliveryPlan {
  PlanMode mode = PlanMode::kCentralized;
  /// Receiver-cache multiplicity served by this plan: t_R for centralized
  /// plans, |rx_set| for decentralized tiers.
  int tier = 0;
  int k_rx = 0;
  std::vector<std::vector<ScheduledSubfile>> blocks;

  std::size_t size() const;
  /// "centralized" or "decentralized-tier(t)".
  std::string mode_label() const;
};

/// Per-receiver dimension count for one block.
struct ReceiverLedger {
  int receiver = 0;
  int scheduled = 0;      ///< transmissions in the block
  int desired = 0;        ///< desired_dims: one dimension per desired subfile
  int zf_removed = 0;     ///< nulled by zero-forcing
  int ic_removed = 0;     ///< cancelled with cached content
  int interfering = 0;    ///< residual interfering transmissions
  int interfering_groups = 0;
  int aligned_dims = 0;   ///< one per interfering group

  int total_dims() const { return desired + aligned_dims; }
  /// desired / (desired + aligned); zero when the receiver has nothing due.
  Rational dof() const;
  bool conserved() const { return desired + zf_removed + ic_removed + interfering == scheduled; }
};

struct SubspaceLedger {
  int block = 0;
  std::vector<ReceiverLedger> receivers;

  /// Sum of per-receiver DoF.
  Rational sdof() const;
  bool conserved() const;
};

/// Validates and counts one block. Interfering transmissions sharing a
/// (destination, rx_set, zf_targets) label form one alignment group and
/// occupy a single dimension. Throws PlanError on a malformed entry.
SubspaceLedger account_block(const std::vector<ScheduledSubfile>& block, const DemandVector& demand);

/// Structural problems in a plan, one message per offending entry.
std::vector<std::string> validate_plan(const DeliveryPlan& plan, const DemandVector& demand);

struct PlanSummary {
  std::vector<SubspaceLedger> ledgers;
  /// Total desired subfiles over total block lengths, where a block lasts
  /// as long as its busiest receiver needs (max of total_dims).
  Rational sdof;
  /// Receivers whose aligned dimensions exceed `expected_aligned`.
  std::vector<std::string> warnings;
};

/// Accounts every block; `expected_aligned` is the per-receiver alignment
/// budget max(K_R - t_T - tier, 0) the scheme promises.
PlanSummary summarize_plan(const DeliveryPlan& plan, const DemandVector& demand, int expected_aligned);

/// max(K_R - t_T - tier, 0).
int alignment_budget(int k_rx, int t_tx, int tier);

/// Centralized delivery. Block b serves, for every receiver d, all
/// C(K_T,t_T) subfiles whose receiver set is d + S_b (cyclically), zero-forced
/// at d + Z_b, where S_b runs over the t_R-subsets of offsets {1..K_R-1}.
DeliveryPlan build_centralized_plan(const NetworkConfig& cfg, const CentralizedPlacement& placement,
                                    const DemandVector& demand);

/// Decentralized delivery, one plan per tier t = 0..K_R-1 (subfiles held by
/// exactly t other receivers). Tier K_R-1 is the pure broadcast tier.
std::vector<DeliveryPlan> build_decentralized_plan(const NetworkConfig& cfg, const DemandVector& demand);
std::vector<DeliveryPlan> build_decentralized_plan(const NetworkConfig& cfg, const DecentralizedPlacement& placement,
                                                   const DemandVector& demand);

struct CompletenessReport {
  struct Item {
    int receiver = 0;
    SubfileId subfile;
    int count = 0;  ///< times delivered
  };
  std::vector<Item> missing;
  std::vector<Item> duplicated;
  /// Entries for subfiles the destination already holds or did not ask for.
  std::vector<ScheduledSubfile> misdirected;

  bool complete() const { return missing.empty() && duplicated.empty() && misdirected.empty(); }
  std::size_t missing_for(int receiver) const;
};

/// Every demanded subfile class must be cached at its requester or
/// delivered to it exactly once.
CompletenessReport verify_completeness(const std::vector<DeliveryPlan>& plans, const std::vector<SubfileId>& universe,
                                       const DemandVector& demand);
CompletenessReport verify_completeness(const std::vector<DeliveryPlan>& plans, const CentralizedPlacement& placement,
                                       const DemandVector& demand);
CompletenessReport verify_completeness(const std::vector<DeliveryPlan>& plans, const DecentralizedPlacement& placement,
                                       const DemandVector& demand);

/// All (partition, rx subset) classes of every file.
std::vector<SubfileId> decentralized_classes(const NetworkConfig& cfg);

/// Text form, one entry per line:
///   block=<b> file=<W> tx={..} cachedRx={..} zf={..} dest=<r>
/// preceded by a "# plan ..." header. All indices are 1-based.
std::string serialize_plan(const DeliveryPlan& plan);
/// Parses one or more serialized plans. Throws PlanError with the line
/// number on malformed input.
std::vector<DeliveryPlan> parse_plans(const std::string& text);

}  // namespace cachenet
