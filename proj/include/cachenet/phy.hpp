// Copyright 2026 The cachenet Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "cachenet/delivery.hpp"

namespace cachenet {

using Complex = std::complex<double>;

/// No generic channel found within the retry budget, or a ZF system is
/// rank deficient on the given matrix.
class SamplingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// K_R x K_T matrix of complex gains h(j, i) from transmitter i to receiver j.
class ChannelMatrix {
 public:
  ChannelMatrix(Eigen::MatrixXcd entries, std::uint64_t seed = 0, int attempt = 0)
      : h_(std::move(entries)), seed_(seed), attempt_(attempt) {}

  int k_rx() const { return static_cast<int>(h_.rows()); }
  int k_tx() const { return static_cast<int>(h_.cols()); }
  Complex operator()(int receiver, int transmitter) const { return h_(receiver, transmitter); }
  const Eigen::MatrixXcd& entries() const { return h_; }
  std::uint64_t seed() const { return seed_; }
  /// Re-draws needed before the genericity check passed.
  int attempt() const { return attempt_; }

 private:
  Eigen::MatrixXcd h_;
  std::uint64_t seed_;
  int attempt_;
};

/// Entry distribution used by sample_channel.
inline constexpr const char* kChannelDistribution = "CN(0,1): real and imaginary parts i.i.d. N(0,1/2)";

/// Draws i.i.d. CN(0,1) entries, redrawing (up to `max_attempts`) until
/// every square minor of order <= max_order has magnitude >= threshold.
/// max_order < 0 means min(K_R, K_T).
ChannelMatrix sample_channel(int k_rx, int k_tx, std::uint64_t seed, double threshold = 1e-9, int max_order = -1,
                             int max_attempts = 64);

/// Determinant of H with the given rows and columns deleted (no cofactor
/// sign). The remaining submatrix must be square.
Complex minor(const ChannelMatrix& h, NodeSet rows_removed, NodeSet cols_removed);

/// (-1)^(sum of kept row and column positions, 1-based): the Laplace sign
/// that turns minor(H, rows_removed, cols_removed) into a signed cofactor.
int cofactor_sign(NodeSet rows_kept, NodeSet cols_kept);

/// Transmit weights of one subfile over its transmitter set.
struct PrecodingVector {
  NodeSet tx_set;
  /// weights[k] belongs to the k-th member of tx_set; max magnitude is 1.
  std::vector<Complex> weights;
  /// Factor removed during normalization: raw cofactor weights = weights * scale.
  double scale = 1.0;
};

/// Weights in the null space of H[zf_targets, tx_set], built from signed
/// cofactors. For two transmitters {i1, i2} and target z this is
/// (h(z,i2), -h(z,i1)). With fewer targets than |tx_set| - 1 only the first
/// |zf_targets| + 1 transmitters are used. Throws SamplingError when the
/// system is rank deficient.
PrecodingVector zf_weights(const ChannelMatrix& h, NodeSet tx_set, NodeSet zf_targets);

struct GainVector {
  std::vector<Complex> gains;  ///< per receiver
  double max_abs() const;
};

/// gain(j) = sum over i in tx_set of h(j, i) * weight(i).
GainVector equivalent_gains(const ChannelMatrix& h, const PrecodingVector& p);

/// Minor with rows {receiver, target} and columns tx_set kept: the
/// equivalent gain of a two-transmitter ZF subfile, up to sign.
Complex zf_gain_minor(const ChannelMatrix& h, NodeSet tx_set, int target, int receiver);

struct PhyTolerance {
  double zf_relative = 1e-9;          ///< |gain at ZF target| / max |gain|
  double genericity_relative = 1e-9;  ///< lower bound at destination / interfered receivers
};

struct PhyIssue {
  enum class Kind { kZfResidual, kWeakDesired, kWeakInterference };
  Kind kind;
  int receiver = 0;
  double relative = 0.0;
};

/// Everything wrong with one scheduled entry.
struct PhyViolation {
  ScheduledSubfile entry;
  std::vector<PhyIssue> issues;
  std::string str() const;
};

struct PhyReport {
  std::size_t entries = 0;
  std::size_t zf_checks = 0;
  std::size_t ic_flagged = 0;          ///< gains at caching receivers, not asserted
  std::size_t aligned_assumed = 0;     ///< interfering (entry, receiver) pairs left to alignment
  double max_zf_residual = 0.0;
  std::vector<PhyViolation> violations;

  bool ok() const { return violations.empty(); }
  void merge(const PhyReport& other);
};

/// Checks one block with the precoders a transmitter would compute from
/// the plan.
PhyReport verify_block_phy(const ChannelMatrix& h, const std::vector<ScheduledSubfile>& block,
                           const PhyTolerance& tol = {});
/// Same, with explicitly supplied precoders (one per entry).
PhyReport verify_block_phy(const ChannelMatrix& h, const std::vector<ScheduledSubfile>& block,
                           const std::vector<PrecodingVector>& precoders, const PhyTolerance& tol = {});

struct ChannelSweepReport {
  PhyReport merged;
  std::vector<std::size_t> violations_per_seed;
  std::uint64_t first_seed = 0;
};

/// Runs verify_block_phy on every block of every plan for channel seeds
/// first_seed .. first_seed + count - 1. Seeds are processed concurrently;
/// results are merged in seed order.
ChannelSweepReport verify_plans_over_channels(const std::vector<DeliveryPlan>& plans, int k_tx,
                                              std::uint64_t first_seed, int count, const PhyTolerance& tol = {});

}  // namespace cachenet
