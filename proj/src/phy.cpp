// Copyright 2026 The cachenet Authors
// SPDX-License-Identifier: Apache-2.0

#include "cachenet/phy.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <sstream>
#include <thread>

#include "cachenet/rng.hpp"

namespace cachenet {
namespace {

Complex determinant(const Eigen::MatrixXcd& m) {
  if (m.rows() == 0) return {1.0, 0.0};
  return m.determinant();
}

Eigen::MatrixXcd select(const Eigen::MatrixXcd& h, const std::vector<int>& rows, const std::vector<int>& cols) {
  Eigen::MatrixXcd out(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < cols.size(); ++c) {
      out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = h(rows[r], cols[c]);
    }
  }
  return out;
}

bool generic(const Eigen::MatrixXcd& h, double threshold, int max_order) {
  const int rows = static_cast<int>(h.rows());
  const int cols = static_cast<int>(h.cols());
  for (int k = 1; k <= max_order; ++k) {
    const auto row_sets = enumerate_subsets(rows, k);
    const auto col_sets = enumerate_subsets(cols, k);
    for (NodeSet r : row_sets) {
      const auto rm = r.members();
      for (NodeSet c : col_sets) {
        if (std::abs(determinant(select(h, rm, c.members()))) < threshold) return false;
      }
    }
  }
  return true;
}

const char* kind_name(PhyIssue::Kind kind) {
  switch (kind) {
    case PhyIssue::Kind::kZfResidual: return "zf-residual";
    case PhyIssue::Kind::kWeakDesired: return "weak-desired-gain";
    case PhyIssue::Kind::kWeakInterference: return "non-generic-interference-gain";
  }
  return "?";
}

}  // namespace

ChannelMatrix sample_channel(int k_rx, int k_tx, std::uint64_t seed, double threshold, int max_order,
                             int max_attempts) {
  if (k_rx < 1 || k_tx < 1) throw std::domain_error("channel dimensions must be positive");
  if (max_order < 0) max_order = std::min(k_rx, k_tx);
  max_order = std::min({max_order, k_rx, k_tx});
  const double sigma = std::sqrt(0.5);
  for (int attempt = 0; attempt < max_attempts; ++attempt) {
    Rng rng(seed, static_cast<std::uint64_t>(attempt));
    Eigen::MatrixXcd h(k_rx, k_tx);
    for (int j = 0; j < k_rx; ++j) {
      for (int i = 0; i < k_tx; ++i) {
        const double re = sigma * rng.normal();
        const double im = sigma * rng.normal();
        h(j, i) = Complex(re, im);
      }
    }
    if (generic(h, threshold, max_order)) return ChannelMatrix(std::move(h), seed, attempt);
  }
  throw SamplingError("no generic channel after " + std::to_string(max_attempts) + " draws for seed " +
                      std::to_string(seed));
}

Complex minor(const ChannelMatrix& h, NodeSet rows_removed, NodeSet cols_removed) {
  const NodeSet rows = NodeSet::first(h.k_rx()).minus(rows_removed);
  const NodeSet cols = NodeSet::first(h.k_tx()).minus(cols_removed);
  if (rows_removed.minus(NodeSet::first(h.k_rx())).mask() || cols_removed.minus(NodeSet::first(h.k_tx())).mask()) {
    throw std::domain_error("minor: removed index outside the matrix");
  }
  if (rows.size() != cols.size()) {
    throw std::domain_error("minor: remaining submatrix is " + std::to_string(rows.size()) + "x" +
                            std::to_string(cols.size()) + ", not square");
  }
  return determinant(select(h.entries(), rows.members(), cols.members()));
}

int cofactor_sign(NodeSet rows_kept, NodeSet cols_kept) {
  int sum = 0;
  for (int r : rows_kept.members()) sum += r + 1;
  for (int c : cols_kept.members()) sum += c + 1;
  return sum % 2 == 0 ? 1 : -1;
}

PrecodingVector zf_weights(const ChannelMatrix& h, NodeSet tx_set, NodeSet zf_targets) {
  const auto tx = tx_set.members();
  const auto targets = zf_targets.members();
  if (tx.empty()) throw std::domain_error("zf_weights: empty transmitter set");
  if (targets.size() >= tx.size()) throw std::domain_error("zf_weights: need fewer targets than transmitters");

  // Null vector of the z x (z+1) system over the first z+1 transmitters:
  // w_k = (-1)^k det(A without column k).
  const std::size_t active = targets.size() + 1;
  const std::vector<int> used(tx.begin(), tx.begin() + static_cast<std::ptrdiff_t>(active));
  const Eigen::MatrixXcd a = select(h.entries(), targets, used);

  PrecodingVector p;
  p.tx_set = tx_set;
  p.weights.assign(tx.size(), Complex{0.0, 0.0});
  double largest = 0.0;
  double entry_scale = 1.0;
  for (std::size_t k = 0; k < active; ++k) {
    std::vector<int> keep;
    for (std::size_t c = 0; c < active; ++c) {
      if (c != k) keep.push_back(static_cast<int>(c));
    }
    Eigen::MatrixXcd sub(a.rows(), static_cast<Eigen::Index>(keep.size()));
    for (std::size_t c = 0; c < keep.size(); ++c) sub.col(static_cast<Eigen::Index>(c)) = a.col(keep[c]);
    const Complex w = (k % 2 == 0 ? 1.0 : -1.0) * determinant(sub);
    p.weights[k] = w;
    largest = std::max(largest, std::abs(w));
  }
  if (a.size() > 0) entry_scale = std::pow(a.cwiseAbs().maxCoeff(), static_cast<double>(targets.size()));
  if (largest <= 1e-12 * entry_scale || largest == 0.0) {
    throw SamplingError("zero-forcing system for tx " + tx_set.str() + " targets " + zf_targets.str() +
                        " is rank deficient; re-sample the channel");
  }
  for (auto& w : p.weights) w /= largest;
  p.scale = largest;
  return p;
}

double GainVector::max_abs() const {
  double m = 0.0;
  for (const auto& g : gains) m = std::max(m, std::abs(g));
  return m;
}

GainVector equivalent_gains(const ChannelMatrix& h, const PrecodingVector& p) {
  const auto tx = p.tx_set.members();
  if (tx.size() != p.weights.size()) throw std::domain_error("precoder weight count does not match its transmitter set");
  GainVector out;
  out.gains.assign(static_cast<std::size_t>(h.k_rx()), Complex{0.0, 0.0});
  for (int j = 0; j < h.k_rx(); ++j) {
    Complex sum{0.0, 0.0};
    for (std::size_t k = 0; k < tx.size(); ++k) sum += h(j, tx[k]) * p.weights[k];
    out.gains[static_cast<std::size_t>(j)] = sum;
  }
  return out;
}

Complex zf_gain_minor(const ChannelMatrix& h, NodeSet tx_set, int target, int receiver) {
  const NodeSet rows_kept = NodeSet{target, receiver};
  return minor(h, NodeSet::first(h.k_rx()).minus(rows_kept), NodeSet::first(h.k_tx()).minus(tx_set));
}

std::string PhyViolation::str() const {
  std::ostringstream os;
  os << "block " << entry.block + 1 << " " << entry.subfile.str() << " -> Rx" << entry.dest + 1 << " zf="
     << entry.zf_targets.str() << ":";
  for (const auto& issue : issues) {
    os << ' ' << kind_name(issue.kind) << "@Rx" << issue.receiver + 1 << "(rel=" << issue.relative << ")";
  }
  return os.str();
}

void PhyReport::merge(const PhyReport& other) {
  entries += other.entries;
  zf_checks += other.zf_checks;
  ic_flagged += other.ic_flagged;
  aligned_assumed += other.aligned_assumed;
  max_zf_residual = std::max(max_zf_residual, other.max_zf_residual);
  violations.insert(violations.end(), other.violations.begin(), other.violations.end());
}

PhyReport verify_block_phy(const ChannelMatrix& h, const std::vector<ScheduledSubfile>& block,
                           const PhyTolerance& tol) {
  std::vector<PrecodingVector> precoders;
  precoders.reserve(block.size());
  for (const auto& e : block) precoders.push_back(zf_weights(h, e.subfile.tx_set, e.zf_targets));
  return verify_block_phy(h, block, precoders, tol);
}

PhyReport verify_block_phy(const ChannelMatrix& h, const std::vector<ScheduledSubfile>& block,
                           const std::vector<PrecodingVector>& precoders, const PhyTolerance& tol) {
  if (precoders.size() != block.size()) throw std::domain_error("one precoder per scheduled entry is required");
  PhyReport report;
  for (std::size_t n = 0; n < block.size(); ++n) {
    const auto& e = block[n];
    const GainVector g = equivalent_gains(h, precoders[n]);
    const double peak = g.max_abs();
    PhyViolation violation{e, {}};
    ++report.entries;
    for (int j = 0; j < h.k_rx(); ++j) {
      const double rel = peak > 0.0 ? std::abs(g.gains[static_cast<std::size_t>(j)]) / peak : 0.0;
      if (e.zf_targets.contains(j)) {
        ++report.zf_checks;
        report.max_zf_residual = std::max(report.max_zf_residual, rel);
        if (!(rel < tol.zf_relative)) violation.issues.push_back({PhyIssue::Kind::kZfResidual, j, rel});
      } else if (e.subfile.rx_set.contains(j)) {
        ++report.ic_flagged;
      } else if (j == e.dest) {
        if (!(rel > tol.genericity_relative)) violation.issues.push_back({PhyIssue::Kind::kWeakDesired, j, rel});
      } else {
        ++report.aligned_assumed;
        if (!(rel > tol.genericity_relative)) {
          violation.issues.push_back({PhyIssue::Kind::kWeakInterference, j, rel});
        }
      }
    }
    if (!violation.issues.empty()) report.violations.push_back(std::move(violation));
  }
  return report;
}

ChannelSweepReport verify_plans_over_channels(const std::vector<DeliveryPlan>& plans, int k_tx,
                                              std::uint64_t first_seed, int count, const PhyTolerance& tol) {
  ChannelSweepReport out;
  out.first_seed = first_seed;
  if (plans.empty() || count <= 0) return out;
  const int k_rx = plans.front().k_rx;

  auto run_seed = [&](std::uint64_t seed) {
    const ChannelMatrix h = sample_channel(k_rx, k_tx, seed);
    PhyReport report;
    for (const auto& plan : plans) {
      for (const auto& block : plan.blocks) report.merge(verify_block_phy(h, block, tol));
    }
    return report;
  };

  const unsigned workers = std::max(1U, std::min(8U, std::thread::hardware_concurrency()));
  std::vector<PhyReport> results(static_cast<std::size_t>(count));
  for (int start = 0; start < count; start += static_cast<int>(workers)) {
    std::vector<std::future<PhyReport>> batch;
    const int stop = std::min(count, start + static_cast<int>(workers));
    for (int s = start; s < stop; ++s) {
      batch.push_back(std::async(std::launch::async, run_seed, first_seed + static_cast<std::uint64_t>(s)));
    }
    for (int s = start; s < stop; ++s) results[static_cast<std::size_t>(s)] = batch[static_cast<std::size_t>(s - start)].get();
  }
  for (const auto& r : results) {
    out.violations_per_seed.push_back(r.violations.size());
    out.merged.merge(r);
  }
  return out;
}

}  // namespace cachenet
