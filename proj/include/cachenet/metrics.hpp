// Copyright 2026 The cachenet Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cachenet/delivery.hpp"
#include "cachenet/network.hpp"
#include "cachenet/placement.hpp"

namespace cachenet {

struct DofReport {
  Rational proposed;
  Rational baseline;
  Rational per_user;  ///< proposed / K_R
  bool capped = false;
};

/// Achievable centralized sDoF with ZF, IC and alignment:
///   min{ C(K_T,t_T) K_R / (C(K_T,t_T) + K_R - t_T - t_R), K_R }.
/// When K_R - t_T - t_R <= 0 no residual interference is left and the value
/// is K_R. Needs integral t_T >= 1 and t_R.
Rational sdof_closed_form(const NetworkConfig& cfg);
/// True when the K_R cap binds (including exact ties).
bool sdof_closed_form_capped(const NetworkConfig& cfg);

/// ZF + IC only: min{t_T + t_R, K_R}.
Rational sdof_baseline(const NetworkConfig& cfg);

DofReport dof_report(const NetworkConfig& cfg);

/// Closed-form decentralized NDT, evaluated term by term as published
/// (including the M_R < 1 correction term). Needs integral t_T.
Rational ndt_closed_form(const NetworkConfig& cfg);

struct TierContribution {
  int tier = 0;
  Rational bits;  ///< delivered bits in the tier, in units of F
  Rational sdof;  ///< from the tier's ledger
  Rational ndt;   ///< bits / sdof
};

struct NdtOracle {
  Rational value;
  std::vector<TierContribution> tiers;
};

/// Scheme-derived NDT: sum over tier plans of (tier bits / F) / (ledger
/// sDoF). Bits use the asymptotic subfile-size law. Throws PlanError if the
/// plans are incomplete.
NdtOracle ndt_oracle(const NetworkConfig& cfg, const std::vector<DeliveryPlan>& plans, const DemandVector& demand);
/// Same accounting with the actual bit counts of one finite placement.
NdtOracle ndt_oracle(const NetworkConfig& cfg, const std::vector<DeliveryPlan>& plans,
                     const DecentralizedPlacement& placement, const DemandVector& demand);

struct MonteCarloNdt {
  std::vector<double> samples;  ///< one per seed, in seed order
  double mean = 0.0;
  double stderr_ = 0.0;
  std::uint64_t first_seed = 0;
};

/// Finite-F oracle over placements seeded first_seed .. first_seed+count-1.
/// The config must carry file_bits.
MonteCarloNdt ndt_monte_carlo(const NetworkConfig& cfg, const DemandVector& demand, std::uint64_t first_seed,
                              int count);

enum class CentralizedScheme { kProposed, kBaseline };

/// K_R (1 - M_R/N) / sDoF: non-cached demand over the sum rate.
Rational ndt_centralized(const NetworkConfig& cfg, CentralizedScheme scheme);

using CornerPoint = std::pair<Rational, Rational>;

/// Value at m_query on the lower convex envelope of the corner points.
/// Throws std::domain_error outside [min m, max m] or with < 2 distinct m.
Rational memory_share(std::vector<CornerPoint> points, const Rational& m_query);

struct SweepRow {
  Rational axis;
  Rational proposed;
  Rational baseline;
};

enum class Figure { kInverseSdof, kNdt };

/// Rows over M_R values. kInverseSdof: 1/sDoF for the proposed scheme and
/// the ZF+IC baseline. kNdt: decentralized closed form and centralized
/// baseline NDT. Non-integral corner parameters are memory-shared.
std::vector<SweepRow> sweep_figure(const NetworkConfig& tmpl, Figure figure, const std::vector<Rational>& m_rx_values);

/// CSV with decimal columns (12 digits), LF endings.
std::string sweep_csv(Figure figure, const std::vector<SweepRow>& rows);
/// Same rows with exact p/q values.
std::string sweep_exact_csv(Figure figure, const std::vector<SweepRow>& rows);

/// The decentralized 3x3 worked example (K_T=K_R=N=3, M_T=2, M_R=1) as
/// printed: stated value, value of the printed expression, closed form and
/// scheme oracle.
struct PublishedExample {
  Rational stated;
  Rational inline_expression;
  Rational formula;
  Rational oracle;
  bool consistent() const { return stated == inline_expression && stated == formula; }
};

bool is_published_example(const NetworkConfig& cfg);
PublishedExample published_example_check();

struct NdtReport {
  Rational formula;
  NdtOracle oracle;
  std::optional<MonteCarloNdt> monte_carlo;
  bool agree() const { return formula == oracle.value; }
};

NdtReport ndt_report(const NetworkConfig& cfg, const DemandVector& demand, std::optional<std::uint64_t> mc_first_seed,
                     int mc_seeds);

}  // namespace cachenet
