// Copyright 2026 The cachenet Authors
// SPDX-License-Identifier: Apache-2.0

#include "cachenet/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <sstream>
#include <thread>

namespace cachenet {
namespace {

struct Corner {
  int t_tx;
  int t_rx;
  Rational binom;
};

Corner corner(const NetworkConfig& cfg) {
  const int t_tx = cfg.t_tx().as_int();
  const int t_rx = cfg.t_rx().as_int();
  if (t_tx < 1) throw MemorySharingRequired("the sDoF expression needs t_T >= 1");
  return {t_tx, t_rx, Rational(static_cast<std::int64_t>(binomial(cfg.k_tx(), t_tx)))};
}

/// Receiver-cache values M_R = j N / K_R at which t_R is an integer and the
/// caches stay feasible.
std::vector<Rational> integral_rx_corners(const NetworkConfig& tmpl) {
  std::vector<Rational> out;
  for (int j = 0; j <= tmpl.k_rx(); ++j) {
    const Rational m = Rational(j) * tmpl.n_files() / tmpl.k_rx();
    if (Rational(tmpl.k_tx()) * tmpl.m_tx() + m >= tmpl.n_files()) out.push_back(m);
  }
  return out;
}

template <typename Fn>
Rational at_rx(const NetworkConfig& tmpl, const Rational& m_rx, Fn&& metric) {
  const NetworkConfig cfg = tmpl.with_m_rx(m_rx);
  if (cfg.t_rx().integral()) return metric(cfg);
  std::vector<CornerPoint> pts;
  for (const Rational& m : integral_rx_corners(tmpl)) pts.emplace_back(m, metric(tmpl.with_m_rx(m)));
  return memory_share(std::move(pts), m_rx);
}

}  // namespace

Rational sdof_closed_form(const NetworkConfig& cfg) {
  const Corner c = corner(cfg);
  const int residual = cfg.k_rx() - c.t_tx - c.t_rx;
  const Rational cap(cfg.k_rx());
  if (residual <= 0) return cap;
  return min(c.binom * cfg.k_rx() / (c.binom + residual), cap);
}

bool sdof_closed_form_capped(const NetworkConfig& cfg) {
  const Corner c = corner(cfg);
  const int residual = cfg.k_rx() - c.t_tx - c.t_rx;
  if (residual <= 0) return true;
  return c.binom * cfg.k_rx() / (c.binom + residual) >= cfg.k_rx();
}

Rational sdof_baseline(const NetworkConfig& cfg) {
  const int t_tx = cfg.t_tx().as_int();
  const int t_rx = cfg.t_rx().as_int();
  return Rational(std::min(t_tx + t_rx, cfg.k_rx()));
}

DofReport dof_report(const NetworkConfig& cfg) {
  DofReport r;
  r.proposed = sdof_closed_form(cfg);
  r.baseline = sdof_baseline(cfg);
  r.per_user = r.proposed / cfg.k_rx();
  r.capped = sdof_closed_form_capped(cfg);
  return r;
}

Rational ndt_closed_form(const NetworkConfig& cfg) {
  const int t_tx = cfg.t_tx().as_int();
  const int k_tx = cfg.k_tx();
  const int k_rx = cfg.k_rx();
  const Rational p = cfg.rx_fraction();
  const Rational cap(k_rx);

  Rational sum(0);
  for (int t = 0; t <= k_rx - 1; ++t) {
    const Rational count = Rational(static_cast<std::int64_t>(binomial(k_rx, t))) - t;
    const Rational size = pow(p, static_cast<unsigned>(t)) * pow(Rational(1) - p, static_cast<unsigned>(k_rx - t));
    const Rational sdof = min(Rational(k_tx * k_rx) / (k_tx + k_rx - t_tx - t), cap);
    sum += count * size / sdof;
  }
  Rational value = Rational(k_rx) * sum;

  const Rational sdof0 = min(cap, Rational(k_tx * k_rx) / (k_tx + k_rx - t_tx));
  value += Rational(k_rx) * cfg.m_tx() / sdof0 * (max(cfg.m_rx(), Rational(1)) - cfg.m_rx());
  return value;
}

namespace {

template <typename BitsOf>
NdtOracle oracle_from_plans(const NetworkConfig& cfg, const std::vector<DeliveryPlan>& plans,
                            const DemandVector& demand, BitsOf&& bits_of) {
  const int t_tx = cfg.t_tx().as_int();
  NdtOracle out;
  for (const auto& plan : plans) {
    if (plan.blocks.empty()) continue;
    const PlanSummary summary = summarize_plan(plan, demand, alignment_budget(cfg.k_rx(), t_tx, plan.tier));
    TierContribution tc;
    tc.tier = plan.tier;
    tc.sdof = summary.sdof;
    for (const auto& block : plan.blocks) {
      for (const auto& e : block) tc.bits += bits_of(e);
    }
    tc.ndt = tc.sdof == 0 ? Rational(0) : tc.bits / tc.sdof;
    out.value += tc.ndt;
    out.tiers.push_back(tc);
  }
  return out;
}

void require_complete(const std::vector<DeliveryPlan>& plans, const NetworkConfig& cfg, const DemandVector& demand) {
  const CompletenessReport report = verify_completeness(plans, decentralized_classes(cfg), demand);
  if (!report.complete()) {
    throw PlanError("decentralized plans are incomplete: " + std::to_string(report.missing.size()) + " missing, " +
                    std::to_string(report.duplicated.size()) + " duplicated, " +
                    std::to_string(report.misdirected.size()) + " misdirected");
  }
}

}  // namespace

NdtOracle ndt_oracle(const NetworkConfig& cfg, const std::vector<DeliveryPlan>& plans, const DemandVector& demand) {
  require_complete(plans, cfg, demand);
  const Rational per_partition = Rational(1, static_cast<std::int64_t>(binomial(cfg.k_tx(), cfg.t_tx().as_int())));
  std::vector<Rational> law;
  for (int t = 0; t <= cfg.k_rx(); ++t) law.push_back(expected_fraction(cfg, t) * per_partition);
  return oracle_from_plans(cfg, plans, demand,
                           [&](const ScheduledSubfile& e) { return law[static_cast<std::size_t>(e.subfile.rx_set.size())]; });
}

NdtOracle ndt_oracle(const NetworkConfig& cfg, const std::vector<DeliveryPlan>& plans,
                     const DecentralizedPlacement& placement, const DemandVector& demand) {
  require_complete(plans, cfg, demand);
  std::vector<std::optional<SubsetProfile>> profiles(static_cast<std::size_t>(cfg.n_files()));
  const auto F = static_cast<std::int64_t>(placement.file_bits);
  return oracle_from_plans(cfg, plans, demand, [&](const ScheduledSubfile& e) {
    auto& prof = profiles[static_cast<std::size_t>(e.subfile.file)];
    if (!prof) prof = subset_profile(placement, e.subfile.file);
    return Rational(static_cast<std::int64_t>(prof->bits(e.subfile.tx_set, e.subfile.rx_set)), F);
  });
}

MonteCarloNdt ndt_monte_carlo(const NetworkConfig& cfg, const DemandVector& demand, std::uint64_t first_seed,
                              int count) {
  if (!cfg.file_bits()) throw ConfigError("Monte-Carlo NDT needs file_bits");
  if (count < 2) throw ConfigError("Monte-Carlo NDT needs at least two seeds");
  const auto plans = build_decentralized_plan(cfg, demand);

  auto run_seed = [&](std::uint64_t seed) {
    const DecentralizedPlacement placement = place_decentralized(cfg, seed);
    return ndt_oracle(cfg, plans, placement, demand).value.to_double();
  };

  MonteCarloNdt mc;
  mc.first_seed = first_seed;
  mc.samples.resize(static_cast<std::size_t>(count));
  const unsigned workers = std::max(1U, std::min(4U, std::thread::hardware_concurrency()));
  for (int start = 0; start < count; start += static_cast<int>(workers)) {
    const int stop = std::min(count, start + static_cast<int>(workers));
    std::vector<std::future<double>> batch;
    for (int s = start; s < stop; ++s) {
      batch.push_back(std::async(std::launch::async, run_seed, first_seed + static_cast<std::uint64_t>(s)));
    }
    for (int s = start; s < stop; ++s) mc.samples[static_cast<std::size_t>(s)] = batch[static_cast<std::size_t>(s - start)].get();
  }

  double sum = 0.0;
  for (double v : mc.samples) sum += v;
  mc.mean = sum / count;
  double sq = 0.0;
  for (double v : mc.samples) sq += (v - mc.mean) * (v - mc.mean);
  mc.stderr_ = std::sqrt(sq / (count - 1)) / std::sqrt(static_cast<double>(count));
  return mc;
}

Rational ndt_centralized(const NetworkConfig& cfg, CentralizedScheme scheme) {
  const Rational uncached = Rational(cfg.k_rx()) * (Rational(1) - cfg.rx_fraction());
  if (uncached == 0) return Rational(0);
  const Rational sdof = scheme == CentralizedScheme::kProposed ? sdof_closed_form(cfg) : sdof_baseline(cfg);
  return uncached / sdof;
}

Rational memory_share(std::vector<CornerPoint> points, const Rational& m_query) {
  std::sort(points.begin(), points.end());
  // Keep the lowest value for repeated m.
  points.erase(std::unique(points.begin(), points.end(),
                           [](const CornerPoint& a, const CornerPoint& b) { return a.first == b.first; }),
               points.end());
  if (points.size() < 2) throw std::domain_error("memory sharing needs at least two corner points with distinct m");
  if (m_query < points.front().first || m_query > points.back().first) {
    throw std::domain_error("m = " + m_query.str() + " lies outside the corner range [" + points.front().first.str() +
                            ", " + points.back().first.str() + "]");
  }

  // Lower convex envelope (monotone chain).
  std::vector<CornerPoint> hull;
  for (const auto& pt : points) {
    while (hull.size() >= 2) {
      const auto& a = hull[hull.size() - 2];
      const auto& b = hull.back();
      const Rational cross = (b.first - a.first) * (pt.second - a.second) - (b.second - a.second) * (pt.first - a.first);
      if (cross <= 0) {
        hull.pop_back();
      } else {
        break;
      }
    }
    hull.push_back(pt);
  }

  for (std::size_t i = 0; i + 1 < hull.size(); ++i) {
    const auto& a = hull[i];
    const auto& b = hull[i + 1];
    if (m_query >= a.first && m_query <= b.first) {
      const Rational w = (m_query - a.first) / (b.first - a.first);
      return a.second + w * (b.second - a.second);
    }
  }
  return hull.back().second;
}

std::vector<SweepRow> sweep_figure(const NetworkConfig& tmpl, Figure figure, const std::vector<Rational>& m_rx_values) {
  std::vector<SweepRow> rows;
  rows.reserve(m_rx_values.size());
  for (const Rational& m : m_rx_values) {
    SweepRow row{m, {}, {}};
    if (figure == Figure::kInverseSdof) {
      row.proposed = at_rx(tmpl, m, [](const NetworkConfig& c) { return Rational(1) / sdof_closed_form(c); });
      row.baseline = at_rx(tmpl, m, [](const NetworkConfig& c) { return Rational(1) / sdof_baseline(c); });
    } else {
      row.proposed = ndt_closed_form(tmpl.with_m_rx(m));
      row.baseline = at_rx(tmpl, m, [](const NetworkConfig& c) { return ndt_centralized(c, CentralizedScheme::kBaseline); });
    }
    rows.push_back(row);
  }
  return rows;
}

namespace {

const char* csv_header(Figure figure) {
  return figure == Figure::kInverseSdof ? "m_r,inv_sdof_proposed,inv_sdof_baseline\n"
                                        : "m_r,ndt_decentralized,ndt_centralized\n";
}

}  // namespace

std::string sweep_csv(Figure figure, const std::vector<SweepRow>& rows) {
  std::ostringstream os;
  os << csv_header(figure);
  for (const auto& r : rows) os << r.axis.decimal() << ',' << r.proposed.decimal() << ',' << r.baseline.decimal() << '\n';
  return os.str();
}

std::string sweep_exact_csv(Figure figure, const std::vector<SweepRow>& rows) {
  std::ostringstream os;
  os << csv_header(figure);
  for (const auto& r : rows) os << r.axis << ',' << r.proposed << ',' << r.baseline << '\n';
  return os.str();
}

bool is_published_example(const NetworkConfig& cfg) {
  return cfg.k_tx() == 3 && cfg.k_rx() == 3 && cfg.n_files() == 3 && cfg.m_tx() == 2 && cfg.m_rx() == 1;
}

PublishedExample published_example_check() {
  const NetworkConfig cfg(3, 3, 3, Rational(2), Rational(1));
  const Rational third(1, 3);
  const Rational two_thirds(2, 3);
  PublishedExample ex;
  ex.stated = Rational(147, 95);
  // 3 * ( 3 (2/3)^3 / (9/4) + (2 (1/3)(4/9) + (1/9)(2/3)) / 3 ), as printed.
  ex.inline_expression =
      Rational(3) * (Rational(3) * pow(two_thirds, 3) / Rational(9, 4) +
                     (Rational(2) * third * Rational(4, 9) + Rational(1, 9) * two_thirds) / Rational(3));
  ex.formula = ndt_closed_form(cfg);
  const DemandVector demand = DemandVector::distinct_default(3, 3);
  ex.oracle = ndt_oracle(cfg, build_decentralized_plan(cfg, demand), demand).value;
  return ex;
}

NdtReport ndt_report(const NetworkConfig& cfg, const DemandVector& demand, std::optional<std::uint64_t> mc_first_seed,
                     int mc_seeds) {
  NdtReport report;
  report.formula = ndt_closed_form(cfg);
  report.oracle = ndt_oracle(cfg, build_decentralized_plan(cfg, demand), demand);
  if (mc_first_seed && cfg.file_bits()) report.monte_carlo = ndt_monte_carlo(cfg, demand, *mc_first_seed, mc_seeds);
  return report;
}

}  // namespace cachenet
