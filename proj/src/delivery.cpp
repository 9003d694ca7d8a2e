// Copyright 2026 The cachenet Authors
// SPDX-License-Identifier: Apache-2.0

#include "cachenet/delivery.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <tuple>

namespace cachenet {
namespace {

int wrap(int value, int modulus) { return ((value % modulus) + modulus) % modulus; }

NodeSet shift(const std::vector<int>& offsets, int base, int k_rx) {
  NodeSet out;
  for (int s : offsets) out = out.with(wrap(base + s, k_rx));
  return out;
}

/// Offsets (in 1..K_R-1) of the ZF targets for a block whose cache-holder
/// offsets are `held`: the next `count` free offsets after max(held),
/// wrapping within 1..K_R-1.
std::vector<int> zf_offsets(const std::vector<int>& held, int k_rx, int count) {
  std::vector<int> out;
  const int start = held.empty() ? 1 : held.back() + 1;
  for (int step = 0; step < k_rx - 1 && static_cast<int>(out.size()) < count; ++step) {
    const int offset = 1 + wrap(start - 1 + step, k_rx - 1);
    if (std::find(held.begin(), held.end(), offset) == held.end()) out.push_back(offset);
  }
  return out;
}

/// Blocks serving subfiles held by exactly `held_count` receivers other
/// than the destination, for every transmitter set in `tx_sets`.
std::vector<std::vector<ScheduledSubfile>> rotate_blocks(int k_rx, int t_tx, int held_count,
                                                         const std::vector<NodeSet>& tx_sets,
                                                         const DemandVector& demand) {
  std::vector<std::vector<ScheduledSubfile>> blocks;
  if (held_count > k_rx - 1) return blocks;  // everything cached everywhere
  const int zf_count = std::min(std::max(t_tx - 1, 0), k_rx - 1 - held_count);

  int b = 0;
  for (NodeSet s : enumerate_subsets(k_rx - 1, held_count)) {
    std::vector<int> held;
    for (int m : s.members()) held.push_back(m + 1);
    const std::vector<int> zf = zf_offsets(held, k_rx, zf_count);

    std::vector<ScheduledSubfile> block;
    for (int d = 0; d < k_rx; ++d) {
      const NodeSet rx_set = shift(held, d, k_rx);
      const NodeSet targets = shift(zf, d, k_rx);
      for (NodeSet x : tx_sets) block.push_back({SubfileId{demand[d], x, rx_set}, d, targets, b});
    }
    blocks.push_back(std::move(block));
    ++b;
  }
  return blocks;
}

std::string entry_problem(const ScheduledSubfile& e, const DemandVector& demand) {
  const int k_rx = demand.size();
  if (e.dest < 0 || e.dest >= k_rx) return "destination outside the receiver set";
  if (e.subfile.rx_set.mask() >> k_rx || e.zf_targets.mask() >> k_rx) return "receiver index outside the network";
  if (e.subfile.file != demand[e.dest]) return "file not requested by its destination";
  if (e.subfile.rx_set.contains(e.dest)) return "destination already caches this subfile";
  if (e.zf_targets.contains(e.dest)) return "zero-forced at its own destination";
  if (e.zf_targets.intersects(e.subfile.rx_set)) return "zero-forced at a receiver that caches it";
  if (e.subfile.tx_set.empty()) return "no transmitter holds this subfile";
  if (e.zf_targets.size() >= e.subfile.tx_set.size()) return "more zero-forcing targets than transmitters allow";
  return {};
}

std::string describe(const ScheduledSubfile& e) {
  return "block " + std::to_string(e.block + 1) + " " + e.subfile.str() + " -> Rx" + std::to_string(e.dest + 1);
}

}  // namespace

std::size_t DeliveryPlan::size() const {
  std::size_t n = 0;
  for (const auto& b : blocks) n += b.size();
  return n;
}

std::string DeliveryPlan::mode_label() const {
  return mode == PlanMode::kCentralized ? "centralized" : "decentralized-tier(" + std::to_string(tier) + ")";
}

Rational ReceiverLedger::dof() const {
  if (desired == 0) return Rational(0);
  return Rational(desired, total_dims());
}

Rational SubspaceLedger::sdof() const {
  Rational sum(0);
  for (const auto& r : receivers) sum += r.dof();
  return sum;
}

bool SubspaceLedger::conserved() const {
  return std::all_of(receivers.begin(), receivers.end(), [](const ReceiverLedger& r) { return r.conserved(); });
}

SubspaceLedger account_block(const std::vector<ScheduledSubfile>& block, const DemandVector& demand) {
  const int k_rx = demand.size();
  std::map<int, std::vector<NodeSet>> tx_by_dest;
  for (const auto& e : block) {
    if (auto problem = entry_problem(e, demand); !problem.empty()) {
      throw PlanError(describe(e) + ": " + problem);
    }
    auto& seen = tx_by_dest[e.dest];
    if (std::find(seen.begin(), seen.end(), e.subfile.tx_set) != seen.end()) {
      throw PlanError(describe(e) + ": transmitter set repeated for the same destination in one block");
    }
    seen.push_back(e.subfile.tx_set);
  }

  SubspaceLedger ledger;
  ledger.block = block.empty() ? 0 : block.front().block;
  for (int r = 0; r < k_rx; ++r) {
    ReceiverLedger rl;
    rl.receiver = r;
    rl.scheduled = static_cast<int>(block.size());
    std::vector<std::tuple<int, std::uint64_t, std::uint64_t>> groups;
    for (const auto& e : block) {
      if (e.dest == r) {
        ++rl.desired;
      } else if (e.zf_targets.contains(r)) {
        ++rl.zf_removed;
      } else if (e.subfile.rx_set.contains(r)) {
        ++rl.ic_removed;
      } else {
        ++rl.interfering;
        groups.emplace_back(e.dest, e.subfile.rx_set.mask(), e.zf_targets.mask());
      }
    }
    std::sort(groups.begin(), groups.end());
    groups.erase(std::unique(groups.begin(), groups.end()), groups.end());
    rl.interfering_groups = static_cast<int>(groups.size());
    rl.aligned_dims = rl.interfering_groups;
    ledger.receivers.push_back(rl);
  }
  return ledger;
}

std::vector<std::string> validate_plan(const DeliveryPlan& plan, const DemandVector& demand) {
  std::vector<std::string> out;
  for (const auto& block : plan.blocks) {
    std::map<std::pair<int, std::uint64_t>, int> seen;
    for (const auto& e : block) {
      if (auto problem = entry_problem(e, demand); !problem.empty()) out.push_back(describe(e) + ": " + problem);
      if (++seen[{e.dest, e.subfile.tx_set.mask()}] == 2) {
        out.push_back(describe(e) + ": transmitter set repeated for the same destination in one block");
      }
    }
  }
  return out;
}

int alignment_budget(int k_rx, int t_tx, int tier) { return std::max(k_rx - t_tx - tier, 0); }

PlanSummary summarize_plan(const DeliveryPlan& plan, const DemandVector& demand, int expected_aligned) {
  PlanSummary summary;
  std::int64_t desired = 0;
  std::int64_t length = 0;
  for (const auto& block : plan.blocks) {
    SubspaceLedger ledger = account_block(block, demand);
    int busiest = 0;
    for (const auto& r : ledger.receivers) {
      desired += r.desired;
      busiest = std::max(busiest, r.total_dims());
      if (r.aligned_dims > expected_aligned) {
        summary.warnings.push_back("block " + std::to_string(ledger.block + 1) + " Rx" +
                                   std::to_string(r.receiver + 1) + ": " + std::to_string(r.aligned_dims) +
                                   " aligned dimensions exceed the budget of " + std::to_string(expected_aligned));
      }
    }
    length += busiest;
    summary.ledgers.push_back(std::move(ledger));
  }
  summary.sdof = length == 0 ? Rational(0) : Rational(desired, length);
  return summary;
}

DeliveryPlan build_centralized_plan(const NetworkConfig& cfg, const CentralizedPlacement& placement,
                                    const DemandVector& demand) {
  if (demand.size() != cfg.k_rx()) throw ConfigError("demand vector length must equal K_R");
  const int t_tx = placement.t_tx;
  const int t_rx = placement.t_rx;
  DeliveryPlan plan;
  plan.mode = PlanMode::kCentralized;
  plan.tier = t_rx;
  plan.k_rx = cfg.k_rx();
  if (t_rx >= cfg.k_rx()) return plan;  // receivers already hold everything
  if (t_tx < 1) throw ConfigError("centralized delivery needs t_T >= 1 when receivers miss content");
  plan.blocks = rotate_blocks(cfg.k_rx(), t_tx, t_rx, enumerate_subsets(cfg.k_tx(), t_tx), demand);
  return plan;
}

std::vector<DeliveryPlan> build_decentralized_plan(const NetworkConfig& cfg, const DemandVector& demand) {
  if (demand.size() != cfg.k_rx()) throw ConfigError("demand vector length must equal K_R");
  const int t_tx = cfg.t_tx().as_int();
  if (t_tx < 1) throw ConfigError("decentralized delivery needs t_T >= 1");
  const auto tx_sets = enumerate_subsets(cfg.k_tx(), t_tx);
  std::vector<DeliveryPlan> plans;
  for (int t = 0; t < cfg.k_rx(); ++t) {
    DeliveryPlan plan;
    plan.mode = PlanMode::kDecentralizedTier;
    plan.tier = t;
    plan.k_rx = cfg.k_rx();
    plan.blocks = rotate_blocks(cfg.k_rx(), t_tx, t, tx_sets, demand);
    plans.push_back(std::move(plan));
  }
  return plans;
}

std::vector<DeliveryPlan> build_decentralized_plan(const NetworkConfig& cfg, const DecentralizedPlacement& placement,
                                                   const DemandVector& demand) {
  if (placement.cfg.k_rx() != cfg.k_rx() || placement.cfg.k_tx() != cfg.k_tx()) {
    throw ConfigError("placement was built for a different network");
  }
  return build_decentralized_plan(cfg, demand);
}

std::size_t CompletenessReport::missing_for(int receiver) const {
  return static_cast<std::size_t>(
      std::count_if(missing.begin(), missing.end(), [receiver](const Item& i) { return i.receiver == receiver; }));
}

CompletenessReport verify_completeness(const std::vector<DeliveryPlan>& plans, const std::vector<SubfileId>& universe,
                                       const DemandVector& demand) {
  CompletenessReport report;
  std::map<std::pair<int, SubfileId>, int> delivered;
  for (const auto& plan : plans) {
    for (const auto& block : plan.blocks) {
      for (const auto& e : block) {
        const bool wanted = e.dest >= 0 && e.dest < demand.size() && e.subfile.file == demand[e.dest] &&
                            !e.subfile.rx_set.contains(e.dest);
        if (!wanted) {
          report.misdirected.push_back(e);
          continue;
        }
        ++delivered[{e.dest, e.subfile}];
      }
    }
  }
  for (int r = 0; r < demand.size(); ++r) {
    for (const auto& id : universe) {
      if (id.file != demand[r] || id.rx_set.contains(r)) continue;
      auto it = delivered.find({r, id});
      const int count = it == delivered.end() ? 0 : it->second;
      if (count == 0) report.missing.push_back({r, id, 0});
      if (count > 1) report.duplicated.push_back({r, id, count});
      if (it != delivered.end()) delivered.erase(it);
    }
  }
  // Anything left over names a subfile outside the placement.
  for (const auto& [key, count] : delivered) {
    for (int i = 0; i < count; ++i) report.misdirected.push_back({key.second, key.first, {}, -1});
  }
  return report;
}

CompletenessReport verify_completeness(const std::vector<DeliveryPlan>& plans, const CentralizedPlacement& placement,
                                       const DemandVector& demand) {
  return verify_completeness(plans, placement.subfiles, demand);
}

std::vector<SubfileId> decentralized_classes(const NetworkConfig& cfg) {
  std::vector<SubfileId> out;
  const auto tx_sets = enumerate_subsets(cfg.k_tx(), cfg.t_tx().as_int());
  const std::uint64_t n_masks = std::uint64_t{1} << cfg.k_rx();
  for (int f = 0; f < cfg.n_files(); ++f) {
    for (NodeSet x : tx_sets) {
      for (std::uint64_t m = 0; m < n_masks; ++m) out.push_back({f, x, NodeSet::from_mask(m)});
    }
  }
  return out;
}

CompletenessReport verify_completeness(const std::vector<DeliveryPlan>& plans, const DecentralizedPlacement& placement,
                                       const DemandVector& demand) {
  return verify_completeness(plans, decentralized_classes(placement.cfg), demand);
}

std::string serialize_plan(const DeliveryPlan& plan) {
  std::ostringstream os;
  os << "# plan mode=" << (plan.mode == PlanMode::kCentralized ? "centralized" : "decentralized")
     << " tier=" << plan.tier << " kr=" << plan.k_rx << " blocks=" << plan.blocks.size() << '\n';
  for (const auto& block : plan.blocks) {
    for (const auto& e : block) {
      os << "block=" << e.block + 1 << " file=" << e.subfile.file + 1 << " tx=" << e.subfile.tx_set.str()
         << " cachedRx=" << e.subfile.rx_set.str() << " zf=" << e.zf_targets.str() << " dest=" << e.dest + 1 << '\n';
    }
  }
  return os.str();
}

namespace {

std::map<std::string, std::string> split_fields(const std::string& line, int lineno) {
  std::map<std::string, std::string> fields;
  std::istringstream is(line);
  std::string token;
  while (is >> token) {
    auto eq = token.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw PlanError("line " + std::to_string(lineno) + ": expected key=value, got '" + token + "'");
    }
    fields[token.substr(0, eq)] = token.substr(eq + 1);
  }
  return fields;
}

int parse_index(const std::string& text, int lineno, const char* what) {
  try {
    std::size_t used = 0;
    int v = std::stoi(text, &used);
    if (used != text.size() || v < 1 || v > 1'000'000) throw std::invalid_argument(text);
    return v - 1;
  } catch (const std::exception&) {
    throw PlanError("line " + std::to_string(lineno) + ": bad " + what + " '" + text + "'");
  }
}

NodeSet parse_set(const std::string& text, int lineno, const char* what) {
  if (text.size() < 2 || text.front() != '{' || text.back() != '}') {
    throw PlanError("line " + std::to_string(lineno) + ": bad " + what + " set '" + text + "'");
  }
  NodeSet out;
  std::string body = text.substr(1, text.size() - 2);
  std::istringstream is(body);
  std::string item;
  while (std::getline(is, item, ',')) {
    const int idx = parse_index(item, lineno, what);
    if (idx >= kMaxNodes) throw PlanError("line " + std::to_string(lineno) + ": node index too large");
    out = out.with(idx);
  }
  return out;
}

}  // namespace

std::vector<DeliveryPlan> parse_plans(const std::string& text) {
  std::vector<DeliveryPlan> plans;
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  int max_receiver = -1;
  auto current = [&]() -> DeliveryPlan& {
    if (plans.empty()) plans.emplace_back();
    return plans.back();
  };
  while (std::getline(is, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos) continue;
    if (line[first] == '#') {
      std::string rest = line.substr(first + 1);
      std::istringstream hs(rest);
      std::string word;
      hs >> word;
      if (word != "plan") continue;
      std::getline(hs, rest);
      // Only "# plan mode=..." opens a plan; other "# plan" lines are notes.
      if (rest.find("mode=") == std::string::npos) continue;
      auto fields = split_fields(rest, lineno);
      DeliveryPlan plan;
      plan.mode = fields["mode"] == "decentralized" ? PlanMode::kDecentralizedTier : PlanMode::kCentralized;
      if (fields.count("tier")) plan.tier = std::stoi(fields["tier"]);
      if (fields.count("kr")) plan.k_rx = std::stoi(fields["kr"]);
      plans.push_back(std::move(plan));
      continue;
    }
    auto fields = split_fields(line, lineno);
    for (const char* key : {"block", "file", "tx", "cachedRx", "zf", "dest"}) {
      if (!fields.count(key)) throw PlanError("line " + std::to_string(lineno) + ": missing field '" + key + "'");
    }
    ScheduledSubfile e;
    e.block = parse_index(fields["block"], lineno, "block");
    e.subfile.file = parse_index(fields["file"], lineno, "file");
    e.subfile.tx_set = parse_set(fields["tx"], lineno, "tx");
    e.subfile.rx_set = parse_set(fields["cachedRx"], lineno, "cachedRx");
    e.zf_targets = parse_set(fields["zf"], lineno, "zf");
    e.dest = parse_index(fields["dest"], lineno, "dest");
    if (e.dest >= kMaxNodes) throw PlanError("line " + std::to_string(lineno) + ": destination too large");
    max_receiver = std::max({max_receiver, e.dest,
                             e.subfile.rx_set.empty() ? -1 : e.subfile.rx_set.members().back(),
                             e.zf_targets.empty() ? -1 : e.zf_targets.members().back()});
    DeliveryPlan& plan = current();
    if (static_cast<std::size_t>(e.block) >= plan.blocks.size()) {
      plan.blocks.resize(static_cast<std::size_t>(e.block) + 1);
    }
    plan.blocks[static_cast<std::size_t>(e.block)].push_back(e);
  }
  for (auto& plan : plans) {
    if (plan.k_rx == 0) plan.k_rx = max_receiver + 1;
  }
  return plans;
}

}  // namespace cachenet
