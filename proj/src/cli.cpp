// Copyright 2026 The cachenet Authors
// SPDX-License-Identifier: Apache-2.0

#include "cachenet/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <iterator>
#include <sstream>

#include "cachenet/delivery.hpp"
#include "cachenet/metrics.hpp"
#include "cachenet/placement.hpp"
#include "cachenet/rng.hpp"

namespace cachenet::cli {
namespace {

constexpr int kExitVerification = 1;
constexpr int kExitUsage = 2;

constexpr const char* kAlignmentNote =
    "# note: residual interference alignment is accounted by signal dimensions (one per interfering group), "
    "not constructed numerically";

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream is(text);
  std::string item;
  while (std::getline(is, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

template <typename T>
T parse_number(const std::string& key, const std::string& text) {
  try {
    std::size_t used = 0;
    long long v = std::stoll(text, &used);
    if (used != text.size() || v < 0) throw std::invalid_argument(text);
    return static_cast<T>(v);
  } catch (const std::exception&) {
    throw ConfigError("'" + key + "' expects a non-negative integer, got '" + text + "'");
  }
}

double parse_double(const std::string& key, const std::string& text) {
  try {
    std::size_t used = 0;
    double v = std::stod(text, &used);
    if (used != text.size() || !(v > 0.0)) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("'" + key + "' expects a positive number, got '" + text + "'");
  }
}

Rational parse_rational(const std::string& key, const std::string& text) {
  try {
    return Rational::parse(text);
  } catch (const std::exception& e) {
    throw ConfigError("'" + key + "': " + e.what());
  }
}

std::string both(const Rational& r) { return r.str() + " (" + r.decimal() + ")"; }

// ---------------------------------------------------------------------------

int cmd_sdof(const RunConfig& run, std::ostream& out) {
  const NetworkConfig& cfg = run.net();
  out << "# sdof " << cfg.str() << " t_tx=" << cfg.t_tx().value << " t_rx=" << cfg.t_rx().value << '\n';
  const DofReport r = dof_report(cfg);
  out << "proposed=" << r.proposed << " baseline=" << r.baseline << '\n';
  out << "proposed_decimal=" << r.proposed.decimal() << " baseline_decimal=" << r.baseline.decimal() << '\n';
  out << "per_user=" << both(r.per_user) << " capped=" << (r.capped ? "true" : "false") << '\n';
  out << kAlignmentNote << '\n';
  return 0;
}

void print_tiers(const NdtOracle& oracle, std::ostream& out) {
  for (const auto& t : oracle.tiers) {
    out << "tier t=" << t.tier << " bits=" << t.bits << " sdof=" << t.sdof << " ndt=" << both(t.ndt) << '\n';
  }
}

int cmd_ndt(const RunConfig& run, std::ostream& out) {
  const NetworkConfig& cfg = run.net();
  const DemandVector demand = run.demand_vector();
  out << "# ndt " << cfg.str() << " t_tx=" << cfg.t_tx().value << " demand=" << demand.str() << '\n';
  const bool with_mc = cfg.file_bits().has_value();
  const NdtReport report = ndt_report(cfg, demand, with_mc ? std::optional<std::uint64_t>(run.seed) : std::nullopt,
                                      run.seeds);
  out << "formula=" << report.formula << " oracle=" << report.oracle.value;
  if (is_published_example(cfg)) out << " published_example=147/95 (flagged)";
  out << '\n';
  out << "formula_decimal=" << report.formula.decimal() << " oracle_decimal=" << report.oracle.value.decimal() << '\n';
  out << "agreement=" << (report.agree() ? "yes" : "no (closed form and scheme accounting differ)") << '\n';
  print_tiers(report.oracle, out);
  if (is_published_example(cfg)) {
    const PublishedExample ex = published_example_check();
    out << "published_example stated=" << ex.stated << " inline_expression=" << ex.inline_expression
        << " formula=" << ex.formula << " oracle=" << ex.oracle
        << (ex.consistent() ? " consistent" : " inconsistent") << '\n';
  }
  int status = 0;
  if (report.monte_carlo) {
    const MonteCarloNdt& mc = *report.monte_carlo;
    const double target = report.oracle.value.to_double();
    const bool within = std::abs(mc.mean - target) <= 3.0 * mc.stderr_;
    std::ostringstream line;
    line.precision(12);
    line << std::fixed << "monte_carlo seeds=" << mc.samples.size() << " first_seed=" << mc.first_seed
         << " file_bits=" << *cfg.file_bits() << " mean=" << mc.mean << " stderr=" << mc.stderr_
         << " within_3_stderr=" << (within ? "true" : "false");
    out << line.str() << '\n';
    if (!within) status = kExitVerification;
  }
  out << kAlignmentNote << '\n';
  return status;
}

int cmd_oracle_ndt(const RunConfig& run, std::ostream& out) {
  const NetworkConfig& cfg = run.net();
  const DemandVector demand = run.demand_vector();
  const auto plans = build_decentralized_plan(cfg, demand);
  out << "# oracle-ndt " << cfg.str() << " demand=" << demand.str() << '\n';
  const NdtOracle asym = ndt_oracle(cfg, plans, demand);
  out << "asymptotic=" << both(asym.value) << '\n';
  print_tiers(asym, out);
  if (cfg.file_bits()) {
    const DecentralizedPlacement placement = place_decentralized(cfg, run.seed);
    const NdtOracle finite = ndt_oracle(cfg, plans, placement, demand);
    out << "finite seed=" << run.seed << " rng=" << Rng::kAlgorithm << " value=" << finite.value.decimal() << '\n';
    print_tiers(finite, out);
  }
  return 0;
}

void print_ledgers(const PlanSummary& summary, std::ostream& out) {
  for (const auto& ledger : summary.ledgers) {
    for (const auto& r : ledger.receivers) {
      out << "# ledger block=" << ledger.block + 1 << " rx=" << r.receiver + 1 << " scheduled=" << r.scheduled
          << " desired=" << r.desired << " zf=" << r.zf_removed << " ic=" << r.ic_removed
          << " interfering=" << r.interfering << " groups=" << r.interfering_groups << " aligned=" << r.aligned_dims
          << " dof=" << r.dof() << '\n';
    }
    out << "# ledger block=" << ledger.block + 1 << " sdof=" << ledger.sdof() << '\n';
  }
  out << "# plan sdof=" << both(summary.sdof) << '\n';
  for (const auto& w : summary.warnings) out << "# warning: " << w << '\n';
}

/// Completeness, ledger and phy checks shared by `plan --verify` and
/// `verify`. Returns the number of violations.
std::size_t run_checks(const RunConfig& run, const std::vector<DeliveryPlan>& plans, Mode mode,
                       const DemandVector& demand, std::ostream& out) {
  const NetworkConfig& cfg = run.net();
  std::size_t violations = 0;

  std::vector<DeliveryPlan> valid_plans;
  for (const auto& plan : plans) {
    const auto problems = validate_plan(plan, demand);
    for (const auto& p : problems) out << "violation structure: " << p << '\n';
    violations += problems.size();
    if (problems.empty()) valid_plans.push_back(plan);
  }

  const std::vector<SubfileId> universe =
      mode == Mode::kCentralized ? place_centralized(cfg).subfiles : decentralized_classes(cfg);
  const CompletenessReport comp = verify_completeness(plans, universe, demand);
  for (const auto& m : comp.missing) {
    out << "violation missing: " << m.subfile.str() << " for Rx" << m.receiver + 1 << '\n';
  }
  for (const auto& d : comp.duplicated) {
    out << "violation duplicate: " << d.subfile.str() << " delivered " << d.count << " times to Rx" << d.receiver + 1
        << '\n';
  }
  for (const auto& e : comp.misdirected) {
    out << "violation misdirected: " << e.subfile.str() << " -> Rx" << e.dest + 1 << '\n';
  }
  violations += comp.missing.size() + comp.duplicated.size() + comp.misdirected.size();

  const int t_tx = cfg.t_tx().as_int();
  for (const auto& plan : valid_plans) {
    const PlanSummary s = summarize_plan(plan, demand, alignment_budget(cfg.k_rx(), t_tx, plan.tier));
    for (const auto& ledger : s.ledgers) {
      if (!ledger.conserved()) {
        out << "violation ledger: block " << ledger.block + 1 << " does not conserve transmissions\n";
        ++violations;
      }
    }
    for (const auto& w : s.warnings) out << "warning: " << w << '\n';
  }

  if (!valid_plans.empty() && run.channel_seeds > 0) {
    const ChannelSweepReport phy =
        verify_plans_over_channels(valid_plans, cfg.k_tx(), run.seed, run.channel_seeds, run.tolerance);
    for (const auto& v : phy.merged.violations) out << "violation phy: " << v.str() << '\n';
    violations += phy.merged.violations.size();
    std::ostringstream line;
    line << "phy channel_seeds=" << run.channel_seeds << " first_seed=" << run.seed
         << " entries=" << phy.merged.entries << " zf_checks=" << phy.merged.zf_checks
         << " ic_flagged=" << phy.merged.ic_flagged << " aligned_assumed=" << phy.merged.aligned_assumed
         << " max_zf_residual=" << std::scientific << std::setprecision(3) << phy.merged.max_zf_residual
         << " tol_zf=" << run.tolerance.zf_relative;
    out << line.str() << '\n';
    out << "phy distribution=\"" << kChannelDistribution << "\" rng=" << Rng::kAlgorithm << '\n';
  }
  out << "completeness=" << (comp.complete() ? "ok" : "failed") << " violations=" << violations << '\n';
  return violations;
}

int cmd_plan(const RunConfig& run, std::ostream& out) {
  const NetworkConfig& cfg = run.net();
  const DemandVector demand = run.demand_vector();
  const int t_tx = cfg.t_tx().as_int();
  std::vector<DeliveryPlan> plans;

  if (run.mode == Mode::kCentralized) {
    const CentralizedPlacement placement = place_centralized(cfg);
    if (run.show) out << export_placement(placement);
    plans.push_back(build_centralized_plan(cfg, placement, demand));
  } else {
    if (run.show) {
      if (!cfg.file_bits()) throw ConfigError("--show in decentralized mode needs --file-bits");
      out << export_placement(place_decentralized(cfg, run.seed));
    }
    plans = build_decentralized_plan(cfg, demand);
  }

  out << "# config " << cfg.str() << " demand=" << demand.str() << '\n';
  for (const auto& plan : plans) {
    out << serialize_plan(plan);
    print_ledgers(summarize_plan(plan, demand, alignment_budget(cfg.k_rx(), t_tx, plan.tier)), out);
  }
  out << kAlignmentNote << '\n';
  if (!run.verify) return 0;
  return run_checks(run, plans, run.mode, demand, out) == 0 ? 0 : kExitVerification;
}

int cmd_verify(const RunConfig& run, std::ostream& out, std::istream& in) {
  std::string text;
  if (run.plan_path.empty() || run.plan_path == "-") {
    text.assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
  } else {
    std::ifstream file(run.plan_path);
    if (!file) throw ConfigError("cannot read plan file '" + run.plan_path + "'");
    text.assign(std::istreambuf_iterator<char>(file), std::istreambuf_iterator<char>());
  }
  const DemandVector demand = run.demand_vector();
  std::vector<DeliveryPlan> plans;
  try {
    plans = parse_plans(text);
  } catch (const PlanError& e) {
    out << "violation parse: " << e.what() << '\n';
    return kExitVerification;
  }
  Mode mode = run.mode;
  if (!plans.empty()) {
    mode = plans.front().mode == PlanMode::kCentralized ? Mode::kCentralized : Mode::kDecentralized;
  }
  out << "# verify " << run.net().str() << " demand=" << demand.str() << " plans=" << plans.size() << '\n';
  return run_checks(run, plans, mode, demand, out) == 0 ? 0 : kExitVerification;
}

int cmd_sweep(const RunConfig& run, std::ostream& out) {
  Figure figure;
  if (run.figure == "fig2") {
    figure = Figure::kInverseSdof;
  } else if (run.figure == "fig4") {
    figure = Figure::kNdt;
  } else {
    throw ConfigError("--figure must be fig2 or fig4");
  }
  const NetworkConfig& tmpl = run.net();
  std::vector<Rational> values = run.values;
  if (values.empty()) {
    for (int m = 0; m <= tmpl.n_files(); ++m) values.emplace_back(m);
  }
  const auto rows = sweep_figure(tmpl, figure, values);
  const std::string csv = sweep_csv(figure, rows);
  const std::string exact = sweep_exact_csv(figure, rows);
  if (run.output.empty()) {
    out << csv;
    return 0;
  }
  const std::string exact_path = run.output + ".exact.csv";
  {
    std::ofstream f(run.output, std::ios::binary);
    if (!f) throw ConfigError("cannot write '" + run.output + "'");
    f << csv;
  }
  {
    std::ofstream f(exact_path, std::ios::binary);
    if (!f) throw ConfigError("cannot write '" + exact_path + "'");
    f << exact;
  }
  out << "wrote " << run.output << " and " << exact_path << " (" << rows.size() << " rows)\n";
  return 0;
}

std::map<std::string, std::string> sweep_defaults(const std::string& figure) {
  if (figure == "fig4") return {{"kt", "3"}, {"kr", "3"}, {"n", "3"}, {"mt", "2"}, {"mr", "3"}};
  return {{"kt", "4"}, {"kr", "4"}, {"n", "4"}, {"mt", "2"}, {"mr", "4"}};
}

}  // namespace

DemandVector RunConfig::demand_vector() const {
  const NetworkConfig& cfg = net();
  if (demand.empty()) return DemandVector::distinct_default(cfg.k_rx(), cfg.n_files());
  if (static_cast<int>(demand.size()) != cfg.k_rx()) throw ConfigError("demand needs exactly K_R entries");
  return {demand, cfg.n_files()};
}

const NetworkConfig& RunConfig::net() const {
  if (!network) throw ConfigError("network parameters are required (kt, kr, n, mt, mr)");
  return *network;
}

std::map<std::string, std::string> parse_config_text(const std::string& text) {
  std::map<std::string, std::string> out;
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("config line " + std::to_string(lineno) + ": expected key=value");
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw ConfigError("config line " + std::to_string(lineno) + ": empty key");
    out[key] = trim(line.substr(eq + 1));
  }
  return out;
}

RunConfig make_run_config(const std::map<std::string, std::string>& settings, bool network_required) {
  static const std::vector<std::string> known = {"kt",   "kr",    "n",     "mt",            "mr",
                                                 "file_bits", "mode", "seed", "seeds",     "channel_seeds",
                                                 "demand", "tol_zf", "tol_generic", "output", "figure",
                                                 "values", "plan", "show", "verify"};
  for (const auto& [key, value] : settings) {
    if (std::find(known.begin(), known.end(), key) == known.end()) throw ConfigError("unknown setting '" + key + "'");
  }
  auto get = [&](const std::string& key) -> const std::string* {
    auto it = settings.find(key);
    return it == settings.end() ? nullptr : &it->second;
  };

  RunConfig run;
  const char* net_keys[] = {"kt", "kr", "n", "mt", "mr"};
  int present = 0;
  for (const char* k : net_keys) present += get(k) != nullptr;
  if (present != 0 && present != 5) {
    for (const char* k : net_keys) {
      if (!get(k)) throw ConfigError(std::string("missing network parameter '") + k + "'");
    }
  }
  if (present == 0 && network_required) throw ConfigError("network parameters are required: --kt --kr --n --mt --mr");
  if (present == 5) {
    std::optional<std::uint64_t> bits;
    if (auto* b = get("file_bits")) bits = parse_number<std::uint64_t>("file_bits", *b);
    run.network.emplace(parse_number<int>("kt", *get("kt")), parse_number<int>("kr", *get("kr")),
                        parse_number<int>("n", *get("n")), parse_rational("mt", *get("mt")),
                        parse_rational("mr", *get("mr")), bits);
  }
  if (auto* m = get("mode")) {
    if (*m == "centralized") {
      run.mode = Mode::kCentralized;
    } else if (*m == "decentralized") {
      run.mode = Mode::kDecentralized;
    } else {
      throw ConfigError("mode must be centralized or decentralized");
    }
  }
  if (auto* v = get("seed")) run.seed = parse_number<std::uint64_t>("seed", *v);
  if (auto* v = get("seeds")) run.seeds = parse_number<int>("seeds", *v);
  if (auto* v = get("channel_seeds")) run.channel_seeds = parse_number<int>("channel_seeds", *v);
  if (auto* v = get("demand")) {
    for (const auto& item : split_list(*v)) {
      const int f = parse_number<int>("demand", item);
      if (f < 1) throw ConfigError("demand entries are 1-based file indices");
      run.demand.push_back(f - 1);
    }
  }
  if (auto* v = get("tol_zf")) run.tolerance.zf_relative = parse_double("tol_zf", *v);
  if (auto* v = get("tol_generic")) run.tolerance.genericity_relative = parse_double("tol_generic", *v);
  if (auto* v = get("output")) run.output = *v;
  if (auto* v = get("figure")) run.figure = *v;
  if (auto* v = get("values")) {
    for (const auto& item : split_list(*v)) run.values.push_back(parse_rational("values", item));
  }
  if (auto* v = get("plan")) run.plan_path = *v;
  if (auto* v = get("show")) run.show = *v == "1" || *v == "true";
  if (auto* v = get("verify")) run.verify = *v == "1" || *v == "true";
  return run;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, std::istream& in) {
  CLI::App app{"Cache-aided interference network toolkit: sDoF/NDT evaluation, delivery plans and ZF checks",
               "cachenet"};
  app.require_subcommand(1);

  std::map<std::string, std::string> flags;
  std::string config_path;

  auto add_network = [&](CLI::App* sub) {
    auto opt = [&](const char* name, const char* key, const char* help) {
      sub->add_option_function<std::string>(name, [&flags, key](const std::string& v) { flags[key] = v; }, help);
    };
    opt("--kt", "kt", "number of transmitters K_T");
    opt("--kr", "kr", "number of receivers K_R");
    opt("--n", "n", "library size N");
    opt("--mt", "mt", "transmitter cache size in files (p, p/q or decimal)");
    opt("--mr", "mr", "receiver cache size in files (p, p/q or decimal)");
    opt("--file-bits", "file_bits", "finite file length F in bits");
    opt("--demand", "demand", "comma-separated 1-based file index per receiver");
    opt("--seed", "seed", "base seed for placement or channel sampling");
    sub->add_option("--config", config_path, "key=value settings file (flags override it)");
  };
  auto add_flag = [&](CLI::App* sub, const char* name, const char* key, const char* help) {
    sub->add_flag_callback(name, [&flags, key]() { flags[key] = "1"; }, help);
  };
  auto add_opt = [&](CLI::App* sub, const char* name, const char* key, const char* help) {
    sub->add_option_function<std::string>(name, [&flags, key](const std::string& v) { flags[key] = v; }, help);
  };

  CLI::App* sdof = app.add_subcommand("sdof", "centralized sDoF: proposed scheme vs ZF+IC baseline");
  add_network(sdof);
  CLI::App* ndt = app.add_subcommand("ndt", "decentralized NDT: closed form, scheme oracle, optional Monte-Carlo");
  add_network(ndt);
  add_opt(ndt, "--seeds", "seeds", "Monte-Carlo placements (with --file-bits)");
  CLI::App* oracle = app.add_subcommand("oracle-ndt", "per-tier scheme accounting of the decentralized NDT");
  add_network(oracle);
  CLI::App* plan = app.add_subcommand("plan", "build and print a delivery plan with its dimension ledger");
  add_network(plan);
  add_opt(plan, "--mode", "mode", "centralized | decentralized");
  add_flag(plan, "--show", "show", "also print the placement");
  add_flag(plan, "--verify", "verify", "run completeness and zero-forcing checks");
  add_opt(plan, "--channel-seeds", "channel_seeds", "number of sampled channels for --verify");
  add_opt(plan, "--tol-zf", "tol_zf", "relative ZF residual tolerance");
  CLI::App* verify = app.add_subcommand("verify", "check a serialized plan (file or stdin)");
  add_network(verify);
  add_opt(verify, "--plan", "plan", "plan file, '-' for stdin");
  add_opt(verify, "--channel-seeds", "channel_seeds", "number of sampled channels");
  add_opt(verify, "--tol-zf", "tol_zf", "relative ZF residual tolerance");
  CLI::App* sweep = app.add_subcommand("sweep", "figure data as CSV");
  add_network(sweep);
  add_opt(sweep, "--figure", "figure", "fig2 (1/sDoF vs M_R) | fig4 (NDT vs M_R)");
  add_opt(sweep, "--values", "values", "comma-separated M_R values (default 0..N)");
  add_opt(sweep, "--output", "output", "CSV path; a .exact.csv sidecar is written next to it");

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    std::map<std::string, std::string> settings;
    CLI::App* chosen = app.get_subcommands().front();
    if (chosen == sweep) {
      settings = sweep_defaults(flags.count("figure") ? flags["figure"] : "");
    }
    if (!config_path.empty()) {
      std::ifstream f(config_path);
      if (!f) throw ConfigError("cannot read config file '" + config_path + "'");
      std::string text((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
      for (auto& [k, v] : parse_config_text(text)) settings[k] = v;
    }
    for (auto& [k, v] : flags) settings[k] = v;
    const RunConfig cfg = make_run_config(settings, true);

    if (chosen == sdof) return cmd_sdof(cfg, out);
    if (chosen == ndt) return cmd_ndt(cfg, out);
    if (chosen == oracle) return cmd_oracle_ndt(cfg, out);
    if (chosen == plan) return cmd_plan(cfg, out);
    if (chosen == verify) return cmd_verify(cfg, out, in);
    if (chosen == sweep) return cmd_sweep(cfg, out);
  } catch (const MemorySharingRequired& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace cachenet::cli
