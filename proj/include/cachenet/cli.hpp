// Copyright 2026 The cachenet Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cachenet/network.hpp"
#include "cachenet/phy.hpp"

namespace cachenet::cli {

enum class Mode { kCentralized, kDecentralized };

/// Settings shared by all subcommands. Built from an optional key=value
/// file, then overridden by command-line flags.
struct RunConfig {
  std::optional<NetworkConfig> network;
  Mode mode = Mode::kCentralized;
  std::uint64_t seed = 1;
  int seeds = 20;
  int channel_seeds = 100;
  std::vector<int> demand;  ///< 0-based; empty means the default (j mod N)
  PhyTolerance tolerance;
  std::string output;
  std::string figure;
  std::vector<Rational> values;
  std::string plan_path;
  bool show = false;
  bool verify = false;

  DemandVector demand_vector() const;
  const NetworkConfig& net() const;
};

/// Parses "key=value" lines; '#' starts a comment. Throws ConfigError.
std::map<std::string, std::string> parse_config_text(const std::string& text);

/// Builds a RunConfig from merged key/value settings. Recognised keys: kt,
/// kr, n, mt, mr, file_bits, mode, seed, seeds, channel_seeds, demand,
/// tol_zf, tol_generic, output, figure, values, plan, show, verify.
RunConfig make_run_config(const std::map<std::string, std::string>& settings, bool network_required);

/// Runs one invocation (argv[0] is the program name). Returns the exit
/// status: 0 success, 1 verification failure, 2 usage or configuration error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, std::istream& in);

}  // namespace cachenet::cli
