// Copyright 2026 The cachenet Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cachenet/cli.hpp"

namespace {

struct Result {
  int status;
  std::string out;
  std::string err;
};

Result invoke(std::vector<std::string> args, const std::string& input = "") {
  args.insert(args.begin(), "cachenet");
  std::ostringstream out, err;
  std::istringstream in(input);
  const int status = cachenet::cli::run(args, out, err, in);
  return {status, out.str(), err.str()};
}

bool has(const std::string& text, const std::string& needle) { return text.find(needle) != std::string::npos; }

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const std::vector<std::string> k4x4 = {"--kt", "4", "--kr", "4", "--n", "4", "--mt", "2", "--mr", "1"};
const std::vector<std::string> k3x3 = {"--kt", "3", "--kr", "3", "--n", "3", "--mt", "2", "--mr", "1"};

std::vector<std::string> with(std::string cmd, std::vector<std::string> net, std::vector<std::string> extra = {}) {
  net.insert(net.begin(), cmd);
  net.insert(net.end(), extra.begin(), extra.end());
  return net;
}

}  // namespace

TEST_CASE("sdof command") {
  const auto r = invoke(with("sdof", k4x4));
  CHECK(r.status == 0);
  CHECK(has(r.out, "proposed=24/7 baseline=3"));
  CHECK(has(r.out, "6/7"));
  const auto r2 = invoke({"sdof", "--kt", "3", "--kr", "3", "--n", "3", "--mt", "2", "--mr", "0"});
  CHECK(has(r2.out, "proposed=9/4"));
}

TEST_CASE("usage and configuration errors") {
  auto r = invoke({"sdof", "--kt", "4", "--n", "4", "--mt", "2", "--mr", "1"});
  CHECK(r.status == 2);
  CHECK(has(r.err, "kr"));
  CHECK(invoke({}).status == 2);
  CHECK(invoke({"sdof", "--bogus", "1"}).status == 2);
  CHECK(invoke({"sdof", "--kt", "4", "--kr", "4", "--n", "4", "--mt", "2", "--mr", "1/2"}).status == 2);
  CHECK(has(invoke({"sdof", "--kt", "4", "--kr", "4", "--n", "4", "--mt", "2", "--mr", "1/2"}).err, "memory"));
  CHECK(invoke({"sdof", "--kt", "2", "--kr", "2", "--n", "4", "--mt", "1", "--mr", "1"}).status == 2);
  CHECK(invoke(with("sweep", {}, {"--figure", "fig9"})).status == 2);
  CHECK(invoke({"--help"}).status == 0);
}

TEST_CASE("ndt command") {
  const auto r = invoke(with("ndt", k3x3));
  CHECK(r.status == 0);
  CHECK(has(r.out, "formula=62/81 oracle=62/81 published_example=147/95 (flagged)"));
  CHECK(has(r.out, "inline_expression=14/9"));
  CHECK(has(r.out, "inconsistent"));
  const auto full = invoke({"ndt", "--kt", "3", "--kr", "3", "--n", "3", "--mt", "2", "--mr", "3"});
  CHECK(full.status == 0);
  CHECK(has(full.out, "formula=0 oracle=0"));
}

TEST_CASE("ndt with a short Monte-Carlo run") {
  const auto r = invoke(with("ndt", k3x3, {"--file-bits", "20000", "--seeds", "6"}));
  CHECK(has(r.out, "monte_carlo seeds=6"));
  CHECK(r.status == (has(r.out, "within_3_stderr=true") ? 0 : 1));
}

TEST_CASE("oracle-ndt command") {
  const auto r = invoke(with("oracle-ndt", k3x3, {"--file-bits", "3000", "--seed", "2"}));
  CHECK(r.status == 0);
  CHECK(has(r.out, "asymptotic=62/81"));
  CHECK(has(r.out, "finite seed=2"));
}

TEST_CASE("plan command prints the ledger") {
  const auto r = invoke(with("plan", k4x4));
  CHECK(r.status == 0);
  CHECK(has(r.out, "# plan mode=centralized tier=1 kr=4 blocks=3"));
  CHECK(has(r.out, "# plan sdof=24/7"));
  for (int b = 1; b <= 3; ++b) CHECK(has(r.out, "# ledger block=" + std::to_string(b) + " sdof=24/7"));
  const auto v = invoke(with("plan", k4x4, {"--verify", "--channel-seeds", "20"}));
  CHECK(v.status == 0);
  CHECK(has(v.out, "completeness=ok violations=0"));
  const auto d = invoke(with("plan", k3x3, {"--mode", "decentralized", "--verify", "--channel-seeds", "5"}));
  CHECK(d.status == 0);
  CHECK(has(d.out, "mode=decentralized tier=0"));
  const auto shown = invoke(with("plan", k3x3, {"--mode", "decentralized", "--show", "--file-bits", "30"}));
  CHECK(has(shown.out, "node=rx1 file=1 bits="));
}

TEST_CASE("verify accepts a generated plan and rejects corrupted ones") {
  const auto plan = invoke(with("plan", k4x4)).out;
  const auto ok = invoke(with("verify", k4x4, {"--channel-seeds", "10"}), plan);
  CHECK(ok.status == 0);
  CHECK(has(ok.out, "violations=0"));

  std::string dropped = plan;
  const std::string line = "block=1 file=1 tx={1,2} cachedRx={2} zf={3} dest=1\n";
  REQUIRE(has(dropped, line));
  dropped.erase(dropped.find(line), line.size());
  const auto miss = invoke(with("verify", k4x4, {"--channel-seeds", "5"}), dropped);
  CHECK(miss.status == 1);
  CHECK(has(miss.out, "violation missing: W1_{12,2} for Rx1"));

  std::string bad = plan;
  bad.replace(bad.find(line), line.size(), "block=1 file=1 tx={1,2} cachedRx={1} zf={3} dest=1\n");
  const auto structural = invoke(with("verify", k4x4, {"--channel-seeds", "5"}), bad);
  CHECK(structural.status == 1);
  CHECK(has(structural.out, "violation"));

  const auto garbage = invoke(with("verify", k4x4), "block=oops\n");
  CHECK(garbage.status == 1);
  CHECK(has(garbage.out, "violation parse"));
}

TEST_CASE("config file with flag overrides") {
  const auto path = std::filesystem::temp_directory_path() / "cachenet_cli_test.cfg";
  {
    std::ofstream f(path);
    f << "# 4x4 example\nkt=4\nkr = 4\nn=4\nmt=2\nmr=2  # overridden below\n";
  }
  const auto r = invoke({"sdof", "--config", path.string(), "--mr", "1"});
  CHECK(r.status == 0);
  CHECK(has(r.out, "proposed=24/7"));
  const auto from_file = invoke({"sdof", "--config", path.string()});
  CHECK(has(from_file.out, "proposed=4"));
  std::filesystem::remove(path);

  CHECK_THROWS_AS(cachenet::cli::parse_config_text("kt 4\n"), cachenet::ConfigError);
  CHECK_THROWS_AS(cachenet::cli::make_run_config({{"colour", "red"}}, false), cachenet::ConfigError);
  const auto run = cachenet::cli::make_run_config(
      {{"kt", "4"}, {"kr", "4"}, {"n", "4"}, {"mt", "2"}, {"mr", "1"}, {"demand", "4,3,2,1"}, {"tol_zf", "1e-6"}},
      true);
  CHECK(run.demand_vector().files() == std::vector<int>{3, 2, 1, 0});
  CHECK(run.tolerance.zf_relative == 1e-6);
}

TEST_CASE("sweep command writes CSV and exact sidecar") {
  const auto r = invoke({"sweep", "--figure", "fig2"});
  CHECK(r.status == 0);
  CHECK(r.out ==
        "m_r,inv_sdof_proposed,inv_sdof_baseline\n"
        "0.000000000000,0.333333333333,0.500000000000\n"
        "1.000000000000,0.291666666667,0.333333333333\n"
        "2.000000000000,0.250000000000,0.250000000000\n"
        "3.000000000000,0.250000000000,0.250000000000\n"
        "4.000000000000,0.250000000000,0.250000000000\n");

  const auto dir = std::filesystem::temp_directory_path();
  const auto csv = dir / "cachenet_fig4.csv";
  const auto w = invoke({"sweep", "--figure", "fig4", "--output", csv.string()});
  CHECK(w.status == 0);
  const auto exact = slurp(csv.string() + ".exact.csv");
  CHECK(has(exact, "1,62/81,2/3\n"));
  const auto first = slurp(csv);
  invoke({"sweep", "--figure", "fig4", "--output", csv.string()});
  CHECK(slurp(csv) == first);
  std::filesystem::remove(csv);
  std::filesystem::remove(csv.string() + ".exact.csv");

  const auto v = invoke({"sweep", "--figure", "fig2", "--values", "0,1/2,1"});
  CHECK(has(v.out, "0.500000000000,0.312500000000,"));
}

TEST_CASE("commands are deterministic") {
  const std::vector<std::vector<std::string>> cmds = {
      with("sdof", k4x4),
      with("ndt", k3x3, {"--file-bits", "5000", "--seeds", "3"}),
      with("oracle-ndt", k3x3, {"--file-bits", "3000"}),
      with("plan", k4x4, {"--verify", "--channel-seeds", "8"}),
      with("plan", k3x3, {"--mode", "decentralized", "--show", "--file-bits", "60"}),
      {"sweep", "--figure", "fig2"},
      {"sweep", "--figure", "fig4"},
  };
  for (const auto& c : cmds) {
    const auto a = invoke(c);
    const auto b = invoke(c);
    CAPTURE(c.front());
    CHECK(a.out == b.out);
    CHECK(a.status == b.status);
  }
}
