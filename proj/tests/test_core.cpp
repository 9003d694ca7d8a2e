// Copyright 2026 The cachenet Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <map>
#include <numeric>
#include <set>

#include "cachenet/combinatorics.hpp"
#include "cachenet/network.hpp"
#include "cachenet/rational.hpp"
#include "cachenet/rng.hpp"

using cachenet::NodeSet;
using cachenet::Rational;

TEST_CASE("rational normalizes and orders") {
  CHECK(Rational(6, -8) == Rational(-3, 4));
  CHECK(Rational(6, -8).den() == 4);
  CHECK(Rational(1, 3) + Rational(1, 6) == Rational(1, 2));
  CHECK(Rational(24, 7) / 4 == Rational(6, 7));
  CHECK(Rational(7, 24) < Rational(1, 3));
  CHECK(Rational(-7, 2).floor() == -4);
  CHECK(Rational(-7, 2).ceil() == -3);
  CHECK(cachenet::pow(Rational(2, 3), 3) == Rational(8, 27));
  CHECK(cachenet::pow(Rational(2, 3), 0) == 1);
  CHECK_THROWS_AS(Rational(1, 0), std::domain_error);
  CHECK_THROWS_AS(Rational(1) / Rational(0), std::domain_error);
}

TEST_CASE("rational text forms") {
  CHECK(Rational(62, 81).str() == "62/81");
  CHECK(Rational(4).str() == "4");
  CHECK(Rational(1, 3).decimal() == "0.333333333333");
  CHECK(Rational(2, 3).decimal() == "0.666666666667");
  CHECK(Rational(-2, 3).decimal(3) == "-0.667");
  CHECK(Rational::parse("7/24") == Rational(7, 24));
  CHECK(Rational::parse("-3") == -3);
  CHECK(Rational::parse("0.25") == Rational(1, 4));
  CHECK(Rational::parse("1.5") == Rational(3, 2));
  CHECK_THROWS(Rational::parse(""));
  CHECK_THROWS(Rational::parse("x/2"));
  CHECK_THROWS(Rational::parse("1/0"));
}

TEST_CASE("rational overflow is detected") {
  const Rational big(std::int64_t{1} << 62);
  CHECK_THROWS_AS(big * big, std::overflow_error);
}

TEST_CASE("binomial against Pascal's triangle") {
  std::vector<std::vector<std::uint64_t>> pascal(31);
  for (int n = 0; n <= 30; ++n) {
    pascal[n].assign(n + 1, 1);
    for (int k = 1; k < n; ++k) pascal[n][k] = pascal[n - 1][k - 1] + pascal[n - 1][k];
  }
  for (int n = 0; n <= 30; ++n) {
    for (int k = 0; k <= n; ++k) CHECK(cachenet::binomial(n, k) == pascal[n][k]);
  }
  CHECK_THROWS_AS(cachenet::binomial(3, 4), std::domain_error);
}

TEST_CASE("subset enumeration is lexicographic and ranked") {
  const auto pairs = cachenet::enumerate_subsets(4, 2);
  REQUIRE(pairs.size() == 6);
  std::vector<std::string> labels;
  for (auto s : pairs) labels.push_back(s.label());
  CHECK(labels == std::vector<std::string>{"12", "13", "14", "23", "24", "34"});
  for (std::size_t i = 0; i < pairs.size(); ++i) CHECK(cachenet::subset_rank(4, pairs[i]) == i);

  for (int n = 1; n <= 7; ++n) {
    for (int k = 0; k <= n; ++k) {
      const auto all = cachenet::enumerate_subsets(n, k);
      CHECK(all.size() == cachenet::binomial(n, k));
      CHECK(std::is_sorted(all.begin(), all.end()));
      std::set<std::uint64_t> masks;
      for (auto s : all) {
        CHECK(s.size() == k);
        masks.insert(s.mask());
      }
      CHECK(masks.size() == all.size());
    }
  }
  CHECK(cachenet::enumerate_subsets(3, 0).front().label() == "0");
}

TEST_CASE("node set operations") {
  const NodeSet a{0, 2};
  const NodeSet b{2, 3};
  CHECK((a | b) == NodeSet{0, 2, 3});
  CHECK((a & b) == NodeSet{2});
  CHECK(a.minus(b) == NodeSet{0});
  CHECK(a.intersects(b));
  CHECK(a.str() == "{1,3}");
  CHECK(NodeSet::first(3) == NodeSet{0, 1, 2});
  CHECK(a.with(1).without(0) == NodeSet{1, 2});
  CHECK_THROWS(NodeSet{40});
}

TEST_CASE("network replication factors") {
  const cachenet::NetworkConfig cfg(4, 4, 4, 2, 1);
  CHECK(cfg.t_tx().value == 2);
  CHECK(cfg.t_rx().value == 1);
  CHECK(cfg.rx_fraction() == Rational(1, 4));
  CHECK(cfg.str() == "kt=4 kr=4 n=4 mt=2 mr=1");

  const cachenet::NetworkConfig half(4, 4, 4, 2, Rational(1, 2));
  CHECK_FALSE(half.t_rx().integral());
  CHECK_THROWS_AS(half.t_rx().as_int(), cachenet::MemorySharingRequired);

  const cachenet::NetworkConfig clamped(3, 3, 3, 7, 9);
  CHECK(clamped.m_tx() == 3);
  CHECK(clamped.m_rx() == 3);
}

TEST_CASE("network rejects bad inputs") {
  using cachenet::ConfigError;
  using cachenet::NetworkConfig;
  CHECK_THROWS_AS(NetworkConfig(0, 4, 4, 2, 1), ConfigError);
  CHECK_THROWS_AS(NetworkConfig(4, 0, 4, 2, 1), ConfigError);
  CHECK_THROWS_AS(NetworkConfig(4, 4, 0, 2, 1), ConfigError);
  CHECK_THROWS_AS(NetworkConfig(4, 4, 4, -1, 1), ConfigError);
  CHECK_THROWS_AS(NetworkConfig(4, 4, 4, 2, -1), ConfigError);
  // K_T*M_T + M_R < N leaves some file unreachable.
  CHECK_THROWS_AS(NetworkConfig(2, 2, 4, 1, 1), ConfigError);
  CHECK_NOTHROW(NetworkConfig(2, 2, 4, 1, 2));
  CHECK_THROWS_AS(NetworkConfig(2, 2, 4, 2, 0, std::uint64_t{0}), ConfigError);
}

TEST_CASE("demand vectors") {
  const auto d = cachenet::DemandVector::distinct_default(4, 4);
  CHECK(d.files() == std::vector<int>{0, 1, 2, 3});
  CHECK(d.worst_case());
  CHECK(d.str() == "1,2,3,4");
  const auto wrap = cachenet::DemandVector::distinct_default(5, 3);
  CHECK(wrap.files() == std::vector<int>{0, 1, 2, 0, 1});
  CHECK_FALSE(wrap.worst_case());
  CHECK_THROWS_AS(cachenet::DemandVector({0, 5}, 4), cachenet::ConfigError);
  CHECK(cachenet::SubfileId{0, NodeSet{0, 1}, NodeSet{1}}.str() == "W1_{12,2}");
}

TEST_CASE("rng is reproducible and stream separated") {
  cachenet::Rng a(7), b(7), c(7, 1), d(8);
  for (int i = 0; i < 100; ++i) {
    const auto x = a.next_u64();
    CHECK(x == b.next_u64());
    CHECK(x != c.next_u64());
    CHECK(x != d.next_u64());
  }
  CHECK(cachenet::mix_seed(1, 0) != cachenet::mix_seed(1, 1));
}

TEST_CASE("rng bounded and continuous draws") {
  cachenet::Rng rng(3);
  std::map<std::uint64_t, int> counts;
  const int draws = 60000;
  for (int i = 0; i < draws; ++i) {
    const auto v = rng.below(6);
    REQUIRE(v < 6);
    ++counts[v];
  }
  for (const auto& [v, n] : counts) CHECK(std::abs(n - draws / 6) < 5 * std::sqrt(draws / 6.0));

  double sum = 0.0, sq = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform01();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    const double z = rng.normal();
    sum += z;
    sq += z * z;
  }
  CHECK(std::abs(sum / n) < 0.02);
  CHECK(std::abs(sq / n - 1.0) < 0.02);
  CHECK_THROWS(rng.below(0));
}
