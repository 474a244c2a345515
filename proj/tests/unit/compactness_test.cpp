// Copyright 2026 The csms Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "core/compactness.hpp"
#include "core/jobs.hpp"

namespace csms {
namespace {

Rational r(long n, long d = 1) { return Rational(n, d); }
Ball ball(const Rational& c, const Rational& rad) { return Ball{CodePoint::of(c), rad}; }

std::string kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const OperationError& e) {
    return e.kind();
  }
  return "";
}

TEST(Nets, UnitIntervalGrid) {
  NetFamily nets = nets_for(catalog("unit_interval"), 10);
  std::vector<CodePoint> l3 = nets.level(3);
  ASSERT_EQ(l3.size(), 9u);
  for (std::size_t j = 0; j < 9; ++j) EXPECT_EQ(l3[j][0], r(static_cast<long>(j), 8));
}

TEST(Nets, CantorCylinders) {
  NetFamily nets = nets_for(catalog("cantor"), 10);
  for (unsigned n = 0; n <= 6; ++n) {
    auto l = nets.level(n);
    EXPECT_EQ(l.size(), std::size_t{2} << n);
    std::sort(l.begin(), l.end());
    EXPECT_EQ(std::unique(l.begin(), l.end()), l.end());
  }
}

TEST(Nets, NotEffectivelyCompact) {
  for (const char* name : {"reals", "baire", "naturals", "shrink_intervals", "hilbert_comb"})
    EXPECT_EQ(kind_of([&] { nets_for(catalog(name), 4); }), "NotEffectivelyCompact") << name;
}

TEST(EpsNet, Examples) {
  NetFamily unit = nets_for(catalog("unit_interval"), 10);
  EXPECT_LE(eps_net(unit, r(1, 2)).size(), 5u);
  EXPECT_EQ(eps_net(unit, r(2)).size(), 1u);
  NetFamily cantor = nets_for(catalog("cantor"), 10);
  EXPECT_EQ(eps_net(cantor, r(1, 4)).size(), 8u);
  EXPECT_EQ(kind_of([&] { eps_net(unit, Rational::pow2(-12)); }), "LevelExceeded");
}

TEST(EpsNetProperty, UnitIntervalDensity) {
  NetFamily nets = nets_for(catalog("unit_interval"), 16);
  std::mt19937_64 rng(31);
  for (int t = 0; t < 40; ++t) {
    Rational eps = r(1 + static_cast<long>(rng() % 1000), 1 + static_cast<long>(rng() % 4000));
    if (eps < Rational::pow2(-15)) continue;
    std::vector<Rational> pts;
    for (const auto& p : eps_net(nets, eps)) pts.push_back(p[0]);
    std::sort(pts.begin(), pts.end());
    // Every x in [0,1] is within eps: endpoints and half-gaps.
    ASSERT_LE(pts.front(), eps);
    ASSERT_LE(r(1) - pts.back(), eps);
    for (std::size_t i = 1; i < pts.size(); ++i) ASSERT_LE((pts[i] - pts[i - 1]) / r(2), eps);
  }
}

TEST(EpsNetProperty, CantorDensity) {
  auto cantor = catalog("cantor");
  NetFamily nets = nets_for(cantor, 12);
  for (long e = 0; e <= 8; ++e) {
    Rational eps = Rational::pow2(-e);
    auto net = eps_net(nets, eps);
    // Every word of length 10 (hence every point) is within eps.
    for (std::size_t w = 0; w < 1024; ++w) {
      CodePoint x = cantor->parse_literal([&] {
        std::string s;
        for (int i = 0; i < 10; ++i) s += ((w >> i) & 1U) ? '1' : '0';
        return s;
      }());
      bool near = std::any_of(net.begin(), net.end(), [&](const CodePoint& b) {
        return *cantor->exact_distance(x, b) <= eps;
      });
      ASSERT_TRUE(near) << "eps 2^-" << e << " word " << w;
    }
  }
}

FunctionPtr fn(const SpacePtr& s, const char* text) { return function_from(s, Json::parse(text)); }

TEST(MinOnCompact, Examples) {
  auto unit = catalog("unit_interval");
  NetFamily nets = nets_for(unit, 24);
  MinResult a = min_on_compact(*fn(unit, R"({"op":"dist_to","a":"0"})"), nets, r(1, 100));
  EXPECT_LE(a.lower, r(0));
  EXPECT_GE(a.upper, r(0));
  EXPECT_LE(a.upper - a.lower, r(1, 100));
  MinResult b = min_on_compact(*fn(unit, R"({"op":"tent","a":"1/2","r":"1"})"), nets, r(1, 100));
  EXPECT_TRUE(b.lower <= r(1, 2) && r(1, 2) <= b.upper);
  MinResult c = min_on_compact(*fn(unit, R"({"op":"max","args":[{"op":"tent","a":"0","r":"3/5"},
                                         {"op":"tent","a":"1","r":"3/5"}]})"),
                               nets, r(1, 1000));
  EXPECT_TRUE(c.lower <= r(1, 10) && r(1, 10) <= c.upper);
  EXPECT_LE(c.upper - c.lower, r(1, 1000));
}

// Exact minimum of a piecewise-linear function of x on [0,1]: all kinks
// are at rationals with denominator dividing 8 here, so a grid suffices.
TEST(MinOnCompactProperty, BracketsExactMinimum) {
  auto unit = catalog("unit_interval");
  NetFamily nets = nets_for(unit, 24);
  std::mt19937_64 rng(32);
  for (int t = 0; t < 6; ++t) {
    std::vector<std::pair<Rational, Rational>> tents;
    Json args = Json::array();
    for (int i = 0; i < 3; ++i) {
      Rational a = r(static_cast<long>(rng() % 9), 8), rad = r(1 + static_cast<long>(rng() % 8), 8);
      tents.emplace_back(a, rad);
      args.push_back({{"op", "tent"}, {"a", a.str()}, {"r", rad.str()}});
    }
    FunctionPtr f = function_from(unit, Json{{"op", "max"}, {"args", args}});
    Rational exact = r(100);
    for (long j = 0; j <= 1024; ++j) {
      Rational x = r(j, 1024), v = r(0);
      for (auto& [a, rad] : tents) v = max(v, rad - (x - a).abs());
      exact = min(exact, v);
    }
    for (long e : {10L, 100L, 1000L}) {
      MinResult m = min_on_compact(*f, nets, r(1, e));
      ASSERT_LE(m.lower, exact) << t;
      ASSERT_GE(m.upper, exact) << t;
      ASSERT_LE(m.upper - m.lower, r(1, e)) << t;
    }
  }
}

TEST(HeineBorel, Examples) {
  auto unit = catalog("unit_interval");
  NetFamily nets = nets_for(unit, 16);
  HeineBorelResult two = heine_borel_subcover(
      Covering::of_balls(unit, {ball(r(0), r(3, 5)), ball(r(1), r(3, 5))}), nets, 10);
  ASSERT_TRUE(two.found);
  EXPECT_EQ(two.indices, (std::vector<std::size_t>{0, 1}));
  HeineBorelResult one = heine_borel_subcover(
      Covering::of_balls(unit, {ball(r(0), r(1, 8)), ball(r(1, 2), r(2)), ball(r(1), r(1, 8))}), nets, 10);
  ASSERT_TRUE(one.found);
  EXPECT_EQ(one.indices, (std::vector<std::size_t>{1}));
  HeineBorelResult none = heine_borel_subcover(Covering::of_balls(unit, {ball(r(0), r(1, 2))}), nets, 10);
  EXPECT_FALSE(none.found);
  EXPECT_TRUE(none.failed_cell);
}

TEST(HeineBorelProperty, CertificatesReplay) {
  auto unit = catalog("unit_interval");
  NetFamily nets = nets_for(unit, 16);
  std::vector<Ball> balls;
  for (long i = 0; i <= 8; ++i) balls.push_back(ball(r(i, 8), r(1, 10)));
  Covering cov = Covering::of_balls(unit, balls);
  HeineBorelResult res = heine_borel_subcover(cov, nets, 20);
  ASSERT_TRUE(res.found);
  Rational cell = Rational::pow2(-static_cast<long>(res.level));
  for (const CellCover& c : res.cells) {
    const Ball& b = balls[c.member];
    ASSERT_LT((c.center[0] - b.center[0]).abs() + cell, b.radius);
  }
  OpenSetCode selected = [&] {
    std::vector<Ball> used;
    for (std::size_t i : res.indices) used.push_back(balls[i]);
    return OpenSetCode::of_balls(used);
  }();
  std::mt19937_64 rng(33);
  for (int t = 0; t < 1000; ++t) {
    CodePoint x = unit->sample(rng);
    ASSERT_TRUE(open_membership(*unit, point_from_code(x), selected, res.indices.size(), 64).yes);
  }
}

TEST(Levels, Doubling) {
  EXPECT_EQ(doubling_levels(0, 10), (std::vector<unsigned>{0, 1, 2, 4, 8, 10}));
}

}  // namespace
}  // namespace csms
