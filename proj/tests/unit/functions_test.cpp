// Copyright 2026 The csms Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <random>

#include "core/cantor_embed.hpp"
#include "core/functions.hpp"
#include "core/jobs.hpp"

namespace csms {
namespace {

Rational r(long n, long d = 1) { return Rational(n, d); }
Point at(const Rational& v) { return point_from_code(CodePoint::of(v)); }

// Certified value ball of f(x) at tolerance q.
std::pair<Rational, Rational> value(const FunctionCode& f, const Point& x, const Rational& q) {
  EvalResult e = eval(f, x, q, 256);
  EXPECT_TRUE(e.quad);
  if (!e.quad) return {r(0), r(0)};
  return {e.quad->b[0], e.quad->s};
}

bool brackets(const FunctionCode& f, const Point& x, const Rational& q, const Rational& truth) {
  auto [b, s] = value(f, x, q);
  return (b - truth).abs() < s && s < q;
}

TEST(Eval, Examples) {
  auto reals = catalog("reals");
  auto unit = catalog("unit_interval");
  Rational q = Rational::pow2(-10);
  EXPECT_TRUE(brackets(*make_const(reals, r(7, 3)), at(r(-4)), q, r(7, 3)));
  EXPECT_TRUE(brackets(*make_dist_to(reals, CodePoint::of(r(0))), at(r(1, 3)), q, r(1, 3)));
  EXPECT_TRUE(brackets(*make_tent(unit, CodePoint::of(r(0)), r(3, 5)), at(r(1, 2)), q, r(1, 10)));
}

TEST(Build, MaxOfTents) {
  auto unit = catalog("unit_interval");
  FunctionPtr f = function_from(unit, Json::parse(R"({"op":"max","args":[
      {"op":"tent","a":"0","r":"3/5"},{"op":"tent","a":"1","r":"3/5"}]})"));
  EXPECT_TRUE(brackets(*f, at(r(1, 2)), Rational::pow2(-12), r(1, 10)));
}

TEST(Build, ScaleByZero) {
  auto reals = catalog("reals");
  FunctionPtr f = make_scale(r(0), make_dist_to(reals, CodePoint::of(r(5))));
  for (long x : {-100L, 0L, 3L, 1000L}) EXPECT_TRUE(brackets(*f, at(r(x)), r(1, 1000), r(0)));
}

TEST(Build, ComposeWithEmbedding) {
  auto cantor = catalog("cantor");
  auto unit = catalog("unit_interval");
  BallScheme scheme = build_scheme(unit, 12);
  FunctionPtr f = make_compose(make_dist_to(unit, CodePoint::of(r(0))), make_embedding(scheme));
  // phi(0^w) is the limit of a_{0^n}; a_{0^12} is within q_{0^12} of it.
  const SchemeEntry& leaf = scheme.at(std::string(12, '0'));
  auto [b, s] = value(*f, point_from_code(CodePoint()), Rational::pow2(-8));
  EXPECT_LE((b - leaf.a[0]).abs(), s + leaf.q);
}

TEST(Build, RejectsMalformed) {
  auto reals = catalog("reals");
  EXPECT_THROW(function_from(reals, Json{{"op", "sine"}}), SpecError);
  EXPECT_THROW(function_from(reals, Json{{"op", "tent"}, {"a", "0"}, {"r", "-1"}}), SpecError);
  EXPECT_THROW(function_from(reals, Json{{"op", "max"}, {"args", Json::array()}}), SpecError);
}

TEST(ValidateFragment, Examples) {
  auto reals = catalog("reals");
  EXPECT_EQ(validate_fragment(*make_const(reals, r(2)), 60, 64).status, FragmentCheck::Status::Certified);
  FunctionPtr bad = make_table(reals, real_line(),
                               {{CodePoint::of(r(0)), r(1), CodePoint::of(r(0)), r(1)},
                                {CodePoint::of(r(0)), r(1), CodePoint::of(r(3)), r(1)}});
  FragmentCheck c = validate_fragment(*bad, 2, 64);
  EXPECT_EQ(c.status, FragmentCheck::Status::Violation);
  EXPECT_EQ(c.first, 0u);
  EXPECT_EQ(c.second, 1u);
  auto unit = catalog("unit_interval");
  EXPECT_EQ(validate_fragment(*make_tent(unit, CodePoint::of(r(0)), r(3, 5)), 100, 64).status,
            FragmentCheck::Status::Certified);
}

TEST(Table, EvalScansQuadruples) {
  auto reals = catalog("reals");
  FunctionPtr t = make_table(reals, real_line(),
                             {{CodePoint::of(r(0)), r(1), CodePoint::of(r(5)), r(1, 2)},
                              {CodePoint::of(r(10)), r(1), CodePoint::of(r(7)), r(1, 64)}});
  EvalResult e = eval(*t, at(r(10, 3) * r(3)), r(1, 8), 10);
  ASSERT_TRUE(e.quad);
  EXPECT_EQ(e.quad->b[0], r(7));
  EXPECT_FALSE(eval(*t, at(r(1, 2)), r(1, 8), 10).quad);
}

TEST(Urysohn, Examples) {
  auto unit = catalog("unit_interval");
  FunctionPtr f = make_urysohn(unit, LocatedSet::finite(unit, {CodePoint::of(r(0))}),
                               LocatedSet::finite(unit, {CodePoint::of(r(1))}), r(1, 2));
  Rational q = Rational::pow2(-10);
  EXPECT_TRUE(brackets(*f, at(r(1, 2)), q, r(1, 2)));
  EXPECT_TRUE(brackets(*f, at(r(0)), q, r(0)));
  EXPECT_TRUE(brackets(*f, at(r(1)), q, r(1)));
  EXPECT_TRUE(brackets(*f, at(r(1, 4)), q, r(1, 4)));
}

TEST(Urysohn, SeparationUncertified) {
  auto unit = catalog("unit_interval");
  try {
    make_urysohn(unit, LocatedSet::finite(unit, {CodePoint::of(r(0))}),
                 LocatedSet::finite(unit, {CodePoint::of(r(1, 8))}), r(1, 2));
    FAIL() << "expected SeparationUncertified";
  } catch (const OperationError& e) {
    EXPECT_EQ(e.kind(), "SeparationUncertified");
  }
}

TEST(UrysohnProperty, RangeInUnitInterval) {
  auto reals = catalog("reals");
  FunctionPtr f = make_urysohn(reals, LocatedSet::finite(reals, {CodePoint::of(r(-1)), CodePoint::of(r(4))}),
                               LocatedSet::finite(reals, {CodePoint::of(r(2))}), r(1));
  std::mt19937_64 rng(21);
  for (int t = 0; t < 300; ++t) {
    Rational x = r(static_cast<long>(rng() % 2000) - 1000, 128);
    auto [b, s] = value(*f, at(x), r(1, 64));
    ASSERT_GT(b + s, r(0));
    ASSERT_LT(b - s, r(1));
    // Oracle: g0 / (g0 + g1) with exact distances.
    Rational g0 = min((x + r(1)).abs(), (x - r(4)).abs()), g1 = (x - r(2)).abs();
    ASSERT_LT((b - g0 / (g0 + g1)).abs(), s) << x.str();
  }
}

// Random piecewise-linear expressions with an exact evaluator.
struct Expr {
  FunctionPtr code;
  std::function<Rational(const Rational&)> exact;
};

Expr random_expr(const SpacePtr& dom, std::mt19937_64& rng, int depth) {
  auto rat = [&](long span, long den) { return r(static_cast<long>(rng() % (2 * span + 1)) - span, den); };
  if (depth == 0) {
    switch (rng() % 3) {
      case 0: { Rational c = rat(20, 7); return {make_const(dom, c), [c](const Rational&) { return c; }}; }
      case 1: {
        Rational a = rat(40, 8);
        return {make_dist_to(dom, CodePoint::of(a)), [a](const Rational& x) { return (x - a).abs(); }};
      }
      default: {
        Rational a = rat(40, 8), rad = r(1 + static_cast<long>(rng() % 24), 8);
        return {make_tent(dom, CodePoint::of(a), rad),
                [a, rad](const Rational& x) { return max(r(0), rad - (x - a).abs()); }};
      }
    }
  }
  Expr f = random_expr(dom, rng, depth - 1);
  switch (rng() % 4) {
    case 0: {
      Expr g = random_expr(dom, rng, depth - 1);
      return {make_combine(Combine::Add, f.code, g.code), [f, g](const Rational& x) { return f.exact(x) + g.exact(x); }};
    }
    case 1: {
      Expr g = random_expr(dom, rng, depth - 1);
      return {make_combine(Combine::Max, f.code, g.code), [f, g](const Rational& x) { return max(f.exact(x), g.exact(x)); }};
    }
    case 2: {
      Expr g = random_expr(dom, rng, depth - 1);
      return {make_combine(Combine::Min, f.code, g.code), [f, g](const Rational& x) { return min(f.exact(x), g.exact(x)); }};
    }
    default: {
      Rational c = rat(12, 4);
      return {make_scale(c, f.code), [f, c](const Rational& x) { return c * f.exact(x); }};
    }
  }
}

TEST(EvalProperty, AgreesWithExactOracle) {
  auto reals = catalog("reals");
  std::mt19937_64 rng(22);
  int evaluated = 0;
  for (int t = 0; t < 100; ++t) {
    Expr e = random_expr(reals, rng, 1 + t % 3);
    for (int i = 0; i < 10; ++i, ++evaluated) {
      Rational x = r(static_cast<long>(rng() % 4000) - 2000, 256);
      Rational q = Rational::pow2(-static_cast<long>(4 + rng() % 12));
      EvalResult res = eval(*e.code, at(x), q, 256);
      ASSERT_TRUE(res.quad) << t;
      ASSERT_LT(res.quad->s, q);
      ASSERT_LT((res.quad->b[0] - e.exact(x)).abs(), res.quad->s) << "expr " << t << " x " << x.str();
      // Consistency with a second, coarser answer.
      EvalResult coarse = eval(*e.code, at(x), q * r(16), 256);
      ASSERT_TRUE(coarse.quad);
      ASSERT_LE((coarse.quad->b[0] - res.quad->b[0]).abs(), coarse.quad->s + res.quad->s);
    }
  }
  EXPECT_EQ(evaluated, 1000);
}

TEST(FragmentProperty, BuildersCertify) {
  auto reals = catalog("reals");
  std::mt19937_64 rng(23);
  for (int t = 0; t < 10; ++t) {
    Expr e = random_expr(reals, rng, 1);
    EXPECT_NE(validate_fragment(*e.code, 80, 64).status, FragmentCheck::Status::Violation) << t;
  }
}

}  // namespace
}  // namespace csms
