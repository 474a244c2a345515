// Copyright 2026 The csms Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <random>

#include "core/spaces.hpp"

namespace csms {
namespace {

Rational r(long n, long d = 1) { return Rational(n, d); }

long as_long(const Rational& v) { return v.num().get_si(); }

// Independent metric oracles, straight from the formulas.
std::optional<Rational> oracle_distance(const std::string& name, const CodePoint& a,
                                        const CodePoint& b) {
  if (name == "reals" || name == "unit_interval" || name == "halfline" || name == "naturals" ||
      name == "shrink_intervals")
    return (a[0] - b[0]).abs();
  if (name == "cantor" || name == "baire") {
    for (std::size_t i = 0; i < std::max(a.size(), b.size()); ++i) {
      long x = i < a.size() ? as_long(a[i]) : 0, y = i < b.size() ? as_long(b[i]) : 0;
      if (x != y) return Rational::pow2(-static_cast<long>(i));
    }
    return Rational(0);
  }
  if (name == "comb") {  // f = identity
    Rational h = Rational::pow2(-as_long(a[0])) - Rational::pow2(-as_long(b[0]));
    return max(h.abs(), (a[1] - b[1]).abs());
  }
  return std::nullopt;
}

// Squared distance for the Hilbert comb.
Rational hilbert_sq(const CodePoint& a, const CodePoint& b) {
  auto norm = [](const CodePoint& p) { return p.size() == 0 ? r(0) : Rational::pow2(-as_long(p[0])); };
  if (a == b) return r(0);
  if (a.size() == 0 || b.size() == 0 || a[1] == b[1]) {
    Rational d = norm(a) - norm(b);
    return d * d;
  }
  return norm(a) * norm(a) + norm(b) * norm(b);
}

Json space_spec(const std::string& name) {
  if (name == "comb") return Json{{"space", "comb"}, {"f", {0, 1, 2, 3}}};
  return Json{{"space", name}};
}

const std::vector<std::string> kSpaces = {"reals",  "unit_interval", "halfline",
                                          "naturals", "cantor",      "baire",
                                          "comb",   "shrink_intervals", "hilbert_comb"};

TEST(Catalog, Examples) {
  auto unit = catalog("unit_interval");
  EXPECT_EQ(*unit->exact_distance(CodePoint::of(0), CodePoint::of(1)), r(1));
  auto comb = catalog(space_spec("comb"));
  EXPECT_TRUE(comb->admits(CodePoint({r(2), r(1, 4)})));
  EXPECT_FALSE(comb->admits(CodePoint({r(2), r(1, 3)})));
  EXPECT_EQ(*comb->exact_distance(CodePoint({r(0), r(1)}), CodePoint({r(1), r(1, 2)})), r(1, 2));
  auto hc = catalog("hilbert_comb");
  Bracket b = distance_bracket(*hc, CodePoint({r(1), r(0)}), CodePoint({r(1), r(1)}), 40);
  if (b.lo.sign() > 0) {
    EXPECT_LE(b.lo * b.lo, r(1, 2));
  }
  EXPECT_GE(b.hi * b.hi, r(1, 2));
  EXPECT_LT(b.hi - b.lo, Rational::pow2(-30));
}

TEST(Catalog, RejectsMalformed) {
  EXPECT_THROW(catalog(Json{{"space", "moon"}}), SpecError);
  EXPECT_THROW(catalog(Json{{"nospace", 1}}), SpecError);
  EXPECT_THROW(catalog(Json{{"space", "shrink_intervals"}, {"alpha", "1"}}), SpecError);
  EXPECT_THROW(catalog("cantor")->parse_literal("012"), SpecError);
  EXPECT_THROW(catalog("unit_interval")->parse_literal("3/2"), SpecError);
}

TEST(Catalog, LiteralsRoundTrip) {
  for (const auto& name : kSpaces) {
    auto s = catalog(space_spec(name));
    for (std::size_t i = 0; i < 64; ++i) {
      CodePoint a = s->code_point(i);
      ASSERT_TRUE(s->admits(a)) << name << " " << i;
      ASSERT_EQ(s->parse_literal(s->literal(a)), a) << name << " " << i;
    }
  }
}

TEST(Catalog, CombAdmissionMatchesFormula) {
  auto comb = catalog(space_spec("comb"));
  for (std::size_t i = 0; i < 2000; ++i) {
    CodePoint a = comb->code_point(i);
    ASSERT_LE(a[1], Rational::pow2(-as_long(a[0])));
    ASSERT_GT(a[1].sign(), 0);
  }
  std::mt19937_64 rng(3);
  for (int t = 0; t < 1000; ++t) {
    long k = static_cast<long>(rng() % 8);
    Rational q = r(static_cast<long>(rng() % 300) - 20, 256);
    bool expect = q.sign() > 0 && q <= Rational::pow2(-k);
    ASSERT_EQ(comb->admits(CodePoint({r(k), q})), expect) << k << " " << q.str();
  }
}

TEST(MetricProperty, AxiomsOnRandomTriples) {
  const Rational tol = Rational::pow2(-20);
  for (const auto& name : kSpaces) {
    auto s = catalog(space_spec(name));
    std::mt19937_64 rng(1000 + name.size());
    for (int t = 0; t < 1000; ++t) {
      CodePoint a = s->sample(rng), b = s->sample(rng), c = s->sample(rng);
      if (t % 7 == 0) b = a;
      Bracket ab = distance_bracket(*s, a, b, 24), ba = distance_bracket(*s, b, a, 24);
      Bracket ac = distance_bracket(*s, a, c, 24), cb = distance_bracket(*s, c, b, 24);
      Bracket aa = distance_bracket(*s, a, a, 24);
      ASSERT_LE(aa.hi, tol) << name;
      ASSERT_GE(ab.hi.sign(), 0) << name;
      ASSERT_LE(ab.lo, ba.hi) << name;
      ASSERT_LE(ba.lo, ab.hi) << name;
      ASSERT_LE(ab.lo, ac.hi + cb.hi + tol) << name;
      if (auto o = oracle_distance(name, a, b)) {
        ASSERT_LE(ab.lo, *o) << name;
        ASSERT_GE(ab.hi, *o) << name;
      } else if (name == "hilbert_comb") {
        Rational sq = hilbert_sq(a, b);
        if (ab.lo.sign() > 0) {
          ASSERT_LE(ab.lo * ab.lo, sq);
        }
        ASSERT_GE(ab.hi * ab.hi, sq);
      }
    }
  }
}

TEST(SplitProperty, CertificatesHold) {
  for (const auto& name : kSpaces) {
    auto s = catalog(space_spec(name));
    auto oracle = s->split_oracle();
    if (name == "naturals" || name == "hilbert_comb") {
      EXPECT_FALSE(oracle) << name;
      continue;
    }
    ASSERT_TRUE(oracle) << name;
    std::mt19937_64 rng(99);
    for (int t = 0; t < 300; ++t) {
      CodePoint c = s->sample(rng);
      Rational rad = Rational::pow2(-static_cast<long>(rng() % 12));
      auto p = (*oracle)(c, rad);
      if (name == "shrink_intervals" && !p) continue;  // a ball may hold one point of a tiny component
      ASSERT_TRUE(p) << name;
      ASSERT_TRUE(s->admits(p->first) && s->admits(p->second)) << name;
      ASSERT_GT(*oracle_distance(name, p->first, p->second), r(0)) << name;
      ASSERT_LT(*oracle_distance(name, c, p->first), rad) << name;
      ASSERT_LT(*oracle_distance(name, c, p->second), rad) << name;
    }
  }
}

TEST(MetricOnPoints, Examples) {
  auto cantor = catalog("cantor");
  Point x = point_from_code(CodePoint());
  Point y = point_from_code(cantor->parse_literal("01"));
  Approx d = metric_on_points(*cantor, x, y, 20);
  EXPECT_TRUE(d.contains(r(1, 2)));
  EXPECT_LE(d.error, Rational::pow2(-20));
  Approx same = metric_on_points(*cantor, y, y, 20);
  EXPECT_TRUE(same.contains(r(0)));

  auto comb = catalog(space_spec("comb"));
  Approx c = metric_on_points(*comb, point_from_code(CodePoint({r(0), r(1)})),
                              point_from_code(CodePoint({r(1), r(1, 2)})), 10);
  EXPECT_TRUE(c.contains(r(1, 2)));
}

TEST(MetricOnPoints, SymmetricOnSequences) {
  auto reals = catalog("reals");
  std::mt19937_64 rng(5);
  for (int t = 0; t < 200; ++t) {
    Rational c0 = r(static_cast<long>(rng() % 2000) - 1000, 97);
    Rational c1 = r(static_cast<long>(rng() % 2000) - 1000, 89);
    Point x = Point::from_sequence([c0](unsigned n) { return CodePoint::of(c0 + Rational::pow2(-static_cast<long>(n) - 1)); });
    Point y = Point::from_sequence([c1](unsigned n) { return CodePoint::of(c1 - Rational::pow2(-static_cast<long>(n) - 2)); });
    unsigned n = static_cast<unsigned>(rng() % 30);
    Approx a = metric_on_points(*reals, x, y, n), b = metric_on_points(*reals, y, x, n);
    ASSERT_TRUE(a.overlaps(b));
    ASSERT_TRUE(a.contains((c0 - c1).abs()));
    ASSERT_LE(a.error, Rational::pow2(-static_cast<long>(n)));
  }
}

TEST(ValidatePoint, Examples) {
  auto reals = catalog("reals");
  EXPECT_EQ(validate_point(*reals, point_from_code(CodePoint::of(r(3))), 10, 20).status,
            PointValidation::Status::Certified);
  Point jump = Point::from_sequence([](unsigned n) { return CodePoint::of(n == 0 ? r(0) : r(2)); });
  PointValidation v = validate_point(*reals, jump, 5, 20);
  EXPECT_EQ(v.status, PointValidation::Status::Violation);
  EXPECT_EQ(v.index, 0u);
  // Bisection towards sqrt 2: left endpoints of halving intervals.
  Point root2 = Point::from_sequence([](unsigned n) {
    Rational lo(1), hi(2);
    for (unsigned i = 0; i < n + 1; ++i) {
      Rational mid = (lo + hi) / Rational(2);
      if (mid * mid < Rational(2)) lo = mid; else hi = mid;
    }
    return CodePoint::of(lo);
  });
  EXPECT_EQ(validate_point(*reals, root2, 20, 30).status, PointValidation::Status::Certified);
}

TEST(ValidatePoint, ConstantsAcrossCatalog) {
  for (const auto& name : {"unit_interval", "cantor", "comb"}) {
    auto s = catalog(space_spec(name));
    for (std::size_t i : {0u, 5u, 17u})
      EXPECT_EQ(validate_point(*s, point_from_code(s->code_point(i)), 8, 20).status,
                PointValidation::Status::Certified)
          << name;
  }
}

TEST(IsolatedSearch, Examples) {
  auto unit = catalog("unit_interval");
  IsolatedSearch u = isolated_search(*unit, point_from_code(CodePoint::of(r(1, 2))), r(1, 4), 1000);
  ASSERT_TRUE(u.inhabitant);
  Rational d = ((*u.inhabitant)[0] - r(1, 2)).abs();
  EXPECT_GT(d.sign(), 0);
  EXPECT_LT(d, r(1, 4));

  auto nat = catalog("naturals");
  IsolatedSearch n = isolated_search(*nat, point_from_code(CodePoint::of(r(3))), r(1, 2), 500);
  EXPECT_FALSE(n.inhabitant);
  EXPECT_EQ(n.scanned, 500u);

  auto cantor = catalog("cantor");
  IsolatedSearch c = isolated_search(*cantor, point_from_code(CodePoint()), r(1, 8), 1000);
  ASSERT_TRUE(c.inhabitant);
  // The first 1 sits at index >= 3.
  for (std::size_t i = 0; i < std::min<std::size_t>(3, c.inhabitant->size()); ++i)
    EXPECT_EQ((*c.inhabitant)[i], r(0));
  EXPECT_GT(c.inhabitant->size(), 3u);
}

TEST(Enumeration, Helpers) {
  for (std::size_t z = 0; z < 500; ++z) {
    auto [x, y] = detail::unpair(z);
    ASSERT_EQ(detail::pair(x, y), z);
  }
  EXPECT_EQ(detail::calkin_wilf(1), r(1));
  EXPECT_EQ(detail::calkin_wilf(2), r(1, 2));
  EXPECT_EQ(detail::calkin_wilf(3), r(2));
  // Integer n sits at index 2^n - 1.
  EXPECT_EQ(detail::calkin_wilf(7), r(3));
}

}  // namespace
}  // namespace csms
