// Copyright 2026 The csms Authors
// SPDX-License-Identifier: Apache-2.0

#include "core/families.hpp"

namespace csms {

Covering unit_balls(SpacePtr naturals, std::size_t horizon) {
  if (naturals->name() != "naturals") throw SpecError("unit_balls needs the naturals");
  Covering c;
  c.space = naturals;
  c.horizon = horizon;
  c.member = [](std::size_t n) {
    return OpenSetCode::of_balls({Ball{CodePoint::of(Rational(static_cast<long>(n))), 1}});
  };
  c.spec = naturals->spec();
  c.spec["family"] = "unit_balls";
  c.spec["horizon"] = horizon;
  return c;
}

Covering staggered_halfline(SpacePtr halfline, std::size_t horizon) {
  if (halfline->name() != "halfline") throw SpecError("staggered_halfline needs the halfline");
  Covering c;
  c.space = halfline;
  c.horizon = horizon;
  c.member = [](std::size_t i) {
    long n = static_cast<long>(i);
    Rational q = Rational::pow2(-n - 2);
    Rational center = Rational(n) + Rational(1, 2) - q;
    Rational radius = Rational(1, 2) + Rational(3) * q;
    return OpenSetCode::of_balls({Ball{CodePoint::of(center), radius}});
  };
  c.spec = halfline->spec();
  c.spec["family"] = "staggered";
  c.spec["horizon"] = horizon;
  return c;
}

Covering half_open_shrink(SpacePtr shrink, std::size_t components,
                          std::size_t balls_per_member) {
  Real alpha = shrink_alpha(*shrink);
  Rational alpha_lo;
  for (unsigned k = 4;; k *= 2) {
    alpha_lo = approx(alpha, k).lower();
    if (alpha_lo.sign() > 0) break;
  }
  std::vector<OpenSetCode> members;
  for (std::size_t i = 0; i < components; ++i) {
    long n = static_cast<long>(i);
    Rational scale = Rational::pow2(-n);
    Rational u = scale * alpha_lo / Rational(4);
    std::vector<Ball> right, left;
    for (std::size_t k = 0; k < balls_per_member; ++k) {
      Approx a = approx(alpha, static_cast<unsigned>(k) + 2);
      Rational beta = max(Rational(0), scale * (a.value - Rational::pow2(-static_cast<long>(k) - 1)));
      right.push_back({CodePoint::of(Rational(n) + u), u + beta});
      left.push_back({CodePoint::of(Rational(n) - u), u + beta});
    }
    members.push_back(OpenSetCode::of_balls(std::move(right), true));
    members.push_back(OpenSetCode::of_balls(std::move(left), true));
  }
  Covering c = Covering::of_members(shrink, std::move(members));
  c.spec = shrink->spec();
  c.spec["family"] = "half_open";
  c.spec["components"] = components;
  c.spec["balls_per_member"] = balls_per_member;
  return c;
}

Point shrink_endpoint(SpacePtr shrink, long n, bool left) {
  Real alpha = shrink_alpha(*shrink);
  Rational scale = Rational::pow2(-n);
  // c_m in [alpha - 3 2^-m-3, alpha - 2^-m-3], strictly inside the component.
  return Point::from_sequence([alpha, scale, n, left](unsigned m) {
    Rational c = approx(alpha, m + 4).lower() - Rational::pow2(-static_cast<long>(m) - 3);
    Rational off = scale * c;
    return CodePoint::of(left ? Rational(n) - off : Rational(n) + off);
  });
}

}  // namespace csms
