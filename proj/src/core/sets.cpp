// Copyright 2026 The csms Authors
// SPDX-License-Identifier: Apache-2.0

#include "core/sets.hpp"

#include <algorithm>

namespace csms {

OpenSetCode OpenSetCode::of_balls(std::vector<Ball> balls, bool truncated) {
  for (const Ball& b : balls)
    if (b.radius.sign() <= 0) throw SpecError("open set ball with nonpositive radius");
  OpenSetCode u;
  u.length_ = balls.size();
  u.balls_ = std::move(balls);
  u.truncated_ = truncated;
  return u;
}

OpenSetCode OpenSetCode::enumerate(Generator gen, std::optional<std::size_t> length) {
  OpenSetCode u;
  u.gen_ = std::move(gen);
  u.length_ = length;
  return u;
}

std::optional<Ball> OpenSetCode::ball(std::size_t n) const {
  if (length_ && n >= *length_) return std::nullopt;
  if (gen_) return gen_(n);
  return balls_[n];
}

Bracket point_bracket(const Space& s, const Point& x, const CodePoint& b, unsigned k) {
  if (x.constant_value()) return distance_bracket(s, *x.constant_value(), b, k);
  Approx ap = metric_on_points(s, x, Point::constant(b), k);
  return {max(Rational(0), ap.lower()), ap.upper()};
}

Certainty point_distance_less(const Space& s, const Point& x, const CodePoint& b,
                              const Rational& q, unsigned k) {
  if (x.constant_value()) return distance_less(s, *x.constant_value(), b, q, std::max(k, 8u));
  for (unsigned p = 8;; p *= 2) {
    unsigned prec = std::min(p, k);
    Bracket br = point_bracket(s, x, b, prec);
    if (br.hi < q) return Certainty::Yes;
    if (br.lo >= q) return Certainty::No;
    if (prec == k) return Certainty::Unknown;
  }
}

Membership open_membership(const Space& s, const Point& x, const OpenSetCode& u,
                           std::size_t depth, unsigned k) {
  Membership m;
  std::size_t h = u.horizon(depth);
  for (std::size_t n = 0; n < h; ++n) {
    m.depth = n + 1;
    auto ball = u.ball(n);
    if (!ball) continue;
    if (point_distance_less(s, x, ball->center, ball->radius, k) == Certainty::Yes) {
      m.yes = true;
      m.index = n;
      return m;
    }
  }
  m.depth = h;
  return m;
}

OpenSetCode punctured_ball(SpacePtr space, const Point& x, const Rational& q, unsigned k) {
  if (q.sign() <= 0) throw std::invalid_argument("punctured_ball: q must be positive");
  return OpenSetCode::enumerate([space, x, q, k](std::size_t n) -> std::optional<Ball> {
    CodePoint b = space->code_point(n);
    Bracket br = point_bracket(*space, x, b, k);
    if (br.lo.sign() <= 0 || !(br.hi < q)) return std::nullopt;
    return Ball{b, min(br.lo, q - br.hi) / Rational(2)};
  });
}

Approx dist_upper_sepclosed(const Space& s, const Point& x, const SepClosedCode& c,
                            std::size_t n, unsigned k) {
  if (n == 0) throw std::invalid_argument("dist_upper_sepclosed: depth must be positive");
  std::size_t h = c.length ? std::min(*c.length, n) : n;
  if (h == 0) throw std::invalid_argument("dist_upper_sepclosed: no generators");
  std::optional<Rational> best;
  for (std::size_t i = 0; i < h; ++i) {
    Point g = c.generator(i);
    Rational hi;
    if (x.constant_value() && g.constant_value()) {
      hi = distance_bracket(s, *x.constant_value(), *g.constant_value(), k + 1).hi;
    } else {
      hi = metric_on_points(s, x, g, k).upper();
    }
    if (!best || hi < *best) best = hi;
  }
  return {*best, Rational::pow2(-static_cast<long>(k))};
}

Approx dist_lower_complement(const Space& s, const Point& x, const OpenSetCode& u,
                             std::size_t depth, unsigned k) {
  if (depth == 0) throw std::invalid_argument("dist_lower_complement: depth must be positive");
  Rational best(0);
  std::size_t h = u.horizon(depth);
  for (std::size_t n = 0; n < h; ++n) {
    auto ball = u.ball(n);
    if (!ball) continue;
    Rational slack = ball->radius - point_bracket(s, x, ball->center, k + 1).hi;
    if (slack > best) best = slack;
  }
  return {best, Rational::pow2(-static_cast<long>(k))};
}

// ---------------------------------------------------------------------------

Covering Covering::of_balls(SpacePtr space, std::vector<Ball> balls) {
  std::vector<OpenSetCode> members;
  Json arr = Json::array();
  for (Ball& b : balls) {
    if (!space->admits(b.center)) throw SpecError("covering ball center is not a code point");
    arr.push_back(Json{{"center", space->literal(b.center)}, {"radius", b.radius.str()}});
    members.push_back(OpenSetCode::of_balls({b}));
  }
  Covering c = of_members(space, std::move(members));
  c.spec = space->spec();
  c.spec["balls"] = arr;
  return c;
}

Covering Covering::of_members(SpacePtr space, std::vector<OpenSetCode> members) {
  Covering c;
  c.space = space;
  c.count = members.size();
  c.horizon = members.size();
  auto shared = std::make_shared<std::vector<OpenSetCode>>(std::move(members));
  c.member = [shared](std::size_t n) { return (*shared)[n]; };
  c.spec = space->spec();
  return c;
}

std::vector<Ball> Covering::balls() const {
  std::vector<Ball> out;
  for (std::size_t n = 0; n < members(); ++n) {
    OpenSetCode u = member(n);
    if (u.length() != std::optional<std::size_t>(1) || !u.ball(0))
      throw SpecError("operation needs a covering by single balls");
    out.push_back(*u.ball(0));
  }
  return out;
}

}  // namespace csms
