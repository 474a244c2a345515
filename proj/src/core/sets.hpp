// Copyright 2026 The csms Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "core/spaces.hpp"

namespace csms {

/// Open set coded by an enumeration of balls.  A slot may be empty, so an
/// enumeration that never produces a ball codes the empty set.
class OpenSetCode {
 public:
  using Generator = std::function<std::optional<Ball>(std::size_t)>;

  OpenSetCode() = default;
  /// Finite union.  `truncated` marks a finite prefix of an infinite union.
  static OpenSetCode of_balls(std::vector<Ball> balls, bool truncated = false);
  static OpenSetCode enumerate(Generator gen, std::optional<std::size_t> length = std::nullopt);

  std::optional<Ball> ball(std::size_t n) const;
  /// nullopt for infinite enumerations.
  std::optional<std::size_t> length() const { return length_; }
  bool truncated() const { return truncated_; }
  /// Number of slots consulted at a given search depth.
  std::size_t horizon(std::size_t depth) const {
    return length_ ? std::min(*length_, depth) : depth;
  }

 private:
  std::vector<Ball> balls_;
  Generator gen_;
  std::optional<std::size_t> length_ = 0;
  bool truncated_ = false;
};

/// Closure of a sequence of points.
struct SepClosedCode {
  std::function<Point(std::size_t)> generator;
  std::optional<std::size_t> length;  // nullopt: infinite
};

/// Rational bracket of d(x, b).  Exact for constant x in rational spaces.
Bracket point_bracket(const Space& s, const Point& x, const CodePoint& b, unsigned k);

/// Certified d(x, b) < q, trying precisions up to k.
Certainty point_distance_less(const Space& s, const Point& x, const CodePoint& b,
                              const Rational& q, unsigned k);

struct Membership {
  bool yes = false;
  std::size_t index = 0;  // witnessing ball when yes
  std::size_t depth = 0;  // slots scanned
};

Membership open_membership(const Space& s, const Point& x, const OpenSetCode& u,
                           std::size_t depth, unsigned k);

/// P(x, q) = B(x, q) \ {x}: one ball per code point b with 0 < d(x,b) < q,
/// of radius min(d_lo, q - d_hi) / 2.
OpenSetCode punctured_ball(SpacePtr space, const Point& x, const Rational& q, unsigned k = 64);

/// min over the first n generators of d(x, generator); the value is an
/// upper bound of the distance to the closure.
Approx dist_upper_sepclosed(const Space& s, const Point& x, const SepClosedCode& c,
                            std::size_t n, unsigned k);

/// max(0, max_n (q_n - d(x, a_n))) over the first `depth` balls; the value
/// never exceeds the distance from x to the complement of U.
Approx dist_lower_complement(const Space& s, const Point& x, const OpenSetCode& u,
                             std::size_t depth, unsigned k);

// ---------------------------------------------------------------------------

/// An open covering: members are open sets, each usually a single ball.
/// Infinite families are consulted up to `horizon` members.
struct Covering {
  SpacePtr space;
  std::function<OpenSetCode(std::size_t)> member;
  std::optional<std::size_t> count;  // finite families
  std::size_t horizon = 0;
  Json spec;

  std::size_t members() const { return count ? *count : horizon; }

  static Covering of_balls(SpacePtr space, std::vector<Ball> balls);
  static Covering of_members(SpacePtr space, std::vector<OpenSetCode> members);

  /// Balls of a covering whose members are single balls.  Throws
  /// SpecError otherwise.
  std::vector<Ball> balls() const;
};

}  // namespace csms
