// Copyright 2026 The csms Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "core/compactness.hpp"

namespace csms {

struct LebesgueCell {
  CodePoint center;
  std::size_t index = 0;  // covering ball
  Rational slack;         // lower bound of r_j - d(a_j, center)
};

struct LebesgueCertificate {
  Rational q_lower;  // Lebesgue number
  Rational q_upper;  // >= min over x of max_j max(0, r_j - d(a_j, x))
  unsigned level = 0;
  Rational cell_radius;
  std::vector<LebesgueCell> cells;
  std::size_t upper_cell = 0;  // cell whose tents attain q_upper
};

/// One net level: q_lower = min over cells of (best slack - 2^-level).
/// Throws OperationError "NotACovering" if a cell center lies outside
/// every ball.
LebesgueCertificate lebesgue_at_level(const Covering& covering, const NetFamily& nets,
                                      unsigned level);

/// Raises the level from `start` until q_lower > 0 and
/// q_upper - q_lower <= eps.  Throws OperationError "NotACovering" or
/// "LevelExceeded".
LebesgueCertificate lebesgue_number(const Covering& covering, const NetFamily& nets,
                                    const Rational& eps, unsigned start = 0);

/// Seeded samples drawn with std::mt19937_64 and Space::sample.
std::vector<CodePoint> seeded_samples(const Space& s, std::size_t count, std::uint64_t seed);

struct VerifiedSample {
  CodePoint x;
  std::optional<std::size_t> member;  // ball with d(x, a) + q <= r
  std::size_t ball = 0;               // within the member
};

struct VerifyResult {
  std::vector<VerifiedSample> samples;
  std::optional<std::size_t> counter;  // first sample without a certificate
};

VerifyResult verify_lebesgue(const Covering& covering, const Rational& q,
                             const std::vector<CodePoint>& samples, std::size_t depth);

struct RefinedSet {
  std::optional<Rational> radius;  // q_{n,b} when certified positive
  OpenSetCode set;                 // P(b, q_{n,b}) or empty
};

/// q_{n,b} = min(r_n - d(a_n, b), 2^-n).
RefinedSet refine_covering(const Covering& covering, const CodePoint& b, std::size_t n);

/// Least k with 2^-k < q.
std::size_t subcover_from_lebesgue(const Rational& q);

struct CoverageCheck {
  std::size_t checked = 0;
  std::optional<std::size_t> uncovered;  // first sample outside the first k members
};

CoverageCheck check_prefix_coverage(const Covering& covering, std::size_t k,
                                    const std::vector<CodePoint>& samples);

/// {B(a_n, s) : s < r_n}: slot m = pair(n, e) lists p/(e+1) < r_n in
/// lowest terms, p ascending.
Covering atsuji_refinement(const Covering& covering, std::size_t horizon);

struct Escape {
  std::size_t member = 0;
  CodePoint b;
};

struct WitnessReport {
  CodePoint a;
  std::size_t candidate = 0;  // enumeration index of a
  Rational eps;
  std::size_t horizon = 0;    // members checked
  std::vector<Escape> escapes;
};

struct WitnessSearch {
  std::optional<WitnessReport> report;
  std::size_t scanned = 0;
};

/// Certified b outside every ball of the member (up to its length).
bool escapes_member(const Space& s, const CodePoint& b, const OpenSetCode& member,
                    std::size_t ball_horizon);

/// Scans code points a by index.  Candidates not certified inside some
/// member are skipped.  Escapes are tried among a and its neighbors.
WitnessSearch strong_witness_search(const Covering& covering, const Rational& eps,
                                    std::size_t point_budget, std::size_t escape_budget);

/// Replays a witness report exactly.
bool check_witness(const Covering& covering, const WitnessReport& report);

struct PointWitnessCheck {
  bool ok = false;
  std::optional<std::size_t> failed_member;
};

/// Checks a real witness x at eps with escape points y_m supplied per member.
PointWitnessCheck verify_point_witness(const Covering& covering, const Point& x,
                                       const Rational& eps,
                                       const std::function<Point(std::size_t)>& escape,
                                       unsigned max_precision = 256);

struct HalvingResult {
  CodePoint a;
  unsigned index = 0;  // a = x_index
  Rational bound;      // certified d(x, a) < bound <= eps / 2
};

HalvingResult witness_halving(const Space& s, const Point& x, const Rational& eps);

struct WitnessPair {
  CodePoint b0, b1;
  WitnessReport report;
};

/// m < M with eps = 2^-m.  Throws OperationError "WitnessUnavailable".
std::vector<WitnessPair> witness_pairs(const Covering& covering, std::size_t m_count,
                                       std::size_t point_budget, std::size_t escape_budget,
                                       std::size_t inhabitant_budget);

/// h(0) = 0; h(n+1) = least k > h(n) with b^i_m != b^j_h(n) for all m >= k.
std::vector<std::size_t> thin_pairs(const std::vector<std::pair<CodePoint, CodePoint>>& pairs);

struct SeparatedSequence {
  std::vector<CodePoint> points;
  std::vector<std::size_t> indices;
  bool complete = false;  // false: budget exhausted (totally bounded at this budget)
  std::size_t scanned = 0;
};

SeparatedSequence separated_sequence(const Space& s, const Rational& eps, std::size_t count,
                                     std::size_t budget);

/// a1_n in P(a0_n, 2^-n-1 eps).  Throws OperationError "WitnessUnavailable".
std::vector<std::pair<CodePoint, CodePoint>> punctured_partners(const Space& s,
                                                                const std::vector<CodePoint>& a0,
                                                                const Rational& eps,
                                                                std::size_t budget);

struct Violation {
  unsigned k = 0;
  std::optional<std::size_t> pair;  // first pair with d < 2^-k
  Rational distance_upper;
  Quadruple at0, at1;
  Rational gap_lower;
};

struct NonuniformResult {
  FunctionPtr f;
  Rational separation;
  std::vector<Violation> schedule;
};

/// Urysohn function for C0 = {b0}, C1 = {b1} with the certified minimum
/// cross distance as separation; schedule for k = 0..levels.
NonuniformResult nonuniform_function(SpacePtr space,
                                     const std::vector<std::pair<CodePoint, CodePoint>>& pairs,
                                     unsigned levels, const Rational& tolerance);

struct ModulusResult {
  Rational delta;
  unsigned level = 0;       // net level of the pullback covering
  Covering covering;
  LebesgueCertificate certificate;
  std::size_t pairs_checked = 0;
  std::size_t violations = 0;
};

/// Throws OperationError "DepthExhausted".
ModulusResult modulus_uc(const FunctionCode& f, const NetFamily& nets, const Rational& eps,
                         std::size_t samples, std::uint64_t seed);

}  // namespace csms
