// Copyright 2026 The csms Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <set>
#include <string>
#include <vector>

#include "core/functions.hpp"

namespace csms {

struct SchemeEntry {
  CodePoint a;
  Rational q;
};

/// Balls B(a_s, q_s) for binary words s of length <= depth.  Words are
/// strings over {'0','1'}; the root is "".
class BallScheme {
 public:
  BallScheme(SpacePtr space, unsigned depth, std::vector<SchemeEntry> entries)
      : space_(std::move(space)), depth_(depth), entries_(std::move(entries)) {}

  const SpacePtr& space() const { return space_; }
  unsigned depth() const { return depth_; }
  /// Throws OperationError "DepthExceeded" past the depth.
  const SchemeEntry& at(const std::string& word) const;
  const std::vector<SchemeEntry>& entries() const { return entries_; }

  /// Heap position of a word: 2^len - 1 + value.
  static std::size_t index_of(const std::string& word);
  static std::string word_of(std::size_t index);

  Json to_json() const;

 private:
  SpacePtr space_;
  unsigned depth_;
  std::vector<SchemeEntry> entries_;
};

/// Root B(root, 1/2); children q = min((q_s - d_hi(a_s, p_i)) / 2, d_lo(p_0, p_1) / 3).
/// The default root is 1/2 on the unit interval and code point 0 elsewhere.
/// Throws OperationError "OracleFailure".
BallScheme build_scheme(SpacePtr space, const SplitOracle& oracle, unsigned depth,
                        std::optional<CodePoint> root = std::nullopt);
BallScheme build_scheme(SpacePtr space, unsigned depth);

struct SchemeCheck {
  std::optional<std::string> nesting;     // d(a_s, a_si) + q_si < q_s fails
  std::optional<std::string> disjoint;    // d(a_s0, a_s1) >= q_s0 + q_s1 fails
  std::optional<std::string> radius;      // q_s <= 2^-lh(s)-1 fails
  bool ok() const { return !nesting && !disjoint && !radius; }
};

/// Exact for rational metrics, otherwise brackets at precision 128.
SchemeCheck check_scheme(const BallScheme& scheme);

/// a_{x|0}, ..., a_{x|n}.  x is a binary word of length >= n.
std::vector<CodePoint> phi_apply(const BallScheme& scheme, const std::string& x, unsigned n);
/// phi(x) for x a point of Cantor space, defined up to the scheme depth.
Point phi_point(const BallScheme& scheme, const Point& x);

/// phi as a function code from Cantor space: localized(a, j) uses the
/// prefix of length j + 1.
FunctionPtr make_embedding(const BallScheme& scheme);

/// Balls (b, m/2) with m = min over |s| = depth of d_lo(b, a_s) - q_s > 0,
/// b among the first `count` code points.
OpenSetCode complement_open(const BallScheme& scheme, std::size_t count);

struct TreeSubcover {
  std::vector<std::string> words;  // balls B(a_s, q_s) used next to U
  std::size_t anchors_checked = 0;
};

/// {U} plus the minimal words outside T (the root when T is empty).  Every
/// depth-level anchor is checked against its exit ball.  Throws
/// OperationError "DepthExhausted" when T reaches the scheme depth.
TreeSubcover tree_covering_subcover(const BallScheme& scheme, const std::set<std::string>& tree);

}  // namespace csms
