// Copyright 2026 The csms Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

#include "core/functions.hpp"

namespace csms {

/// Levels n <= max_level of finite 2^-n dense sets of code points.
struct NetFamily {
  SpacePtr space;
  unsigned max_level = 0;

  std::vector<CodePoint> level(unsigned n) const;
};

/// Throws OperationError "NotEffectivelyCompact".
NetFamily nets_for(SpacePtr space, unsigned max_level);

/// Level n with 2^-n+1 <= eps, pruned greedily: a net point within
/// eps - 2^-n of a kept one is dropped.  Every point of the space is then
/// within eps of the result.  Throws OperationError "LevelExceeded".
std::vector<CodePoint> eps_net(const NetFamily& nets, const Rational& eps);

struct MinResult {
  Rational lower;   // <= inf f
  Rational upper;   // >= inf f, attained bound at `argmin`
  unsigned level = 0;
  std::size_t cells = 0;
  CodePoint argmin;

  Approx value() const {
    return {(lower + upper) / Rational(2), (upper - lower) / Rational(2)};
  }
};

/// Cell lower bound at level n: b - s for localized(x, n-1), whose domain
/// ball contains B(x, 2^-n).  Levels double until upper - lower <= eps.
/// Throws OperationError "DepthExhausted".
MinResult min_on_compact(const FunctionCode& f, const NetFamily& nets, const Rational& eps);

/// Lower bound used for one cell, recomputed by certificate checks.
std::optional<Rational> min_cell_lower(const FunctionCode& f, const CodePoint& x, unsigned level);

struct CellCover {
  CodePoint center;
  std::size_t member = 0;
  std::size_t ball = 0;
};

struct HeineBorelResult {
  bool found = false;
  unsigned level = 0;
  std::vector<std::size_t> indices;  // sorted member indices
  std::vector<CellCover> cells;
  std::optional<CodePoint> failed_cell;  // when not found
};

/// Finds a level where every net cell B(x, 2^-n) is swallowed by some ball
/// among the first `budget` members: d(x, a_j) + 2^-n < q_j.
HeineBorelResult heine_borel_subcover(const Covering& covering, const NetFamily& nets,
                                      std::size_t budget);

/// Level schedule 0, 1, 2, 4, 8, ... capped at max_level.
std::vector<unsigned> doubling_levels(unsigned start, unsigned max_level);

}  // namespace csms
