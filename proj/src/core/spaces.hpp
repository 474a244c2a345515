// Copyright 2026 The csms Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "core/numerics.hpp"

namespace csms {

using Json = nlohmann::json;

/// An element of the dense set A.  Coordinates are space-specific: a single
/// rational for subsets of R, a digit word for Cantor/Baire space, (k, q)
/// for the comb, (m, n) or nothing (origin) for the Hilbert comb.
struct CodePoint {
  std::vector<Rational> coords;

  CodePoint() = default;
  explicit CodePoint(std::vector<Rational> c) : coords(std::move(c)) {}
  static CodePoint of(const Rational& r) { return CodePoint({r}); }

  const Rational& operator[](std::size_t i) const { return coords[i]; }
  std::size_t size() const { return coords.size(); }

  friend bool operator==(const CodePoint&, const CodePoint&) = default;
  friend std::strong_ordering operator<=>(const CodePoint& a, const CodePoint& b) {
    if (auto c = a.coords.size() <=> b.coords.size(); c != 0) return c;
    for (std::size_t i = 0; i < a.coords.size(); ++i)
      if (auto c = a.coords[i] <=> b.coords[i]; c != 0) return c;
    return std::strong_ordering::equal;
  }
};

/// A point of the completion: n -> code point with d(x_n, x_n+1) < 2^-n.
class Point {
 public:
  using Sequence = std::function<CodePoint(unsigned)>;

  static Point constant(CodePoint a);
  static Point from_sequence(Sequence seq);

  CodePoint at(unsigned n) const;
  const std::optional<CodePoint>& constant_value() const;

 private:
  struct Node;
  std::shared_ptr<Node> node_;
};

inline Point point_from_code(CodePoint a) { return Point::constant(std::move(a)); }

struct Ball {
  CodePoint center;
  Rational radius;
};

struct SplitPair {
  CodePoint first;
  CodePoint second;
};

/// (center, radius) -> two distinct code points inside the ball.
using SplitOracle = std::function<std::optional<SplitPair>(const CodePoint&, const Rational&)>;

/// Code for a complete separable metric space: an enumeration of A plus
/// the metric on A.  Implementations are immutable.
class Space {
 public:
  virtual ~Space() = default;

  virtual std::string name() const = 0;
  /// The spec object this space was built from, e.g. {"space":"comb","f":[0,1]}.
  virtual Json spec() const { return Json{{"space", name()}}; }

  /// Fixed enumeration of A; every index is valid.
  virtual CodePoint code_point(std::size_t index) const = 0;
  virtual bool admits(const CodePoint& a) const = 0;

  /// Rational-valued metrics return the exact distance.
  virtual std::optional<Rational> exact_distance(const CodePoint& a, const CodePoint& b) const = 0;
  virtual Real distance(const CodePoint& a, const CodePoint& b) const;

  /// Up to `count` code points b != c with d(c, b) < radius, in a fixed
  /// order (nearest scales first).
  virtual std::vector<CodePoint> neighbors(const CodePoint& c, const Rational& radius,
                                           std::size_t count) const = 0;

  /// Present for perfect spaces.
  virtual std::optional<SplitOracle> split_oracle() const { return std::nullopt; }

  /// Documented per-space sampling distribution over code points.
  virtual CodePoint sample(std::mt19937_64& rng) const = 0;

  virtual Json literal(const CodePoint& a) const = 0;
  virtual CodePoint parse_literal(const Json& j) const = 0;

  /// Rational metric for every pair (true for everything but the Hilbert comb).
  virtual bool rational_metric() const { return true; }

  /// Compact spaces with a known net construction.
  virtual bool effectively_compact() const { return false; }
  /// Finite set of code points with every point within < 2^-n of one of
  /// them.  Only for effectively compact spaces.
  virtual std::vector<CodePoint> net(unsigned n) const;
};

using SpacePtr = std::shared_ptr<const Space>;

/// Builds a catalog space from {"space": name, ...params}.  Throws SpecError.
SpacePtr catalog(const Json& spec);
inline SpacePtr catalog(const std::string& name) { return catalog(Json{{"space", name}}); }
inline SpacePtr catalog(const char* name) { return catalog(std::string(name)); }

/// Named catalog constructors with parameters.
SpacePtr make_comb(std::vector<long> table);
SpacePtr make_shrink_intervals(Real alpha, Json alpha_spec);
/// The alpha parameter of a shrink_intervals space.  Throws SpecError.
Real shrink_alpha(const Space& s);

/// Rational bracket [lo, hi] of d(a, b) at precision k (exact when possible).
struct Bracket {
  Rational lo;
  Rational hi;
};
Bracket distance_bracket(const Space& s, const CodePoint& a, const CodePoint& b, unsigned k = 64);

/// Certified d(a,b) < q / d(a,b) >= q.
Certainty distance_less(const Space& s, const CodePoint& a, const CodePoint& b, const Rational& q,
                        unsigned max_precision = 96);
Certainty distance_at_least(const Space& s, const CodePoint& a, const CodePoint& b,
                            const Rational& q, unsigned max_precision = 96);

/// d(x, y) with total error <= 2^-n.
Approx metric_on_points(const Space& s, const Point& x, const Point& y, unsigned n);

struct PointValidation {
  enum class Status { Certified, Violation, Indeterminate };
  Status status;
  unsigned index = 0;  // first failing n for Violation / Indeterminate
};

/// Checks d(x_n, x_n+1) < 2^-n for n < depth at precision k.
PointValidation validate_point(const Space& s, const Point& x, unsigned depth, unsigned k);

struct IsolatedSearch {
  std::optional<CodePoint> inhabitant;  // certified 0 < d(x,b) < q
  std::size_t scanned = 0;
};

/// Looks for a code point in P(x, q).  Scans nearby candidates first, then
/// the space enumeration; `budget` bounds the total number scanned.
IsolatedSearch isolated_search(const Space& s, const Point& x, const Rational& q,
                               std::size_t budget);

namespace detail {

/// Calkin-Wilf enumeration of positive rationals, i >= 1.
Rational calkin_wilf(std::size_t i);
/// Inverse Cantor pairing.
std::pair<std::size_t, std::size_t> unpair(std::size_t z);
std::size_t pair(std::size_t x, std::size_t y);

}  // namespace detail

}  // namespace csms
