// Copyright 2026 The csms Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "core/sets.hpp"

namespace csms {

/// (a, r) Phi (b, s): f maps B(a, r) into B(b, s).
struct Quadruple {
  CodePoint a;
  Rational r;
  CodePoint b;
  Rational s;
};

/// Continuous function code.  Builders answer `localized` queries; the
/// enumeration is quadruple(pair(i, j)) = localized(code_point(i), j).
class FunctionCode {
 public:
  FunctionCode(SpacePtr domain, SpacePtr codomain)
      : domain_(std::move(domain)), codomain_(std::move(codomain)) {}
  virtual ~FunctionCode() = default;

  const SpacePtr& domain() const { return domain_; }
  const SpacePtr& codomain() const { return codomain_; }

  /// A quadruple (a, 2^-j, b, s), or nothing if the code has none at this
  /// scale.  j may be negative.
  virtual std::optional<Quadruple> localized(const CodePoint& a, long j) const = 0;
  virtual std::optional<Quadruple> quadruple(std::size_t m) const;
  /// Hand-built codes list their quadruples; eval scans them.
  virtual std::optional<std::size_t> table_size() const { return std::nullopt; }
  virtual Json spec() const = 0;

 private:
  SpacePtr domain_;
  SpacePtr codomain_;
};

using FunctionPtr = std::shared_ptr<const FunctionCode>;

struct EvalResult {
  std::optional<Quadruple> quad;  // certified d(x,a) < r and s < q
  std::size_t depth = 0;
};

EvalResult eval(const FunctionCode& f, const Point& x, const Rational& q, std::size_t depth);

struct FragmentCheck {
  enum class Status { Certified, Violation, Indeterminate };
  Status status = Status::Certified;
  std::size_t first = 0, second = 0;  // offending pair
};

/// Any two quadruples among the first n whose domain balls certifiably
/// share a center point must have d(b, b') < s + s'.
FragmentCheck validate_fragment(const FunctionCode& f, std::size_t n, unsigned k);

/// Closed set with a distance oracle.
struct LocatedSet {
  SepClosedCode generators;
  std::function<Real(const Point&)> distance;
  std::vector<CodePoint> points;  // nonempty for finite sets

  static LocatedSet finite(SpacePtr space, std::vector<CodePoint> points);
};

SpacePtr real_line();

FunctionPtr make_const(SpacePtr domain, Rational c);
FunctionPtr make_dist_to(SpacePtr domain, CodePoint a);
/// x -> max(0, r - d(a, x)).
FunctionPtr make_tent(SpacePtr domain, CodePoint a, Rational r);
enum class Combine { Add, Max, Min };
FunctionPtr make_combine(Combine op, FunctionPtr f, FunctionPtr g);
FunctionPtr make_scale(Rational c, FunctionPtr f);
/// g after f.
FunctionPtr make_compose(FunctionPtr g, FunctionPtr f);
FunctionPtr make_table(SpacePtr domain, SpacePtr codomain, std::vector<Quadruple> quads);
/// x -> g0(x) / (g0(x) + g1(x)).  Throws OperationError
/// "SeparationUncertified" unless d(C0, C1) >= separation is certified on
/// the first `samples` generators of each set.
FunctionPtr make_urysohn(SpacePtr domain, LocatedSet c0, LocatedSet c1, Rational separation,
                         std::size_t samples = 256);

}  // namespace csms
