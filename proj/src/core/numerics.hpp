// Copyright 2026 The csms Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace csms {

/// Raised for malformed user input (rationals, specs, literals).
class SpecError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A well-formed request that the operation could not certify, e.g.
/// "DepthExhausted" or "NotEffectivelyCompact".  `kind` is the stable name.
class OperationError : public std::runtime_error {
 public:
  OperationError(std::string kind, const std::string& what)
      : std::runtime_error(what), kind_(std::move(kind)) {}
  const std::string& kind() const { return kind_; }

 private:
  std::string kind_;
};

/// Exact rational in canonical form (denominator > 0, gcd 1).
class Rational {
 public:
  Rational() = default;
  Rational(long v) : v_(v) {}  // NOLINT(google-explicit-constructor)
  Rational(int v) : v_(static_cast<long>(v)) {}  // NOLINT
  Rational(long num, long den);
  explicit Rational(const mpz_class& v) : v_(v) {}
  explicit Rational(mpq_class v) : v_(std::move(v)) { v_.canonicalize(); }

  /// Parses "p/q" or "p" (optional sign on p). Throws SpecError.
  static Rational parse(std::string_view text);
  /// 2^e for any integer e.
  static Rational pow2(long e);

  /// Canonical "p/q" form, always with an explicit denominator.
  std::string str() const;

  const mpq_class& raw() const { return v_; }
  mpz_class num() const { return v_.get_num(); }
  mpz_class den() const { return v_.get_den(); }

  int sign() const { return sgn(v_); }
  bool is_integer() const { return v_.get_den() == 1; }
  Rational abs() const { return Rational(mpq_class(::abs(v_))); }
  mpz_class floor() const;
  double to_double() const { return v_.get_d(); }

  /// Least k with 2^-k <= |this| (this > 0).  Used to size precision.
  long floor_log2() const;

  Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
  Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
  Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }
  Rational& operator/=(const Rational& o);

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
  Rational operator-() const { return Rational(mpq_class(-v_)); }

  friend bool operator==(const Rational& a, const Rational& b) { return a.v_ == b.v_; }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    int c = cmp(a.v_, b.v_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

 private:
  mpq_class v_;
};

inline Rational min(const Rational& a, const Rational& b) { return a < b ? a : b; }
inline Rational max(const Rational& a, const Rational& b) { return a < b ? b : a; }

/// A rational value with an error radius: the true value lies in
/// [value - error, value + error].
struct Approx {
  Rational value;
  Rational error;

  Rational lower() const { return value - error; }
  Rational upper() const { return value + error; }
  bool contains(const Rational& x) const { return lower() <= x && x <= upper(); }
  bool overlaps(const Approx& o) const {
    return lower() <= o.upper() && o.lower() <= upper();
  }
};

/// Fast Cauchy real: approximant(n) and approximant(n+1) differ by less
/// than 2^-n, so |x - approximant(n)| < 2^-n+1.  Immutable and shareable;
/// approximants are computed once and cached under a lock.
class Real {
 public:
  using Approximant = std::function<Rational(unsigned)>;

  Real() : Real(Rational(0)) {}
  Real(const Rational& c);  // NOLINT(google-explicit-constructor)
  Real(long c) : Real(Rational(c)) {}  // NOLINT
  Real(int c) : Real(Rational(c)) {}  // NOLINT

  /// Wraps a sequence that already satisfies the fast-Cauchy condition.
  static Real from_approximant(Approximant f);
  /// Square root of a nonnegative rational, by dyadic bisection.
  static Real sqrt(const Rational& c);

  Rational approximant(unsigned n) const;
  /// Exact value when the real was built from a rational constant.
  const std::optional<Rational>& exact() const;

 private:
  struct Node;
  std::shared_ptr<Node> node_;
};

/// approximant(n) with error 2^-n+1.
Approx approx(const Real& x, unsigned n);

Real operator+(const Real& a, const Real& b);
Real operator-(const Real& a);
Real operator-(const Real& a, const Real& b);
Real operator*(const Real& a, const Real& b);
Real min(const Real& a, const Real& b);
Real max(const Real& a, const Real& b);
Real abs(const Real& a);
/// a / b where b >= lower > 0 is known to the caller.  The divisor's
/// approximants are clamped at `lower` so the bound is structural.
Real div_bounded(const Real& a, const Real& b, const Rational& lower);

enum class Order { Less, Greater, Indistinguishable };

struct Comparison {
  Order order;
  unsigned precision;  // meaningful for Indistinguishable

  bool operator==(const Comparison&) const = default;
};

/// Tri-state comparison at precision k.  Less/Greater are certified;
/// Indistinguishable means |x - y| < 2^-k+2.
Comparison compare_at(const Real& x, const Real& y, unsigned k);

enum class Certainty { Yes, No, Unknown };

/// Is x < q?  Yes/No are certified; tries precisions up to max_precision.
Certainty certify_less(const Real& x, const Rational& q, unsigned max_precision = 96);
/// Is x > q?
Certainty certify_greater(const Real& x, const Rational& q, unsigned max_precision = 96);

/// Smallest power of two 2^-k with 2^-k >= r (r > 0).
Rational pow2_ceil(const Rational& r);

}  // namespace csms
