// Copyright 2026 The csms Authors
// SPDX-License-Identifier: Apache-2.0

// The catalog of coded spaces.  Enumeration orders are part of the
// contract: witness searches and NotFound budgets depend on them.
//
//   reals          0, then +cw(i), -cw(i) for i = 1, 2, ...  (Calkin-Wilf)
//   unit_interval  0, 1, then cw(i)/(1+cw(i)) for i = 1, 2, ...
//   halfline       0, then cw(i)
//   naturals       i
//   cantor         binary digits of i, least significant first
//   baire          gap code of the bits of i, last entry incremented
//   comb(f)        pair(k, j): tooth k, height 2^-f(k) * u_j with u_0 = 1
//   hilbert_comb   origin, then pair(m, n) for 2^-m e_n
//   shrink         stages s = 1, 2, ...: components n < s, denominators
//                  1..s and 2^s, fresh values only

#include <algorithm>
#include <mutex>
#include <numeric>
#include <set>

#include "core/spaces.hpp"

namespace csms {

namespace {

using detail::calkin_wilf;
using detail::unpair;

Rational unit_open(std::size_t i) {  // bijection N+ -> (0,1) cap Q
  Rational x = calkin_wilf(i);
  return x / (Rational(1) + x);
}

long to_long(const Rational& r) { return r.num().get_si(); }

Rational rational_literal(const Json& j) {
  if (j.is_string()) return Rational::parse(j.get<std::string>());
  if (j.is_number_integer()) return Rational(j.get<long>());
  throw SpecError("expected a rational literal \"p/q\", got " + j.dump());
}

long integer_literal(const Json& j) {
  if (j.is_number_integer()) return j.get<long>();
  Rational r = rational_literal(j);
  if (!r.is_integer()) throw SpecError("expected an integer, got " + j.dump());
  return to_long(r);
}

// Least j >= 0-ish with 2^-j < radius.
long first_level_below(const Rational& radius) {
  long j = -radius.floor_log2();
  if (Rational::pow2(-j) >= radius) ++j;
  return j;
}

// c + k 2^-j for growing j, nearest scale first, keeping admitted values.
std::vector<CodePoint> dyadic_neighbors(const Rational& c, const Rational& radius,
                                        std::size_t count,
                                        const std::function<bool(const Rational&)>& admit) {
  std::vector<CodePoint> out;
  if (radius.sign() <= 0 || count == 0) return out;
  long j0 = first_level_below(radius);
  std::size_t tries = 0, max_tries = 64 * count + 4096;
  for (long j = j0; j < j0 + 48 && out.size() < count && tries < max_tries; ++j) {
    Rational step = Rational::pow2(-j);
    mpz_class kmax = (radius / step).floor();
    if (Rational(kmax) * step >= radius) kmax -= 1;
    for (mpz_class k = 1; k <= kmax && out.size() < count && tries < max_tries;
         k += (j == j0 ? 1 : 2)) {
      Rational off = Rational(k) * step;
      for (const Rational& v : {c + off, c - off}) {
        ++tries;
        if (admit(v)) {
          out.push_back(CodePoint::of(v));
          if (out.size() == count) break;
        }
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Subsets of R coded by single rationals.

class LineSpace : public Space {
 public:
  std::optional<Rational> exact_distance(const CodePoint& a, const CodePoint& b) const override {
    return (a[0] - b[0]).abs();
  }

  std::vector<CodePoint> neighbors(const CodePoint& c, const Rational& radius,
                                   std::size_t count) const override {
    return dyadic_neighbors(c[0], radius, count,
                            [this](const Rational& v) { return admits(CodePoint::of(v)); });
  }

  std::optional<SplitOracle> split_oracle() const override {
    return [this](const CodePoint& c, const Rational& r) -> std::optional<SplitPair> {
      if (!admits(c) || r.sign() <= 0) return std::nullopt;
      auto [lo, hi] = inner_bounds(c[0]);
      Rational u = c[0] - r, v = c[0] + r;
      if (lo && *lo > u) u = *lo;
      if (hi && *hi < v) v = *hi;
      if (!(u < v)) return std::nullopt;
      Rational w = v - u;
      SplitPair p{CodePoint::of(u + w / Rational(4)), CodePoint::of(u + Rational(3) * w / Rational(4))};
      if (!admits(p.first) || !admits(p.second)) return std::nullopt;
      return p;
    };
  }

  Json literal(const CodePoint& a) const override { return a[0].str(); }

  CodePoint parse_literal(const Json& j) const override {
    CodePoint a = CodePoint::of(rational_literal(j));
    if (!admits(a)) throw SpecError(name() + ": code point " + j.dump() + " is not in the space");
    return a;
  }

 protected:
  // Rational bounds of the component containing c that stay inside the space.
  virtual std::pair<std::optional<Rational>, std::optional<Rational>> inner_bounds(
      const Rational& c) const = 0;
};

class Reals final : public LineSpace {
 public:
  std::string name() const override { return "reals"; }
  CodePoint code_point(std::size_t i) const override {
    if (i == 0) return CodePoint::of(Rational(0));
    Rational x = calkin_wilf((i + 1) / 2);
    return CodePoint::of(i % 2 == 1 ? x : -x);
  }
  bool admits(const CodePoint& a) const override { return a.size() == 1; }
  // Uniform over j / 2^16 in [-8, 8].
  CodePoint sample(std::mt19937_64& rng) const override {
    std::uniform_int_distribution<long> d(-(8L << 16), 8L << 16);
    return CodePoint::of(Rational(d(rng), 1L << 16));
  }

 protected:
  std::pair<std::optional<Rational>, std::optional<Rational>> inner_bounds(
      const Rational&) const override {
    return {std::nullopt, std::nullopt};
  }
};

class UnitInterval final : public LineSpace {
 public:
  std::string name() const override { return "unit_interval"; }
  CodePoint code_point(std::size_t i) const override {
    if (i == 0) return CodePoint::of(Rational(0));
    if (i == 1) return CodePoint::of(Rational(1));
    return CodePoint::of(unit_open(i - 1));
  }
  bool admits(const CodePoint& a) const override {
    return a.size() == 1 && a[0].sign() >= 0 && a[0] <= Rational(1);
  }
  // Uniform over j / 2^20 in [0, 1].
  CodePoint sample(std::mt19937_64& rng) const override {
    std::uniform_int_distribution<long> d(0, 1L << 20);
    return CodePoint::of(Rational(d(rng), 1L << 20));
  }

  bool effectively_compact() const override { return true; }
  // j / 2^n, j = 0..2^n.
  std::vector<CodePoint> net(unsigned n) const override {
    std::vector<CodePoint> out;
    Rational step = Rational::pow2(-static_cast<long>(n));
    for (long j = 0; j <= (1L << n); ++j) out.push_back(CodePoint::of(Rational(j) * step));
    return out;
  }

 protected:
  std::pair<std::optional<Rational>, std::optional<Rational>> inner_bounds(
      const Rational&) const override {
    return {Rational(0), Rational(1)};
  }
};

class Halfline final : public LineSpace {
 public:
  std::string name() const override { return "halfline"; }
  CodePoint code_point(std::size_t i) const override {
    return CodePoint::of(i == 0 ? Rational(0) : calkin_wilf(i));
  }
  bool admits(const CodePoint& a) const override { return a.size() == 1 && a[0].sign() >= 0; }
  // Uniform over j / 2^10 in [0, 16].
  CodePoint sample(std::mt19937_64& rng) const override {
    std::uniform_int_distribution<long> d(0, 16L << 10);
    return CodePoint::of(Rational(d(rng), 1L << 10));
  }

 protected:
  std::pair<std::optional<Rational>, std::optional<Rational>> inner_bounds(
      const Rational&) const override {
    return {Rational(0), std::nullopt};
  }
};

// Union of [n - a 2^-n, n + a 2^-n], n in N, coded by its rationals.
class ShrinkIntervals final : public LineSpace {
 public:
  ShrinkIntervals(Real alpha, Json alpha_spec)
      : alpha_(std::move(alpha)), alpha_spec_(std::move(alpha_spec)) {
    if (certify_greater(alpha_, Rational(0)) != Certainty::Yes ||
        certify_less(alpha_, Rational(1, 2)) != Certainty::Yes)
      throw SpecError("shrink_intervals: alpha must be certified inside (0, 1/2)");
  }

  std::string name() const override { return "shrink_intervals"; }
  Json spec() const override { return Json{{"space", name()}, {"alpha", alpha_spec_}}; }

  const Real& alpha() const { return alpha_; }

  CodePoint code_point(std::size_t i) const override {
    std::lock_guard lock(mu_);
    while (enumerated_.size() <= i) extend_stage();
    return CodePoint::of(enumerated_[i]);
  }

  bool admits(const CodePoint& a) const override {
    if (a.size() != 1) return false;
    const Rational& r = a[0];
    mpz_class n = (r + Rational(1, 2)).floor();
    if (n < 0) return false;
    Rational offset = (r - Rational(n)).abs();
    if (offset.sign() == 0) return true;
    // |r - n| 2^n < alpha, certified; an undecided boundary counts as outside.
    Rational scaled = offset * Rational::pow2(n.get_si());
    return certify_greater(alpha_, scaled, 256) == Certainty::Yes;
  }

  // Component n uniform in 8 components, offset j / 2^16 of a rational
  // lower bound of alpha 2^-n.
  CodePoint sample(std::mt19937_64& rng) const override {
    std::uniform_int_distribution<long> comp(0, 7), off(-(1L << 16), 1L << 16);
    long n = comp(rng);
    Approx a = approx(alpha_, 20);
    Rational lo = a.lower();
    return CodePoint::of(Rational(n) + Rational(off(rng), 1L << 16) * lo * Rational::pow2(-n));
  }

 protected:
  std::pair<std::optional<Rational>, std::optional<Rational>> inner_bounds(
      const Rational& c) const override {
    mpz_class n = (c + Rational(1, 2)).floor();
    Real half = alpha_ * Real(Rational::pow2(-n.get_si()));
    Real left = Real(Rational(n)) - half, right = Real(Rational(n)) + half;
    Rational lo = c, hi = c;
    for (unsigned k = 16; k <= 256; k *= 2) {
      Rational gl = Rational(c) - approx(left, k).upper();
      if (gl.sign() > 0) {
        lo = c - gl / Rational(2);
        break;
      }
    }
    for (unsigned k = 16; k <= 256; k *= 2) {
      Rational gr = approx(right, k).lower() - c;
      if (gr.sign() > 0) {
        hi = c + gr / Rational(2);
        break;
      }
    }
    return {lo, hi};
  }

 private:
  void extend_stage() const {
    long s = ++stage_;
    std::vector<long> dens;
    for (long q = 1; q <= s; ++q) dens.push_back(q);
    if (s < 62 && (1L << s) > s) dens.push_back(1L << s);
    for (long n = 0; n < s; ++n) {
      for (long q : dens) {
        // alpha < 1/2, so candidates lie within 2^-n-1 of n.
        Rational lo = (Rational(n) - Rational::pow2(-n - 1)) * Rational(q);
        Rational hi = (Rational(n) + Rational::pow2(-n - 1)) * Rational(q);
        mpz_class p0 = lo.floor(), p1 = hi.floor();
        for (mpz_class p = p0; p <= p1; ++p) {
          Rational v(mpq_class(p, q));
          if (v.den() != q) continue;
          if (emitted_.count(v) || !admits(CodePoint::of(v))) continue;
          emitted_.insert(v);
          enumerated_.push_back(v);
        }
      }
    }
  }

  Real alpha_;
  Json alpha_spec_;
  mutable std::mutex mu_;
  mutable long stage_ = 0;
  mutable std::vector<Rational> enumerated_;
  mutable std::set<Rational> emitted_;
};

// ---------------------------------------------------------------------------

class Naturals final : public Space {
 public:
  std::string name() const override { return "naturals"; }
  CodePoint code_point(std::size_t i) const override {
    return CodePoint::of(Rational(static_cast<long>(i)));
  }
  bool admits(const CodePoint& a) const override {
    return a.size() == 1 && a[0].is_integer() && a[0].sign() >= 0;
  }
  std::optional<Rational> exact_distance(const CodePoint& a, const CodePoint& b) const override {
    return (a[0] - b[0]).abs();
  }
  std::vector<CodePoint> neighbors(const CodePoint& c, const Rational& radius,
                                   std::size_t count) const override {
    std::vector<CodePoint> out;
    for (long k = 1; Rational(k) < radius && out.size() < count; ++k) {
      out.push_back(CodePoint::of(c[0] + Rational(k)));
      if ((c[0] - Rational(k)).sign() >= 0 && out.size() < count)
        out.push_back(CodePoint::of(c[0] - Rational(k)));
    }
    return out;
  }
  // Uniform over [0, 1024).
  CodePoint sample(std::mt19937_64& rng) const override {
    std::uniform_int_distribution<long> d(0, 1023);
    return CodePoint::of(Rational(d(rng)));
  }
  Json literal(const CodePoint& a) const override { return to_long(a[0]); }
  CodePoint parse_literal(const Json& j) const override {
    long n = integer_literal(j);
    if (n < 0) throw SpecError("naturals: negative code point");
    return CodePoint::of(Rational(n));
  }
};

// ---------------------------------------------------------------------------
// Cantor and Baire space: finite words w standing for w followed by zeros,
// stored without trailing zeros.  d = 2^-i for the least differing index i.

class WordSpace : public Space {
 public:
  explicit WordSpace(bool binary) : binary_(binary) {}

  static CodePoint normalize(std::vector<Rational> w) {
    while (!w.empty() && w.back().sign() == 0) w.pop_back();
    return CodePoint(std::move(w));
  }

  static long digit(const CodePoint& w, std::size_t i) {
    return i < w.size() ? to_long(w[i]) : 0L;
  }

  static std::optional<std::size_t> first_difference(const CodePoint& a, const CodePoint& b) {
    std::size_t n = std::max(a.size(), b.size());
    for (std::size_t i = 0; i < n; ++i)
      if (digit(a, i) != digit(b, i)) return i;
    return std::nullopt;
  }

  static CodePoint with_digit(const CodePoint& w, std::size_t i, long v) {
    std::vector<Rational> c = w.coords;
    if (c.size() <= i) c.resize(i + 1, Rational(0));
    c[i] = Rational(v);
    return normalize(std::move(c));
  }

  bool admits(const CodePoint& a) const override {
    if (!a.coords.empty() && a.coords.back().sign() == 0) return false;
    for (const Rational& d : a.coords) {
      if (!d.is_integer() || d.sign() < 0) return false;
      if (binary_ && d > Rational(1)) return false;
    }
    return true;
  }

  std::optional<Rational> exact_distance(const CodePoint& a, const CodePoint& b) const override {
    auto i = first_difference(a, b);
    if (!i) return Rational(0);
    return Rational::pow2(-static_cast<long>(*i));
  }

  std::vector<CodePoint> neighbors(const CodePoint& c, const Rational& radius,
                                   std::size_t count) const override {
    std::vector<CodePoint> out;
    if (radius.sign() <= 0) return out;
    std::size_t i0 = static_cast<std::size_t>(std::max(0L, first_level_below(radius)));
    if (binary_) {
      for (std::size_t i = i0; out.size() < count && i < i0 + 256; ++i)
        out.push_back(with_digit(c, i, 1 - digit(c, i)));
      return out;
    }
    for (std::size_t t = 0; out.size() < count && t < 256; ++t)
      for (std::size_t i = i0; i <= i0 + t && out.size() < count; ++i)
        out.push_back(with_digit(c, i, digit(c, i) + static_cast<long>(t - (i - i0)) + 1));
    return out;
  }

  std::optional<SplitOracle> split_oracle() const override {
    return [this](const CodePoint& c, const Rational& r) -> std::optional<SplitPair> {
      if (!admits(c) || r.sign() <= 0) return std::nullopt;
      auto i = static_cast<std::size_t>(std::max(0L, first_level_below(r)));
      return SplitPair{with_digit(c, i, 0), with_digit(c, i, 1)};
    };
  }

 private:
  bool binary_;
};

class Cantor final : public WordSpace {
 public:
  Cantor() : WordSpace(true) {}
  std::string name() const override { return "cantor"; }
  CodePoint code_point(std::size_t i) const override {
    std::vector<Rational> w;
    for (; i; i >>= 1) w.emplace_back(static_cast<long>(i & 1U));
    return CodePoint(std::move(w));
  }
  bool effectively_compact() const override { return true; }
  // All words of length n+1: a point agreeing on n+1 digits is within 2^-n-1.
  std::vector<CodePoint> net(unsigned n) const override {
    std::vector<CodePoint> out;
    for (std::size_t w = 0; w < (std::size_t{1} << (n + 1)); ++w) {
      std::vector<Rational> digits;
      for (unsigned i = 0; i <= n; ++i) digits.emplace_back(static_cast<long>((w >> i) & 1U));
      out.push_back(normalize(std::move(digits)));
    }
    return out;
  }

  // 24 independent fair bits.
  CodePoint sample(std::mt19937_64& rng) const override {
    std::vector<Rational> w;
    for (int i = 0; i < 24; ++i) w.emplace_back(static_cast<long>(rng() & 1U));
    return normalize(std::move(w));
  }
  Json literal(const CodePoint& a) const override {
    std::string s;
    for (const Rational& d : a.coords) s += d.sign() ? '1' : '0';
    return s;
  }
  CodePoint parse_literal(const Json& j) const override {
    std::vector<Rational> w;
    if (j.is_string()) {
      for (char c : j.get<std::string>()) {
        if (c != '0' && c != '1') throw SpecError("cantor: word must be binary, got " + j.dump());
        w.emplace_back(static_cast<long>(c - '0'));
      }
    } else if (j.is_array()) {
      for (const Json& d : j) {
        long v = integer_literal(d);
        if (v != 0 && v != 1) throw SpecError("cantor: word must be binary, got " + j.dump());
        w.emplace_back(v);
      }
    } else {
      throw SpecError("cantor: expected a binary word, got " + j.dump());
    }
    return normalize(std::move(w));
  }
};

class Baire final : public WordSpace {
 public:
  Baire() : WordSpace(false) {}
  std::string name() const override { return "baire"; }
  CodePoint code_point(std::size_t i) const override {
    if (i == 0) return CodePoint();
    std::vector<Rational> w;
    long last = -1;
    for (long bit = 0; bit < 64; ++bit) {
      if ((i >> bit) & 1U) {
        w.emplace_back(bit - last - 1);
        last = bit;
      }
    }
    w.back() += Rational(1);
    return CodePoint(std::move(w));
  }
  // 12 digits uniform in [0, 8).
  CodePoint sample(std::mt19937_64& rng) const override {
    std::vector<Rational> w;
    std::uniform_int_distribution<long> d(0, 7);
    for (int i = 0; i < 12; ++i) w.emplace_back(d(rng));
    return normalize(std::move(w));
  }
  Json literal(const CodePoint& a) const override {
    Json arr = Json::array();
    for (const Rational& d : a.coords) arr.push_back(to_long(d));
    return arr;
  }
  CodePoint parse_literal(const Json& j) const override {
    if (!j.is_array()) throw SpecError("baire: expected an integer word, got " + j.dump());
    std::vector<Rational> w;
    for (const Json& d : j) {
      long v = integer_literal(d);
      if (v < 0) throw SpecError("baire: negative digit in " + j.dump());
      w.emplace_back(v);
    }
    return normalize(std::move(w));
  }
};

// ---------------------------------------------------------------------------
// Comb: A = {(k, q) : 0 < q <= 2^-f(k)},
// d((k,q),(k',q')) = max(|2^-f(k) - 2^-f(k')|, |q - q'|).

class Comb final : public Space {
 public:
  explicit Comb(std::vector<long> table) : table_(std::move(table)) {
    std::set<long> seen;
    for (long v : table_) {
      if (v < 0) throw SpecError("comb: f values must be natural numbers");
      if (!seen.insert(v).second) throw SpecError("comb: f must be one-to-one");
    }
    tail_start_ = table_.empty() ? 0 : *std::max_element(table_.begin(), table_.end()) + 1;
  }

  std::string name() const override { return "comb"; }
  Json spec() const override { return Json{{"space", name()}, {"f", table_}}; }

  /// Finite table, then f(k) = max(table) + 1 + (k - |table|).
  long f(long k) const {
    if (k < static_cast<long>(table_.size())) return table_[static_cast<std::size_t>(k)];
    return tail_start_ + (k - static_cast<long>(table_.size()));
  }
  const std::vector<long>& table() const { return table_; }
  Rational height(long k) const { return Rational::pow2(-f(k)); }

  CodePoint code_point(std::size_t i) const override {
    auto [k, j] = unpair(i);
    Rational u = j == 0 ? Rational(1) : unit_open(j);
    return CodePoint({Rational(static_cast<long>(k)), height(static_cast<long>(k)) * u});
  }

  bool admits(const CodePoint& a) const override {
    if (a.size() != 2 || !a[0].is_integer() || a[0].sign() < 0) return false;
    return a[1].sign() > 0 && a[1] <= height(to_long(a[0]));
  }

  std::optional<Rational> exact_distance(const CodePoint& a, const CodePoint& b) const override {
    Rational dx = (height(to_long(a[0])) - height(to_long(b[0]))).abs();
    return max(dx, (a[1] - b[1]).abs());
  }

  std::vector<CodePoint> neighbors(const CodePoint& c, const Rational& radius,
                                   std::size_t count) const override {
    Rational k = c[0];
    auto same = dyadic_neighbors(c[1], radius, count, [&](const Rational& v) {
      return admits(CodePoint({k, v}));
    });
    std::vector<CodePoint> out;
    for (auto& p : same) out.push_back(CodePoint({k, p[0]}));
    return out;
  }

  std::optional<SplitOracle> split_oracle() const override {
    return [this](const CodePoint& c, const Rational& r) -> std::optional<SplitPair> {
      if (!admits(c) || r.sign() <= 0) return std::nullopt;
      Rational u = max(Rational(0), c[1] - r), v = min(height(to_long(c[0])), c[1] + r);
      if (!(u < v)) return std::nullopt;
      Rational w = v - u;
      return SplitPair{CodePoint({c[0], u + w / Rational(4)}),
                       CodePoint({c[0], u + Rational(3) * w / Rational(4)})};
    };
  }

  bool effectively_compact() const override { return true; }
  // Teeth with f(k) <= n+1 get the grid j 2^-n-1; every shorter tooth is
  // within 2^-n-2 of the top of the tallest of them.
  std::vector<CodePoint> net(unsigned n) const override {
    long level = static_cast<long>(n);
    std::vector<CodePoint> out;
    Rational step = Rational::pow2(-level - 1);
    std::optional<std::pair<long, long>> rep;  // (f value, tooth)
    auto consider = [&](long k) {
      long fk = f(k);
      if (fk <= level + 1) {
        for (long j = 1; j <= (1L << (level + 1 - fk)); ++j)
          out.push_back(CodePoint({Rational(k), Rational(j) * step}));
      } else if (!rep || fk < rep->first) {
        rep = {fk, k};
      }
    };
    long tail_teeth = std::max(0L, level + 2 - tail_start_) + 1;
    for (long k = 0; k < static_cast<long>(table_.size()) + tail_teeth; ++k) consider(k);
    out.push_back(CodePoint({Rational(rep->second), height(rep->second)}));
    return out;
  }

  // Tooth uniform in [0, |table| + 4), height j / 2^10 of the tooth, j >= 1.
  CodePoint sample(std::mt19937_64& rng) const override {
    std::uniform_int_distribution<long> tooth(0, static_cast<long>(table_.size()) + 3);
    std::uniform_int_distribution<long> h(1, 1L << 10);
    long k = tooth(rng);
    return CodePoint({Rational(k), height(k) * Rational(h(rng), 1L << 10)});
  }

  Json literal(const CodePoint& a) const override { return Json::array({to_long(a[0]), a[1].str()}); }
  CodePoint parse_literal(const Json& j) const override {
    if (!j.is_array() || j.size() != 2) throw SpecError("comb: expected [k, \"p/q\"], got " + j.dump());
    CodePoint a({Rational(integer_literal(j[0])), rational_literal(j[1])});
    if (!admits(a)) throw SpecError("comb: code point " + j.dump() + " violates 0 < q <= 2^-f(k)");
    return a;
  }

 private:
  std::vector<long> table_;
  long tail_start_ = 0;
};

// ---------------------------------------------------------------------------
// {0} u {2^-m e_n}: along a spine |2^-m - 2^-m'|, across spines
// sqrt(4^-m + 4^-m').  The origin is coded by the empty coordinate list.

class HilbertComb final : public Space {
 public:
  std::string name() const override { return "hilbert_comb"; }
  bool rational_metric() const override { return false; }

  CodePoint code_point(std::size_t i) const override {
    if (i == 0) return CodePoint();
    auto [m, n] = unpair(i - 1);
    return CodePoint({Rational(static_cast<long>(m)), Rational(static_cast<long>(n))});
  }

  bool admits(const CodePoint& a) const override {
    if (a.size() == 0) return true;
    return a.size() == 2 && a[0].is_integer() && a[1].is_integer() && a[0].sign() >= 0 &&
           a[1].sign() >= 0;
  }

  static Rational norm(const CodePoint& a) {
    return a.size() == 0 ? Rational(0) : Rational::pow2(-to_long(a[0]));
  }

  std::optional<Rational> exact_distance(const CodePoint& a, const CodePoint& b) const override {
    if (a == b) return Rational(0);
    if (a.size() == 0 || b.size() == 0 || a[1] == b[1]) return (norm(a) - norm(b)).abs();
    return std::nullopt;
  }

  Real distance(const CodePoint& a, const CodePoint& b) const override {
    if (auto d = exact_distance(a, b)) return Real(*d);
    Rational na = norm(a), nb = norm(b);
    return Real::sqrt(na * na + nb * nb);
  }

  std::vector<CodePoint> neighbors(const CodePoint& c, const Rational& radius,
                                   std::size_t count) const override {
    std::vector<CodePoint> out;
    Rational r2 = radius * radius;
    auto consider = [&](const CodePoint& b) {
      if (out.size() >= count || b == c) return;
      Rational na = norm(c), nb = norm(b);
      bool close;
      if (auto d = exact_distance(c, b))
        close = *d < radius;
      else
        close = na * na + nb * nb < r2;
      if (close) out.push_back(b);
    };
    consider(CodePoint());
    long m0 = c.size() == 0 ? 0 : to_long(c[0]);
    long n0 = c.size() == 0 ? 0 : to_long(c[1]);
    for (long m = 0; m < m0 + 64 && out.size() < count; ++m) {
      consider(CodePoint({Rational(m), Rational(n0)}));
      for (long n = 0; n < 8 && out.size() < count; ++n)
        if (n != n0) consider(CodePoint({Rational(m), Rational(n)}));
    }
    return out;
  }

  // t uniform in [0, 65): t = 64 is the origin, otherwise (t / 8, t % 8).
  CodePoint sample(std::mt19937_64& rng) const override {
    std::uniform_int_distribution<long> d(0, 64);
    long t = d(rng);
    if (t == 64) return CodePoint();
    return CodePoint({Rational(t / 8), Rational(t % 8)});
  }

  Json literal(const CodePoint& a) const override {
    if (a.size() == 0) return Json::array();
    return Json::array({to_long(a[0]), to_long(a[1])});
  }
  CodePoint parse_literal(const Json& j) const override {
    if (!j.is_array() || (j.size() != 0 && j.size() != 2))
      throw SpecError("hilbert_comb: expected [] or [m, n], got " + j.dump());
    if (j.empty()) return CodePoint();
    CodePoint a({Rational(integer_literal(j[0])), Rational(integer_literal(j[1]))});
    if (!admits(a)) throw SpecError("hilbert_comb: bad code point " + j.dump());
    return a;
  }
};

Real parse_alpha(const Json& j) {
  if (j.is_object() && j.contains("sqrt")) {
    Rational c = rational_literal(j.at("sqrt"));
    if (c.sign() < 0) throw SpecError("shrink_intervals: sqrt of a negative number");
    return Real::sqrt(c);
  }
  return Real(rational_literal(j));
}

}  // namespace

SpacePtr make_comb(std::vector<long> table) { return std::make_shared<Comb>(std::move(table)); }

SpacePtr make_shrink_intervals(Real alpha, Json alpha_spec) {
  return std::make_shared<ShrinkIntervals>(std::move(alpha), std::move(alpha_spec));
}

Real shrink_alpha(const Space& s) {
  auto* sh = dynamic_cast<const ShrinkIntervals*>(&s);
  if (!sh) throw SpecError("not a shrink_intervals space");
  return sh->alpha();
}

SpacePtr catalog(const Json& spec) {
  Json name_j = spec.is_object() ? spec.value("space", Json()) : spec;
  if (name_j.is_object()) return catalog(name_j);
  if (!name_j.is_string()) throw SpecError("space spec needs a \"space\" name, got " + spec.dump());
  const std::string name = name_j.get<std::string>();
  if (name == "reals") return std::make_shared<Reals>();
  if (name == "unit_interval") return std::make_shared<UnitInterval>();
  if (name == "halfline") return std::make_shared<Halfline>();
  if (name == "naturals") return std::make_shared<Naturals>();
  if (name == "cantor") return std::make_shared<Cantor>();
  if (name == "baire") return std::make_shared<Baire>();
  if (name == "hilbert_comb") return std::make_shared<HilbertComb>();
  if (name == "comb") {
    std::vector<long> table;
    if (spec.is_object() && spec.contains("f")) {
      const Json& f = spec.at("f");
      if (f.is_string()) {
        if (f.get<std::string>() != "identity")
          throw SpecError("comb: f must be a table or \"identity\"");
      } else if (f.is_array()) {
        for (const Json& v : f) table.push_back(integer_literal(v));
      } else {
        throw SpecError("comb: f must be a table or \"identity\"");
      }
    }
    return make_comb(std::move(table));
  }
  if (name == "shrink_intervals") {
    Json alpha = Json{{"sqrt", "1/8"}};
    if (spec.is_object() && spec.contains("alpha")) alpha = spec.at("alpha");
    return make_shrink_intervals(parse_alpha(alpha), alpha);
  }
  throw SpecError("unknown space \"" + name + "\"");
}

}  // namespace csms
