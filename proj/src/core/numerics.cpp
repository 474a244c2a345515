// Copyright 2026 The csms Authors
// SPDX-License-Identifier: Apache-2.0

#include "core/numerics.hpp"

#include <cctype>
#include <mutex>
#include <utility>
#include <vector>

namespace csms {

Rational::Rational(long num, long den) {
  if (den == 0) throw SpecError("rational with zero denominator");
  v_ = mpq_class(num, den);
  v_.canonicalize();
}

Rational Rational::parse(std::string_view text) {
  auto digits = [](std::string_view s) {
    if (s.empty()) return false;
    for (char c : s)
      if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    return true;
  };
  std::string_view num = text, den = "1";
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    num = text.substr(0, slash);
    den = text.substr(slash + 1);
  }
  std::string_view num_digits = num;
  if (!num_digits.empty() && (num_digits.front() == '-' || num_digits.front() == '+'))
    num_digits.remove_prefix(1);
  if (!digits(num_digits) || !digits(den))
    throw SpecError("malformed rational \"" + std::string(text) + "\"");
  mpz_class d(std::string(den), 10);
  if (d == 0) throw SpecError("zero denominator in \"" + std::string(text) + "\"");
  mpz_class n(std::string(num_digits), 10);
  if (num.front() == '-') n = -n;
  return Rational(mpq_class(n, d));
}

Rational Rational::pow2(long e) {
  mpz_class p = 1;
  if (e >= 0) {
    mpz_mul_2exp(p.get_mpz_t(), p.get_mpz_t(), static_cast<mp_bitcnt_t>(e));
    return Rational(p);
  }
  mpz_mul_2exp(p.get_mpz_t(), p.get_mpz_t(), static_cast<mp_bitcnt_t>(-e));
  return Rational(mpq_class(mpz_class(1), p));
}

std::string Rational::str() const {
  return v_.get_num().get_str() + "/" + v_.get_den().get_str();
}

Rational& Rational::operator/=(const Rational& o) {
  if (o.v_ == 0) throw std::domain_error("rational division by zero");
  v_ /= o.v_;
  return *this;
}

mpz_class Rational::floor() const {
  mpz_class q;
  mpz_fdiv_q(q.get_mpz_t(), v_.get_num_mpz_t(), v_.get_den_mpz_t());
  return q;
}

long Rational::floor_log2() const {
  mpq_class a = ::abs(v_);
  if (a == 0) throw std::domain_error("floor_log2 of zero");
  long e = static_cast<long>(mpz_sizeinbase(a.get_num_mpz_t(), 2)) -
           static_cast<long>(mpz_sizeinbase(a.get_den_mpz_t(), 2));
  while (pow2(e).raw() > a) --e;
  while (pow2(e + 1).raw() <= a) ++e;
  return e;
}

Rational pow2_ceil(const Rational& r) {
  long e = r.floor_log2();
  Rational p = Rational::pow2(e);
  return p == r ? p : Rational::pow2(e + 1);
}

// ---------------------------------------------------------------------------

struct Real::Node {
  std::optional<Rational> exact;
  Approximant f;
  mutable std::mutex mu;
  mutable std::vector<std::optional<Rational>> cache;
};

Real::Real(const Rational& c) : node_(std::make_shared<Node>()) { node_->exact = c; }

Real Real::from_approximant(Approximant f) {
  Real r;
  r.node_ = std::make_shared<Node>();
  r.node_->f = std::move(f);
  return r;
}

Real Real::sqrt(const Rational& c) {
  if (c.sign() < 0) throw std::domain_error("sqrt of negative rational");
  mpz_class rn, rd;
  mpz_sqrt(rn.get_mpz_t(), c.num().get_mpz_t());
  mpz_sqrt(rd.get_mpz_t(), c.den().get_mpz_t());
  if (rn * rn == c.num() && rd * rd == c.den()) return Real(Rational(mpq_class(rn, rd)));
  return from_approximant([c](unsigned n) {
    // floor(sqrt(c) * 2^(n+1)) / 2^(n+1); consecutive values differ by < 2^-n-1.
    Rational scaled = c * Rational::pow2(2 * (static_cast<long>(n) + 1));
    mpz_class root, fl = scaled.floor();
    mpz_sqrt(root.get_mpz_t(), fl.get_mpz_t());
    return Rational(root) * Rational::pow2(-(static_cast<long>(n) + 1));
  });
}

Rational Real::approximant(unsigned n) const {
  if (node_->exact) return *node_->exact;
  {
    std::lock_guard lock(node_->mu);
    if (n < node_->cache.size() && node_->cache[n]) return *node_->cache[n];
  }
  Rational v = node_->f(n);
  std::lock_guard lock(node_->mu);
  if (node_->cache.size() <= n) node_->cache.resize(n + 1);
  node_->cache[n] = v;
  return v;
}

const std::optional<Rational>& Real::exact() const { return node_->exact; }

Approx approx(const Real& x, unsigned n) {
  return {x.approximant(n), Rational::pow2(1 - static_cast<long>(n))};
}

namespace {

// |approximant(m)| < |approximant(0)| + 2 for every m.
Rational magnitude_bound(const Real& x) { return x.approximant(0).abs() + Rational(2); }

unsigned shift_for(const Rational& factor) {
  long e = factor.floor_log2() + 1;  // 2^e > factor
  return e < 0 ? 0u : static_cast<unsigned>(e);
}

}  // namespace

Real operator+(const Real& a, const Real& b) {
  if (a.exact() && b.exact()) return Real(*a.exact() + *b.exact());
  return Real::from_approximant(
      [a, b](unsigned n) { return a.approximant(n + 1) + b.approximant(n + 1); });
}

Real operator-(const Real& a) {
  if (a.exact()) return Real(-*a.exact());
  return Real::from_approximant([a](unsigned n) { return -a.approximant(n); });
}

Real operator-(const Real& a, const Real& b) { return a + (-b); }

Real operator*(const Real& a, const Real& b) {
  if (a.exact() && b.exact()) return Real(*a.exact() * *b.exact());
  Rational m = max(magnitude_bound(a), magnitude_bound(b));
  unsigned s = shift_for(Rational(2) * m);
  return Real::from_approximant(
      [a, b, s](unsigned n) { return a.approximant(n + s) * b.approximant(n + s); });
}

Real min(const Real& a, const Real& b) {
  if (a.exact() && b.exact()) return Real(min(*a.exact(), *b.exact()));
  return Real::from_approximant(
      [a, b](unsigned n) { return min(a.approximant(n), b.approximant(n)); });
}

Real max(const Real& a, const Real& b) {
  if (a.exact() && b.exact()) return Real(max(*a.exact(), *b.exact()));
  return Real::from_approximant(
      [a, b](unsigned n) { return max(a.approximant(n), b.approximant(n)); });
}

Real abs(const Real& a) {
  if (a.exact()) return Real(a.exact()->abs());
  return Real::from_approximant([a](unsigned n) { return a.approximant(n).abs(); });
}

Real div_bounded(const Real& a, const Real& b, const Rational& lower) {
  if (lower.sign() <= 0) throw std::domain_error("div_bounded needs a positive lower bound");
  if (a.exact() && b.exact()) {
    if (*b.exact() < lower) throw std::domain_error("divisor below its stated lower bound");
    return Real(*a.exact() / *b.exact());
  }
  Rational inv = Rational(1) / lower;
  unsigned s = shift_for(inv + magnitude_bound(a) * inv * inv);
  return Real::from_approximant([a, b, lower, s](unsigned n) {
    return a.approximant(n + s) / max(b.approximant(n + s), lower);
  });
}

Comparison compare_at(const Real& x, const Real& y, unsigned k) {
  if (x.exact() && y.exact()) {
    auto c = *x.exact() <=> *y.exact();
    if (c < 0) return {Order::Less, k};
    if (c > 0) return {Order::Greater, k};
    return {Order::Indistinguishable, k};
  }
  Rational diff = x.approximant(k + 1) - y.approximant(k + 1);
  Rational slack = Rational::pow2(1 - static_cast<long>(k));
  if (diff >= slack) return {Order::Greater, k};
  if (diff <= -slack) return {Order::Less, k};
  return {Order::Indistinguishable, k};
}

namespace {

template <typename Decide>
Certainty certify(const Real& x, unsigned max_precision, Decide decide) {
  if (x.exact()) return decide(Approx{*x.exact(), Rational(0)});
  for (unsigned k = 8;; k *= 2) {
    unsigned p = k < max_precision ? k : max_precision;
    Certainty c = decide(approx(x, p));
    if (c != Certainty::Unknown || p == max_precision) return c;
  }
}

}  // namespace

Certainty certify_less(const Real& x, const Rational& q, unsigned max_precision) {
  return certify(x, max_precision, [&](const Approx& a) {
    if (a.upper() < q || (a.error.sign() > 0 && a.upper() == q)) return Certainty::Yes;
    if (a.lower() >= q) return Certainty::No;
    return Certainty::Unknown;
  });
}

Certainty certify_greater(const Real& x, const Rational& q, unsigned max_precision) {
  return certify(x, max_precision, [&](const Approx& a) {
    if (a.lower() > q || (a.error.sign() > 0 && a.lower() == q)) return Certainty::Yes;
    if (a.upper() <= q) return Certainty::No;
    return Certainty::Unknown;
  });
}

}  // namespace csms
