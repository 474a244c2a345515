// Copyright 2026 The csms Authors
// SPDX-License-Identifier: Apache-2.0

#include "core/spaces.hpp"

#include <map>
#include <mutex>

namespace csms {

struct Point::Node {
  std::optional<CodePoint> constant;
  Sequence seq;
  mutable std::mutex mu;
  mutable std::map<unsigned, CodePoint> cache;
};

Point Point::constant(CodePoint a) {
  Point p;
  p.node_ = std::make_shared<Node>();
  p.node_->constant = std::move(a);
  return p;
}

Point Point::from_sequence(Sequence seq) {
  Point p;
  p.node_ = std::make_shared<Node>();
  p.node_->seq = std::move(seq);
  return p;
}

CodePoint Point::at(unsigned n) const {
  if (node_->constant) return *node_->constant;
  {
    std::lock_guard lock(node_->mu);
    if (auto it = node_->cache.find(n); it != node_->cache.end()) return it->second;
  }
  CodePoint a = node_->seq(n);
  std::lock_guard lock(node_->mu);
  node_->cache.emplace(n, a);
  return a;
}

const std::optional<CodePoint>& Point::constant_value() const { return node_->constant; }

Real Space::distance(const CodePoint& a, const CodePoint& b) const {
  auto d = exact_distance(a, b);
  if (!d) throw std::logic_error(name() + ": metric has no exact value and no real override");
  return Real(*d);
}

std::vector<CodePoint> Space::net(unsigned) const {
  throw OperationError("NotEffectivelyCompact", name() + " has no net construction");
}

Bracket distance_bracket(const Space& s, const CodePoint& a, const CodePoint& b, unsigned k) {
  if (auto d = s.exact_distance(a, b)) return {*d, *d};
  Approx ap = approx(s.distance(a, b), k);
  return {max(Rational(0), ap.lower()), ap.upper()};
}

Certainty distance_less(const Space& s, const CodePoint& a, const CodePoint& b, const Rational& q,
                        unsigned max_precision) {
  if (auto d = s.exact_distance(a, b)) return *d < q ? Certainty::Yes : Certainty::No;
  return certify_less(s.distance(a, b), q, max_precision);
}

Certainty distance_at_least(const Space& s, const CodePoint& a, const CodePoint& b,
                            const Rational& q, unsigned max_precision) {
  switch (distance_less(s, a, b, q, max_precision)) {
    case Certainty::Yes: return Certainty::No;
    case Certainty::No: return Certainty::Yes;
    default: return Certainty::Unknown;
  }
}

Approx metric_on_points(const Space& s, const Point& x, const Point& y, unsigned n) {
  Rational err = Rational::pow2(-static_cast<long>(n));
  if (x.constant_value() && y.constant_value()) {
    const CodePoint& a = *x.constant_value();
    const CodePoint& b = *y.constant_value();
    if (auto d = s.exact_distance(a, b)) return {*d, err};
    return {s.distance(a, b).approximant(n + 1), err};
  }
  // Tails d(x, x_m) < 2^-m+1 for m = n+3 contribute < 2^-n-1 together.
  unsigned m = n + 3;
  CodePoint a = x.at(m), b = y.at(m);
  if (auto d = s.exact_distance(a, b)) return {*d, err};
  return {s.distance(a, b).approximant(n + 2), err};
}

PointValidation validate_point(const Space& s, const Point& x, unsigned depth, unsigned k) {
  for (unsigned n = 0; n < depth; ++n) {
    CodePoint a = x.at(n), b = x.at(n + 1);
    Rational bound = Rational::pow2(-static_cast<long>(n));
    if (auto d = s.exact_distance(a, b)) {
      if (!(*d < bound)) return {PointValidation::Status::Violation, n};
      continue;
    }
    Comparison c = compare_at(s.distance(a, b), Real(bound), k);
    if (c.order == Order::Greater) return {PointValidation::Status::Violation, n};
    if (c.order == Order::Indistinguishable) return {PointValidation::Status::Indeterminate, n};
  }
  return {PointValidation::Status::Certified, 0};
}

namespace {

// 0 < d(x, b) < q, certified.
bool in_punctured(const Space& s, const Point& x, const CodePoint& b, const Rational& q) {
  Point pb = Point::constant(b);
  for (unsigned k : {16u, 48u, 96u}) {
    Approx ap = metric_on_points(s, x, pb, k);
    bool exact = x.constant_value() && s.exact_distance(*x.constant_value(), b).has_value();
    if (exact) return ap.value.sign() > 0 && ap.value < q;
    if (ap.lower().sign() > 0 && ap.upper() < q) return true;
    if (ap.upper().sign() <= 0 || ap.lower() >= q) return false;
  }
  return false;
}

}  // namespace

IsolatedSearch isolated_search(const Space& s, const Point& x, const Rational& q,
                               std::size_t budget) {
  if (q.sign() <= 0) throw std::invalid_argument("isolated_search: q must be positive");
  IsolatedSearch out;
  CodePoint anchor;
  if (x.constant_value()) {
    anchor = *x.constant_value();
  } else {
    // d(x, x_m) < 2^-m+1 <= q/4.
    unsigned m = static_cast<unsigned>(std::max(0L, 3 - q.floor_log2()));
    anchor = x.at(m);
  }
  for (const CodePoint& b : s.neighbors(anchor, q / Rational(2), budget)) {
    if (out.scanned >= budget) return out;
    ++out.scanned;
    if (in_punctured(s, x, b, q)) {
      out.inhabitant = b;
      return out;
    }
  }
  for (std::size_t i = 0; out.scanned < budget; ++i) {
    ++out.scanned;
    CodePoint b = s.code_point(i);
    if (in_punctured(s, x, b, q)) {
      out.inhabitant = b;
      return out;
    }
  }
  return out;
}

namespace detail {

Rational calkin_wilf(std::size_t i) {
  if (i == 0) throw std::out_of_range("calkin_wilf index starts at 1");
  int top = 63;
  while (!((i >> top) & 1U)) --top;
  mpz_class a = 1, b = 1;
  for (int bit = top - 1; bit >= 0; --bit) {
    if ((i >> bit) & 1U)
      a += b;
    else
      b += a;
  }
  return Rational(mpq_class(a, b));
}

std::pair<std::size_t, std::size_t> unpair(std::size_t z) {
  std::size_t w = 0;
  while ((w + 1) * (w + 2) / 2 <= z) ++w;
  std::size_t t = w * (w + 1) / 2;
  std::size_t y = z - t;
  return {w - y, y};
}

std::size_t pair(std::size_t x, std::size_t y) { return (x + y) * (x + y + 1) / 2 + y; }

}  // namespace detail

}  // namespace csms
