// Copyright 2026 The csms Authors
// SPDX-License-Identifier: Apache-2.0

#include "core/functions.hpp"

#include <algorithm>

namespace csms {

std::optional<Quadruple> FunctionCode::quadruple(std::size_t m) const {
  auto [i, j] = detail::unpair(m);
  return localized(domain()->code_point(i), static_cast<long>(j));
}

EvalResult eval(const FunctionCode& f, const Point& x, const Rational& q, std::size_t depth) {
  if (q.sign() <= 0) throw std::invalid_argument("eval: q must be positive");
  EvalResult out;
  if (auto size = f.table_size()) {
    std::size_t h = std::min(*size, depth);
    for (std::size_t m = 0; m < h; ++m) {
      out.depth = m + 1;
      auto quad = f.quadruple(m);
      if (!quad || !(quad->s < q)) continue;
      if (point_distance_less(*f.domain(), x, quad->a, quad->r, 96) == Certainty::Yes) {
        out.quad = quad;
        return out;
      }
    }
    return out;
  }
  // d(x, x_{j+2}) < 2^-j-1, so x lies in the domain ball of localized(x_{j+2}, j).
  for (std::size_t j = 0; j < depth; ++j) {
    out.depth = j + 1;
    CodePoint a = x.at(static_cast<unsigned>(j + 2));
    auto quad = f.localized(a, static_cast<long>(j));
    if (quad && quad->s < q) {
      out.quad = quad;
      return out;
    }
  }
  return out;
}

FragmentCheck validate_fragment(const FunctionCode& f, std::size_t n, unsigned k) {
  std::vector<std::pair<std::size_t, Quadruple>> quads;
  for (std::size_t m = 0; m < n; ++m)
    if (auto q = f.quadruple(m)) quads.emplace_back(m, *q);
  FragmentCheck out;
  bool undecided = false;
  const Space& dom = *f.domain();
  const Space& cod = *f.codomain();
  for (std::size_t i = 0; i < quads.size(); ++i) {
    for (std::size_t j = i + 1; j < quads.size(); ++j) {
      const Quadruple& p = quads[i].second;
      const Quadruple& q = quads[j].second;
      // Either center lies in the other's domain ball, so both codomain
      // balls contain its image.
      if (distance_less(dom, p.a, q.a, max(p.r, q.r), k) != Certainty::Yes) continue;
      switch (distance_less(cod, p.b, q.b, p.s + q.s, k)) {
        case Certainty::Yes: break;
        case Certainty::No:
          return {FragmentCheck::Status::Violation, quads[i].first, quads[j].first};
        case Certainty::Unknown:
          if (!undecided) {
            undecided = true;
            out = {FragmentCheck::Status::Indeterminate, quads[i].first, quads[j].first};
          }
          break;
      }
    }
  }
  return out;
}

LocatedSet LocatedSet::finite(SpacePtr space, std::vector<CodePoint> points) {
  if (points.empty()) throw SpecError("located set needs at least one point");
  LocatedSet c;
  c.points = points;
  auto shared = std::make_shared<std::vector<CodePoint>>(std::move(points));
  c.generators.generator = [shared](std::size_t n) { return Point::constant((*shared)[n]); };
  c.generators.length = shared->size();
  c.distance = [space, shared](const Point& x) -> Real {
    if (x.constant_value()) {
      std::optional<Rational> best;
      bool exact = true;
      for (const CodePoint& p : *shared) {
        auto d = space->exact_distance(*x.constant_value(), p);
        if (!d) {
          exact = false;
          break;
        }
        if (!best || *d < *best) best = *d;
      }
      if (exact) return Real(*best);
    }
    return Real::from_approximant([space, shared, x](unsigned n) {
      std::optional<Rational> best;
      for (const CodePoint& p : *shared) {
        Rational v = metric_on_points(*space, x, Point::constant(p), n + 2).value;
        if (!best || v < *best) best = v;
      }
      return *best;
    });
  };
  return c;
}

SpacePtr real_line() {
  static const SpacePtr reals = catalog(std::string("reals"));
  return reals;
}

namespace {

// f varies by less than `spread` on the ball and v = f(a).
Quadruple real_quad(const CodePoint& a, const Rational& r, const Real& v, const Rational& spread) {
  if (v.exact()) return {a, r, CodePoint::of(*v.exact()), spread};
  long m = std::max(0L, 1 - spread.floor_log2());
  return {a, r, CodePoint::of(v.approximant(static_cast<unsigned>(m))), spread * Rational(2)};
}

Real distance_real(const Space& s, const CodePoint& a, const CodePoint& b) {
  if (auto d = s.exact_distance(a, b)) return Real(*d);
  return s.distance(a, b);
}

void require_real(const FunctionCode& f, const char* what) {
  if (f.codomain()->name() != "reals")
    throw SpecError(std::string(what) + " needs a real-valued function");
}

class ConstCode final : public FunctionCode {
 public:
  ConstCode(SpacePtr domain, Rational c) : FunctionCode(std::move(domain), real_line()), c_(std::move(c)) {}
  std::optional<Quadruple> localized(const CodePoint& a, long j) const override {
    return Quadruple{a, Rational::pow2(-j), CodePoint::of(c_), Rational::pow2(-(std::abs(j) + 32))};
  }
  Json spec() const override { return {{"op", "const"}, {"c", c_.str()}}; }

 private:
  Rational c_;
};

class DistToCode final : public FunctionCode {
 public:
  DistToCode(SpacePtr domain, CodePoint c) : FunctionCode(std::move(domain), real_line()), c_(std::move(c)) {}
  std::optional<Quadruple> localized(const CodePoint& a, long j) const override {
    Rational r = Rational::pow2(-j);
    return real_quad(a, r, distance_real(*domain(), a, c_), r);
  }
  Json spec() const override { return {{"op", "dist_to"}, {"a", domain()->literal(c_)}}; }

 private:
  CodePoint c_;
};

class TentCode final : public FunctionCode {
 public:
  TentCode(SpacePtr domain, CodePoint c, Rational rho)
      : FunctionCode(std::move(domain), real_line()), c_(std::move(c)), rho_(std::move(rho)) {}
  std::optional<Quadruple> localized(const CodePoint& a, long j) const override {
    Rational r = Rational::pow2(-j);
    Real v = max(Real(0), Real(rho_) - distance_real(*domain(), a, c_));
    return real_quad(a, r, v, r);
  }
  Json spec() const override {
    return {{"op", "tent"}, {"a", domain()->literal(c_)}, {"r", rho_.str()}};
  }

 private:
  CodePoint c_;
  Rational rho_;
};

class CombineCode final : public FunctionCode {
 public:
  CombineCode(Combine op, FunctionPtr f, FunctionPtr g)
      : FunctionCode(f->domain(), real_line()), op_(op), f_(std::move(f)), g_(std::move(g)) {
    require_real(*f_, "combine");
    require_real(*g_, "combine");
    if (f_->domain()->spec() != g_->domain()->spec())
      throw SpecError("combine: functions have different domains");
  }
  std::optional<Quadruple> localized(const CodePoint& a, long j) const override {
    auto p = f_->localized(a, j);
    auto q = g_->localized(a, j);
    if (!p || !q) return std::nullopt;
    const Rational &u = p->b[0], &v = q->b[0];
    switch (op_) {
      case Combine::Add: return Quadruple{a, p->r, CodePoint::of(u + v), p->s + q->s};
      case Combine::Max: return Quadruple{a, p->r, CodePoint::of(max(u, v)), max(p->s, q->s)};
      case Combine::Min: return Quadruple{a, p->r, CodePoint::of(min(u, v)), max(p->s, q->s)};
    }
    return std::nullopt;
  }
  Json spec() const override {
    static const char* names[] = {"add", "max", "min"};
    return {{"op", names[static_cast<int>(op_)]}, {"f", f_->spec()}, {"g", g_->spec()}};
  }

 private:
  Combine op_;
  FunctionPtr f_, g_;
};

class ScaleCode final : public FunctionCode {
 public:
  ScaleCode(Rational c, FunctionPtr f) : FunctionCode(f->domain(), real_line()), c_(std::move(c)), f_(std::move(f)) {
    require_real(*f_, "scale");
  }
  std::optional<Quadruple> localized(const CodePoint& a, long j) const override {
    if (c_.sign() == 0)
      return Quadruple{a, Rational::pow2(-j), CodePoint::of(Rational(0)),
                       Rational::pow2(-(std::abs(j) + 32))};
    auto p = f_->localized(a, j);
    if (!p) return std::nullopt;
    return Quadruple{a, p->r, CodePoint::of(c_ * p->b[0]), c_.abs() * p->s};
  }
  Json spec() const override { return {{"op", "scale"}, {"c", c_.str()}, {"f", f_->spec()}}; }

 private:
  Rational c_;
  FunctionPtr f_;
};

class ComposeCode final : public FunctionCode {
 public:
  ComposeCode(FunctionPtr g, FunctionPtr f)
      : FunctionCode(f->domain(), g->codomain()), g_(std::move(g)), f_(std::move(f)) {
    if (f_->codomain()->spec() != g_->domain()->spec())
      throw SpecError("compose: codomain of f differs from domain of g");
  }
  std::optional<Quadruple> localized(const CodePoint& a, long j) const override {
    auto p = f_->localized(a, j);
    if (!p) return std::nullopt;
    // B(b, s) lies inside B(b, 2^-j') when 2^-j' >= s.
    long jg = -pow2_ceil(p->s).floor_log2();
    auto q = g_->localized(p->b, jg);
    if (!q) return std::nullopt;
    return Quadruple{a, p->r, q->b, q->s};
  }
  Json spec() const override { return {{"op", "compose"}, {"g", g_->spec()}, {"f", f_->spec()}}; }

 private:
  FunctionPtr g_, f_;
};

class TableCode final : public FunctionCode {
 public:
  TableCode(SpacePtr domain, SpacePtr codomain, std::vector<Quadruple> quads)
      : FunctionCode(std::move(domain), std::move(codomain)), quads_(std::move(quads)) {
    for (const Quadruple& q : quads_) {
      if (q.r.sign() <= 0 || q.s.sign() <= 0) throw SpecError("table quadruple with nonpositive radius");
      if (!this->domain()->admits(q.a) || !this->codomain()->admits(q.b))
        throw SpecError("table quadruple names a point outside its space");
    }
  }
  std::optional<Quadruple> localized(const CodePoint&, long) const override { return std::nullopt; }
  std::optional<Quadruple> quadruple(std::size_t m) const override {
    if (m >= quads_.size()) return std::nullopt;
    return quads_[m];
  }
  std::optional<std::size_t> table_size() const override { return quads_.size(); }
  Json spec() const override {
    Json arr = Json::array();
    for (const Quadruple& q : quads_)
      arr.push_back({{"a", domain()->literal(q.a)}, {"r", q.r.str()},
                     {"b", codomain()->literal(q.b)}, {"s", q.s.str()}});
    return {{"op", "table"}, {"quads", arr}};
  }

 private:
  std::vector<Quadruple> quads_;
};

class UrysohnCode final : public FunctionCode {
 public:
  UrysohnCode(SpacePtr domain, LocatedSet c0, LocatedSet c1, Rational sep)
      : FunctionCode(std::move(domain), real_line()),
        c0_(std::move(c0)), c1_(std::move(c1)), sep_(std::move(sep)) {}

  // |f(x) - f(y)| <= d(x,y) / (g0 + g1) <= d(x,y) / sep.
  std::optional<Quadruple> localized(const CodePoint& a, long j) const override {
    Rational r = Rational::pow2(-j);
    Point pa = Point::constant(a);
    Real g0 = c0_.distance(pa), g1 = c1_.distance(pa);
    return real_quad(a, r, div_bounded(g0, g0 + g1, sep_), r / sep_);
  }
  Json spec() const override {
    Json j{{"op", "urysohn"}, {"separation", sep_.str()}};
    auto lits = [this](const LocatedSet& c) {
      Json arr = Json::array();
      for (const CodePoint& p : c.points) arr.push_back(domain()->literal(p));
      return arr;
    };
    j["c0"] = lits(c0_);
    j["c1"] = lits(c1_);
    return j;
  }

 private:
  LocatedSet c0_, c1_;
  Rational sep_;
};

}  // namespace

FunctionPtr make_const(SpacePtr domain, Rational c) {
  return std::make_shared<ConstCode>(std::move(domain), std::move(c));
}

FunctionPtr make_dist_to(SpacePtr domain, CodePoint a) {
  if (!domain->admits(a)) throw SpecError("dist_to: point is not in the space");
  return std::make_shared<DistToCode>(std::move(domain), std::move(a));
}

FunctionPtr make_tent(SpacePtr domain, CodePoint a, Rational r) {
  if (!domain->admits(a)) throw SpecError("tent: center is not in the space");
  if (r.sign() <= 0) throw SpecError("tent: radius must be positive");
  return std::make_shared<TentCode>(std::move(domain), std::move(a), std::move(r));
}

FunctionPtr make_combine(Combine op, FunctionPtr f, FunctionPtr g) {
  return std::make_shared<CombineCode>(op, std::move(f), std::move(g));
}

FunctionPtr make_scale(Rational c, FunctionPtr f) {
  return std::make_shared<ScaleCode>(std::move(c), std::move(f));
}

FunctionPtr make_compose(FunctionPtr g, FunctionPtr f) {
  return std::make_shared<ComposeCode>(std::move(g), std::move(f));
}

FunctionPtr make_table(SpacePtr domain, SpacePtr codomain, std::vector<Quadruple> quads) {
  return std::make_shared<TableCode>(std::move(domain), std::move(codomain), std::move(quads));
}

FunctionPtr make_urysohn(SpacePtr domain, LocatedSet c0, LocatedSet c1, Rational separation,
                         std::size_t samples) {
  if (separation.sign() <= 0)
    throw OperationError("SeparationUncertified", "urysohn: separation must be positive");
  auto count = [samples](const LocatedSet& c) {
    return c.generators.length ? std::min(*c.generators.length, samples) : samples;
  };
  std::size_t n0 = count(c0), n1 = count(c1);
  for (std::size_t i = 0; i < n0; ++i) {
    Point x = c0.generators.generator(i);
    for (std::size_t j = 0; j < n1; ++j) {
      Point y = c1.generators.generator(j);
      bool ok;
      if (x.constant_value() && y.constant_value()) {
        ok = distance_at_least(*domain, *x.constant_value(), *y.constant_value(), separation) ==
             Certainty::Yes;
      } else {
        ok = metric_on_points(*domain, x, y, 64).lower() >= separation;
      }
      if (!ok)
        throw OperationError("SeparationUncertified",
                             "urysohn: distance between generators " + std::to_string(i) + " and " +
                                 std::to_string(j) + " is not certified >= " + separation.str());
    }
  }
  return std::make_shared<UrysohnCode>(std::move(domain), std::move(c0), std::move(c1),
                                       std::move(separation));
}

}  // namespace csms
