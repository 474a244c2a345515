// Copyright 2026 The csms Authors
// SPDX-License-Identifier: Apache-2.0

#include "core/lebesgue.hpp"

#include <algorithm>
#include <mutex>
#include <numeric>
#include <set>

namespace csms {

namespace {

const unsigned kPrecision = 96;

bool dist_le(const Space& s, const CodePoint& a, const CodePoint& b, const Rational& q) {
  if (auto d = s.exact_distance(a, b)) return *d <= q;
  return distance_less(s, a, b, q, kPrecision) == Certainty::Yes;
}

bool dist_lt(const Space& s, const CodePoint& a, const CodePoint& b, const Rational& q) {
  return distance_less(s, a, b, q, kPrecision) == Certainty::Yes;
}

bool dist_ge(const Space& s, const CodePoint& a, const CodePoint& b, const Rational& q) {
  return distance_at_least(s, a, b, q, kPrecision) == Certainty::Yes;
}

Ball single_ball(const Covering& c, std::size_t n) {
  OpenSetCode u = c.member(n);
  if (u.length() != std::optional<std::size_t>(1) || !u.ball(0))
    throw SpecError("operation needs a covering by single balls");
  return *u.ball(0);
}

}  // namespace

LebesgueCertificate lebesgue_at_level(const Covering& covering, const NetFamily& nets,
                                      unsigned level) {
  const Space& s = *covering.space;
  std::vector<Ball> balls = covering.balls();
  if (balls.empty()) throw OperationError("NotACovering", "empty covering");
  LebesgueCertificate cert;
  cert.level = level;
  cert.cell_radius = Rational::pow2(-static_cast<long>(level));
  std::optional<Rational> lower, upper;
  for (const CodePoint& x : nets.level(level)) {
    std::optional<Rational> best_lo, best_hi;
    std::size_t best_j = 0;
    for (std::size_t j = 0; j < balls.size(); ++j) {
      Bracket d = distance_bracket(s, balls[j].center, x, kPrecision);
      Rational lo = balls[j].radius - d.hi, hi = balls[j].radius - d.lo;
      if (!best_lo || lo > *best_lo) {
        best_lo = lo;
        best_j = j;
      }
      if (!best_hi || hi > *best_hi) best_hi = hi;
    }
    if (best_hi->sign() <= 0)
      throw OperationError("NotACovering", "cell center " + s.literal(x).dump() +
                                               " lies outside every ball");
    cert.cells.push_back({x, best_j, *best_lo});
    Rational cell_lower = *best_lo - cert.cell_radius;
    if (!lower || cell_lower < *lower) lower = cell_lower;
    if (!upper || *best_hi < *upper) {
      upper = *best_hi;
      cert.upper_cell = cert.cells.size() - 1;
    }
  }
  cert.q_lower = *lower;
  cert.q_upper = *upper;
  return cert;
}

LebesgueCertificate lebesgue_number(const Covering& covering, const NetFamily& nets,
                                    const Rational& eps, unsigned start) {
  if (eps.sign() <= 0) throw std::invalid_argument("lebesgue_number: eps must be positive");
  for (unsigned level = start; level <= nets.max_level; ++level) {
    LebesgueCertificate cert = lebesgue_at_level(covering, nets, level);
    if (cert.q_lower.sign() > 0 && cert.q_upper - cert.q_lower <= eps) return cert;
  }
  throw OperationError("LevelExceeded", "no certified Lebesgue bracket of width " + eps.str() +
                                            " up to level " + std::to_string(nets.max_level));
}

std::vector<CodePoint> seeded_samples(const Space& s, std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<CodePoint> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(s.sample(rng));
  return out;
}

VerifyResult verify_lebesgue(const Covering& covering, const Rational& q,
                             const std::vector<CodePoint>& samples, std::size_t depth) {
  if (q.sign() <= 0) throw std::invalid_argument("verify_lebesgue: q must be positive");
  const Space& s = *covering.space;
  std::size_t members = std::min(covering.members(), depth);
  std::vector<OpenSetCode> opens;
  for (std::size_t m = 0; m < members; ++m) opens.push_back(covering.member(m));
  VerifyResult out;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    VerifiedSample v{samples[i], std::nullopt, 0};
    for (std::size_t m = 0; m < members && !v.member; ++m) {
      std::size_t h = opens[m].horizon(depth);
      for (std::size_t b = 0; b < h; ++b) {
        auto ball = opens[m].ball(b);
        if (ball && ball->radius >= q && dist_le(s, samples[i], ball->center, ball->radius - q)) {
          v.member = m;
          v.ball = b;
          break;
        }
      }
    }
    if (!v.member && !out.counter) out.counter = i;
    out.samples.push_back(std::move(v));
  }
  return out;
}

RefinedSet refine_covering(const Covering& covering, const CodePoint& b, std::size_t n) {
  Ball ball = single_ball(covering, n);
  Rational d = distance_bracket(*covering.space, ball.center, b, kPrecision).hi;
  Rational q = min(ball.radius - d, Rational::pow2(-static_cast<long>(n)));
  RefinedSet out;
  if (q.sign() <= 0) return out;
  out.radius = q;
  out.set = punctured_ball(covering.space, Point::constant(b), q);
  return out;
}

std::size_t subcover_from_lebesgue(const Rational& q) {
  if (q.sign() <= 0) throw std::invalid_argument("subcover_from_lebesgue: q must be positive");
  long e = q.floor_log2();
  long k = Rational::pow2(e) == q ? 1 - e : -e;
  return static_cast<std::size_t>(std::max(0L, k));
}

CoverageCheck check_prefix_coverage(const Covering& covering, std::size_t k,
                                    const std::vector<CodePoint>& samples) {
  const Space& s = *covering.space;
  std::size_t members = std::min(k, covering.members());
  CoverageCheck out;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    bool in = false;
    for (std::size_t m = 0; m < members && !in; ++m) {
      OpenSetCode u = covering.member(m);
      in = open_membership(s, Point::constant(samples[i]), u, u.horizon(covering.horizon + 4096),
                           kPrecision)
               .yes;
    }
    ++out.checked;
    if (!in) {
      out.uncovered = i;
      return out;
    }
  }
  return out;
}

Covering atsuji_refinement(const Covering& covering, std::size_t horizon) {
  struct State {
    std::mutex mu;
    std::vector<Ball> balls;
    std::size_t slot = 0;
  };
  auto state = std::make_shared<State>();
  std::size_t n_members = covering.members();
  Covering base = covering;
  auto ball = [state, base, n_members](std::size_t i) {
    std::lock_guard lock(state->mu);
    while (state->balls.size() <= i) {
      auto [n, e] = detail::unpair(state->slot++);
      if (n >= n_members) continue;
      Ball b = single_ball(base, n);
      long den = static_cast<long>(e) + 1;
      for (long p = 1; Rational(p, den) < b.radius; ++p)
        if (std::gcd(p, den) == 1) state->balls.push_back({b.center, Rational(p, den)});
    }
    return state->balls[i];
  };
  Covering out;
  out.space = covering.space;
  out.member = [ball](std::size_t i) { return OpenSetCode::of_balls({ball(i)}); };
  out.horizon = horizon;
  out.spec = covering.spec;
  out.spec["refinement"] = "atsuji";
  return out;
}

bool escapes_member(const Space& s, const CodePoint& b, const OpenSetCode& member,
                    std::size_t ball_horizon) {
  // Later balls of a truncated union tend to be the larger ones.
  std::size_t h = member.horizon(ball_horizon);
  for (std::size_t i = h; i-- > 0;) {
    auto ball = member.ball(i);
    if (ball && !dist_ge(s, ball->center, b, ball->radius)) return false;
  }
  return true;
}

namespace {

bool inside_member(const Space& s, const CodePoint& a, const OpenSetCode& member,
                   std::size_t ball_horizon) {
  std::size_t h = member.horizon(ball_horizon);
  for (std::size_t i = 0; i < h; ++i) {
    auto ball = member.ball(i);
    if (ball && dist_lt(s, ball->center, a, ball->radius)) return true;
  }
  return false;
}

}  // namespace

WitnessSearch strong_witness_search(const Covering& covering, const Rational& eps,
                                    std::size_t point_budget, std::size_t escape_budget) {
  if (eps.sign() <= 0) throw std::invalid_argument("strong_witness_search: eps must be positive");
  const Space& s = *covering.space;
  std::size_t h = covering.members();
  std::size_t ball_horizon = std::max<std::size_t>(covering.horizon, 4096);
  std::vector<OpenSetCode> members;
  for (std::size_t m = 0; m < h; ++m) members.push_back(covering.member(m));
  WitnessSearch out;
  for (std::size_t i = 0; i < point_budget; ++i) {
    out.scanned = i + 1;
    CodePoint a = s.code_point(i);
    std::vector<std::size_t> containing;
    for (std::size_t m = 0; m < h; ++m)
      if (inside_member(s, a, members[m], ball_horizon)) containing.push_back(m);
    if (containing.empty()) continue;  // not certified inside the truncated covering
    std::vector<CodePoint> cands = s.neighbors(a, eps, escape_budget);
    std::vector<Escape> escapes(h);
    std::vector<bool> done(h, false);
    bool ok = true;
    for (std::size_t m : containing) {
      for (const CodePoint& b : cands) {
        if (dist_lt(s, a, b, eps) && escapes_member(s, b, members[m], ball_horizon)) {
          escapes[m] = {m, b};
          done[m] = true;
          break;
        }
      }
      if (!done[m]) {
        ok = false;
        break;
      }
    }
    if (!ok) continue;
    for (std::size_t m = 0; m < h && ok; ++m) {
      if (done[m]) continue;
      if (escapes_member(s, a, members[m], ball_horizon)) {
        escapes[m] = {m, a};
        continue;
      }
      ok = false;
      for (const CodePoint& b : cands) {
        if (dist_lt(s, a, b, eps) && escapes_member(s, b, members[m], ball_horizon)) {
          escapes[m] = {m, b};
          ok = true;
          break;
        }
      }
    }
    if (!ok) continue;
    out.report = WitnessReport{a, i, eps, h, std::move(escapes)};
    return out;
  }
  return out;
}

bool check_witness(const Covering& covering, const WitnessReport& report) {
  const Space& s = *covering.space;
  if (report.escapes.size() != report.horizon || report.horizon != covering.members()) return false;
  std::size_t ball_horizon = std::max<std::size_t>(covering.horizon, 4096);
  for (std::size_t m = 0; m < report.horizon; ++m) {
    const Escape& e = report.escapes[m];
    if (e.member != m) return false;
    if (!(e.b == report.a) && !dist_lt(s, report.a, e.b, report.eps)) return false;
    if (!escapes_member(s, e.b, covering.member(m), ball_horizon)) return false;
  }
  return true;
}

PointWitnessCheck verify_point_witness(const Covering& covering, const Point& x,
                                       const Rational& eps,
                                       const std::function<Point(std::size_t)>& escape,
                                       unsigned max_precision) {
  const Space& s = *covering.space;
  std::size_t ball_horizon = std::max<std::size_t>(covering.horizon, 4096);
  auto settle = [&](auto&& test) {
    for (unsigned k = 16; k <= max_precision; k *= 2) {
      int r = test(k);
      if (r != 0) return r > 0;
    }
    return false;
  };
  PointWitnessCheck out;
  for (std::size_t m = 0; m < covering.members(); ++m) {
    Point y = escape(m);
    bool close = settle([&](unsigned k) {
      Approx d = metric_on_points(s, x, y, k);
      if (d.upper() < eps) return 1;
      return d.lower() >= eps ? -1 : 0;
    });
    bool outside = close;
    OpenSetCode u = covering.member(m);
    std::size_t h = u.horizon(ball_horizon);
    for (std::size_t i = 0; i < h && outside; ++i) {
      auto ball = u.ball(i);
      if (!ball) continue;
      outside = settle([&](unsigned k) {
        Approx d = metric_on_points(s, Point::constant(ball->center), y, k);
        if (d.lower() >= ball->radius) return 1;
        return d.upper() < ball->radius ? -1 : 0;
      });
    }
    if (!outside) {
      out.failed_member = m;
      return out;
    }
  }
  out.ok = true;
  return out;
}

HalvingResult witness_halving(const Space& s, const Point& x, const Rational& eps) {
  if (eps.sign() <= 0) throw std::invalid_argument("witness_halving: eps must be positive");
  // 2^-m+1 <= eps/4.
  long m = std::max(0L, 1 - (eps / Rational(4)).floor_log2());
  CodePoint a = x.at(static_cast<unsigned>(m));
  Rational bound = Rational::pow2(1 - m);
  Approx d = metric_on_points(s, x, Point::constant(a), static_cast<unsigned>(m + 4));
  if (!(d.upper() < eps / Rational(2)))
    throw OperationError("NoNearbyCodePoint", "point approximation is not within eps/2");
  return {a, static_cast<unsigned>(m), bound};
}

std::vector<WitnessPair> witness_pairs(const Covering& covering, std::size_t m_count,
                                       std::size_t point_budget, std::size_t escape_budget,
                                       std::size_t inhabitant_budget) {
  std::vector<WitnessPair> out;
  for (std::size_t m = 0; m < m_count; ++m) {
    Rational eps = Rational::pow2(-static_cast<long>(m));
    WitnessSearch w = strong_witness_search(covering, eps, point_budget, escape_budget);
    if (!w.report)
      throw OperationError("WitnessUnavailable",
                           "no strong witness at eps = 2^-" + std::to_string(m));
    IsolatedSearch inh = isolated_search(*covering.space, Point::constant(w.report->a), eps,
                                         inhabitant_budget);
    if (!inh.inhabitant)
      throw OperationError("WitnessUnavailable",
                           "witness at eps = 2^-" + std::to_string(m) + " looks isolated");
    out.push_back({w.report->a, *inh.inhabitant, *w.report});
  }
  return out;
}

std::vector<std::size_t> thin_pairs(const std::vector<std::pair<CodePoint, CodePoint>>& pairs) {
  std::vector<std::size_t> h;
  if (pairs.empty()) return h;
  h.push_back(0);
  for (;;) {
    const auto& cur = pairs[h.back()];
    std::size_t last = h.back();
    for (std::size_t m = h.back() + 1; m < pairs.size(); ++m) {
      const auto& p = pairs[m];
      if (p.first == cur.first || p.first == cur.second || p.second == cur.first ||
          p.second == cur.second)
        last = m;
    }
    if (last + 1 >= pairs.size()) return h;
    h.push_back(last + 1);
  }
}

SeparatedSequence separated_sequence(const Space& s, const Rational& eps, std::size_t count,
                                     std::size_t budget) {
  if (eps.sign() <= 0) throw std::invalid_argument("separated_sequence: eps must be positive");
  SeparatedSequence out;
  for (std::size_t i = 0; i < budget && out.points.size() < count; ++i) {
    out.scanned = i + 1;
    CodePoint a = s.code_point(i);
    bool far = true;
    for (const CodePoint& p : out.points) {
      bool gt;
      if (auto d = s.exact_distance(a, p))
        gt = *d > eps;
      else
        gt = certify_greater(s.distance(a, p), eps, kPrecision) == Certainty::Yes;
      if (!gt) {
        far = false;
        break;
      }
    }
    if (far) {
      out.points.push_back(a);
      out.indices.push_back(i);
    }
  }
  out.complete = out.points.size() >= count;
  return out;
}

std::vector<std::pair<CodePoint, CodePoint>> punctured_partners(const Space& s,
                                                                const std::vector<CodePoint>& a0,
                                                                const Rational& eps,
                                                                std::size_t budget) {
  std::vector<std::pair<CodePoint, CodePoint>> out;
  for (std::size_t n = 0; n < a0.size(); ++n) {
    Rational q = eps * Rational::pow2(-static_cast<long>(n) - 1);
    IsolatedSearch inh = isolated_search(s, Point::constant(a0[n]), q, budget);
    if (!inh.inhabitant)
      throw OperationError("WitnessUnavailable", "no point in P(a0_" + std::to_string(n) + ", " +
                                                     q.str() + ")");
    out.emplace_back(a0[n], *inh.inhabitant);
  }
  return out;
}

NonuniformResult nonuniform_function(SpacePtr space,
                                     const std::vector<std::pair<CodePoint, CodePoint>>& pairs,
                                     unsigned levels, const Rational& tolerance) {
  if (pairs.empty()) throw OperationError("LocatednessUncertified", "no pairs");
  const Space& s = *space;
  std::vector<CodePoint> c0, c1;
  for (const auto& p : pairs) {
    c0.push_back(p.first);
    c1.push_back(p.second);
  }
  std::optional<Rational> sep;
  for (const CodePoint& x : c0)
    for (const CodePoint& y : c1) {
      Rational lo = distance_bracket(s, x, y, kPrecision).lo;
      if (!sep || lo < *sep) sep = lo;
    }
  if (sep->sign() <= 0)
    throw OperationError("LocatednessUncertified", "C0 and C1 are not certifiably apart");
  NonuniformResult out;
  out.separation = *sep;
  out.f = make_urysohn(space, LocatedSet::finite(space, c0), LocatedSet::finite(space, c1), *sep,
                       std::max(c0.size(), c1.size()));
  Rational q = tolerance / Rational(4);
  std::vector<std::optional<std::pair<Quadruple, Quadruple>>> evals(pairs.size());
  auto evaluate = [&](std::size_t i) -> const std::pair<Quadruple, Quadruple>& {
    if (!evals[i]) {
      EvalResult e0 = eval(*out.f, Point::constant(pairs[i].first), q, 512);
      EvalResult e1 = eval(*out.f, Point::constant(pairs[i].second), q, 512);
      if (!e0.quad || !e1.quad)
        throw OperationError("DepthExhausted", "urysohn evaluation did not converge");
      evals[i] = std::make_pair(*e0.quad, *e1.quad);
    }
    return *evals[i];
  };
  for (unsigned k = 0; k <= levels; ++k) {
    Violation v;
    v.k = k;
    Rational delta = Rational::pow2(-static_cast<long>(k));
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      Bracket d = distance_bracket(s, pairs[i].first, pairs[i].second, kPrecision);
      if (!(d.hi < delta)) continue;
      const auto& [q0, q1] = evaluate(i);
      v.pair = i;
      v.distance_upper = d.hi;
      v.at0 = q0;
      v.at1 = q1;
      v.gap_lower = (q0.b[0] - q1.b[0]).abs() - q0.s - q1.s;
      break;
    }
    out.schedule.push_back(std::move(v));
  }
  return out;
}

ModulusResult modulus_uc(const FunctionCode& f, const NetFamily& nets, const Rational& eps,
                         std::size_t samples, std::uint64_t seed) {
  if (eps.sign() <= 0) throw std::invalid_argument("modulus_uc: eps must be positive");
  if (f.codomain()->name() != "reals") throw SpecError("modulus_uc needs a real-valued function");
  const Space& s = *nets.space;
  Rational half = eps / Rational(2);
  for (unsigned n = 0; n + 2 <= nets.max_level; ++n) {
    std::vector<CodePoint> cells = nets.level(n);
    std::vector<Ball> balls;
    bool ok = true;
    for (const CodePoint& x : cells) {
      auto quad = f.localized(x, static_cast<long>(n) - 1);
      if (!quad || !(quad->s < half)) {
        ok = false;
        break;
      }
      balls.push_back({x, quad->r});
    }
    if (!ok) continue;
    ModulusResult out;
    out.level = n;
    out.covering = Covering::of_balls(nets.space, balls);
    out.certificate = lebesgue_number(out.covering, nets, Rational::pow2(-static_cast<long>(n) - 2), n + 1);
    out.delta = out.certificate.q_lower;
    // Spot check on seeded pairs at distance < delta.
    std::mt19937_64 rng(seed);
    Rational q = eps / Rational(64);
    for (std::size_t attempts = 0; out.pairs_checked < samples && attempts < 20 * samples; ++attempts) {
      CodePoint x = s.sample(rng);
      std::vector<CodePoint> near = s.neighbors(x, out.delta, 8);
      if (near.empty()) continue;
      CodePoint y = near[rng() % near.size()];
      if (!dist_lt(s, x, y, out.delta)) continue;
      EvalResult fx = eval(f, Point::constant(x), q, 256);
      EvalResult fy = eval(f, Point::constant(y), q, 256);
      ++out.pairs_checked;
      if (!fx.quad || !fy.quad) {
        ++out.violations;
        continue;
      }
      Rational gap = (fx.quad->b[0] - fy.quad->b[0]).abs() + fx.quad->s + fy.quad->s;
      if (!(gap < eps)) ++out.violations;
    }
    return out;
  }
  throw OperationError("DepthExhausted", "no net level up to " + std::to_string(nets.max_level) +
                                             " has quadruples with s < eps/2");
}

}  // namespace csms
