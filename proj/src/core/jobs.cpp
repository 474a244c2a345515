// Copyright 2026 The csms Authors
// SPDX-License-Identifier: Apache-2.0

#include "core/jobs.hpp"

#include <algorithm>
#include <charconv>
#include <set>

#include "core/families.hpp"

namespace csms {

namespace {

const unsigned kPrecision = 128;

Rational rat(const Json& j, const std::string& what) {
  if (j.is_string()) return Rational::parse(j.get<std::string>());
  if (j.is_number_integer()) return Rational(j.get<long>());
  throw SpecError(what + ": expected a rational \"p/q\", got " + j.dump());
}

Rational positive(const Json& j, const std::string& what) {
  Rational r = rat(j, what);
  if (r.sign() <= 0) throw SpecError(what + " must be positive, got " + r.str());
  return r;
}

std::uint64_t parse_count(const Json& j, const std::string& what) {
  if (j.is_number_unsigned()) return j.get<std::uint64_t>();
  if (j.is_number_integer() && j.get<long>() >= 0) return static_cast<std::uint64_t>(j.get<long>());
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec == std::errc() && ptr == s.data() + s.size() && !s.empty()) return v;
  }
  throw SpecError(what + ": expected a nonnegative integer, got " + j.dump());
}

const Json& need(const Json& p, const char* key) {
  if (!p.is_object() || !p.contains(key)) throw SpecError(std::string("payload needs \"") + key + "\"");
  return p.at(key);
}

// Reads flags and records the values actually used.
class Flags {
 public:
  explicit Flags(const Json& j) : j_(j.is_null() ? Json::object() : j) {
    if (!j_.is_object()) throw SpecError("flags must be a JSON object");
  }

  bool has(const char* name) const { return j_.contains(name) && !j_.at(name).is_null(); }

  Rational rational(const char* name, const Rational& def) {
    Rational v = has(name) ? positive(j_.at(name), std::string("--") + name) : def;
    used_[name] = v.str();
    return v;
  }
  Rational required(const char* name) {
    if (!has(name)) throw SpecError(std::string("missing --") + name);
    return rational(name, Rational(1));
  }
  std::uint64_t count(const char* name, std::uint64_t def) {
    std::uint64_t v = has(name) ? parse_count(j_.at(name), std::string("--") + name) : def;
    used_[name] = v;
    return v;
  }
  std::optional<std::uint64_t> maybe_count(const char* name) {
    if (!has(name)) return std::nullopt;
    return count(name, 0);
  }
  const Json& used() const { return used_; }

 private:
  Json j_;
  Json used_ = Json::object();
};

Json lit(const Space& s, const CodePoint& a) { return s.literal(a); }

CodePoint point_of(const Space& s, const Json& j) {
  CodePoint a = s.parse_literal(j);
  if (!s.admits(a)) throw SpecError("not a code point of " + s.name() + ": " + j.dump());
  return a;
}

Ball ball_of(const Space& s, const Json& j) {
  if (!j.is_object()) throw SpecError("ball must be {\"center\", \"radius\"}, got " + j.dump());
  return {point_of(s, need(j, "center")), positive(need(j, "radius"), "ball radius")};
}

// d < q, exact where possible.
bool less(const Space& s, const CodePoint& a, const CodePoint& b, const Rational& q) {
  return distance_less(s, a, b, q, kPrecision) == Certainty::Yes;
}
bool at_most(const Space& s, const CodePoint& a, const CodePoint& b, const Rational& q) {
  if (auto d = s.exact_distance(a, b)) return *d <= q;
  return distance_bracket(s, a, b, kPrecision).hi <= q;
}
bool at_least(const Space& s, const CodePoint& a, const CodePoint& b, const Rational& q) {
  if (auto d = s.exact_distance(a, b)) return *d >= q;
  return distance_bracket(s, a, b, kPrecision).lo >= q;
}

Json quad_json(const FunctionCode& f, const Quadruple& q) {
  return {{"a", lit(*f.domain(), q.a)}, {"r", q.r.str()}, {"b", lit(*f.codomain(), q.b)},
          {"s", q.s.str()}};
}

Quadruple quad_of(const FunctionCode& f, const Json& j) {
  return {point_of(*f.domain(), need(j, "a")), positive(need(j, "r"), "r"),
          point_of(*f.codomain(), need(j, "b")), positive(need(j, "s"), "s")};
}

bool same_quad(const Quadruple& x, const Quadruple& y) {
  return x.a == y.a && x.r == y.r && x.b == y.b && x.s == y.s;
}

// Replay bookkeeping for `check`.
struct Replay {
  std::size_t checked = 0;
  Json failures = Json::array();

  void expect(bool ok, const std::string& what) {
    ++checked;
    if (!ok && failures.size() < 32) failures.push_back(what);
  }
};

Covering job_covering(SpacePtr space, const Json& payload, Flags& flags) {
  Json p = payload;
  if (auto h = flags.maybe_count("horizon")) p["horizon"] = *h;
  return covering_from(std::move(space), p);
}

// ---------------------------------------------------------------------------
// lebesgue

Json certificate_json(const Space& s, const LebesgueCertificate& c) {
  Json cells = Json::array();
  for (const LebesgueCell& cell : c.cells)
    cells.push_back({{"center", lit(s, cell.center)}, {"ball", cell.index}, {"slack", cell.slack.str()}});
  return {{"qLower", c.q_lower.str()},
          {"qUpper", c.q_upper.str()},
          {"level", c.level},
          {"cellRadius", c.cell_radius.str()},
          {"upperCell", c.upper_cell},
          {"cells", cells}};
}

void replay_certificate(const Space& s, const std::vector<Ball>& balls, const Json& cert,
                        Replay& r) {
  Rational q_lower = rat(need(cert, "qLower"), "qLower");
  Rational q_upper = rat(need(cert, "qUpper"), "qUpper");
  auto level = static_cast<unsigned>(parse_count(need(cert, "level"), "level"));
  Rational radius = rat(need(cert, "cellRadius"), "cellRadius");
  r.expect(q_lower.sign() > 0, "qLower is not positive");
  r.expect(q_lower <= q_upper, "qLower > qUpper");
  r.expect(radius == Rational::pow2(-static_cast<long>(level)), "cell radius is not 2^-level");
  std::vector<CodePoint> net = s.net(level);
  const Json& cells = need(cert, "cells");
  r.expect(cells.size() == net.size(), "cell list differs from the net");
  for (std::size_t i = 0; i < cells.size() && i < net.size(); ++i) {
    const Json& cell = cells[i];
    CodePoint x = point_of(s, need(cell, "center"));
    std::size_t j = parse_count(need(cell, "ball"), "ball");
    Rational slack = rat(need(cell, "slack"), "slack");
    bool ok = x == net[i] && j < balls.size() && slack >= q_lower + radius &&
              at_most(s, x, balls[j].center, balls[j].radius - slack);
    r.expect(ok, "cell " + std::to_string(i) + " certificate fails");
  }
  std::size_t u = parse_count(need(cert, "upperCell"), "upperCell");
  if (u < net.size()) {
    bool ok = true;
    for (const Ball& b : balls) ok = ok && at_least(s, net[u], b.center, b.radius - q_upper);
    r.expect(ok, "qUpper is below the tent maximum at the upper cell");
  } else {
    r.expect(false, "upper cell out of range");
  }
}

JobResult job_lebesgue(const Json& p, Flags& flags) {
  SpacePtr space = space_from(p);
  Covering cov = job_covering(space, p, flags);
  Rational eps = flags.rational("eps", Rational(1, 1000));
  auto level = static_cast<unsigned>(flags.count("level", 24));
  LebesgueCertificate c = lebesgue_number(cov, nets_for(space, level), eps);
  JobResult out;
  out.report["result"] = certificate_json(*space, c);
  out.summary = "Lebesgue number in [" + c.q_lower.str() + ", " + c.q_upper.str() + "] at level " +
                std::to_string(c.level) + " (" + std::to_string(c.cells.size()) + " cells)";
  return out;
}

void check_lebesgue(const Json& rep, Replay& r) {
  const Json& input = need(rep, "input");
  SpacePtr space = space_from(input);
  Flags flags(rep.value("flags", Json::object()));
  Covering cov = job_covering(space, input, flags);
  replay_certificate(*space, cov.balls(), need(rep, "result"), r);
}

// ---------------------------------------------------------------------------
// verify, subcover

std::vector<CodePoint> job_samples(const Space& s, const Json& p, Flags& flags) {
  if (p.contains("samples")) {
    std::vector<CodePoint> out;
    for (const Json& j : p.at("samples")) out.push_back(point_of(s, j));
    return out;
  }
  std::size_t n = flags.count("samples", 1000);
  std::uint64_t seed = flags.count("seed", 0);
  return seeded_samples(s, n, seed);
}

JobResult job_verify(const Json& p, Flags& flags) {
  SpacePtr space = space_from(p);
  Covering cov = job_covering(space, p, flags);
  Rational q = flags.required("q");
  std::size_t depth = flags.count("depth", cov.members());
  std::vector<CodePoint> samples = job_samples(*space, p, flags);
  VerifyResult v = verify_lebesgue(cov, q, samples, depth);
  Json certified = Json::array();
  for (const VerifiedSample& s : v.samples)
    if (s.member)
      certified.push_back({{"x", lit(*space, s.x)}, {"member", *s.member}, {"ball", s.ball}});
  JobResult out;
  Json result{{"q", q.str()}, {"samples", samples.size()}, {"certified", certified}};
  if (v.counter) {
    result["counter"] = {{"index", *v.counter}, {"x", lit(*space, samples[*v.counter])}};
    out.exit_code = kExitFailure;
    out.report["status"] = "failure";
    out.summary = "counter sample " + lit(*space, samples[*v.counter]).dump() + " for q = " + q.str();
  } else {
    result["counter"] = nullptr;
    out.summary = "q = " + q.str() + " certified on " + std::to_string(samples.size()) + " samples";
  }
  out.report["result"] = result;
  return out;
}

void check_verify(const Json& rep, Replay& r) {
  const Json& input = need(rep, "input");
  SpacePtr space = space_from(input);
  Flags flags(rep.value("flags", Json::object()));
  Covering cov = job_covering(space, input, flags);
  const Json& res = need(rep, "result");
  Rational q = positive(need(res, "q"), "q");
  for (const Json& c : need(res, "certified")) {
    CodePoint x = point_of(*space, need(c, "x"));
    std::size_t m = parse_count(need(c, "member"), "member");
    std::size_t b = parse_count(need(c, "ball"), "ball");
    auto ball = m < cov.members() ? cov.member(m).ball(b) : std::nullopt;
    r.expect(ball && at_most(*space, x, ball->center, ball->radius - q),
             "sample " + lit(*space, x).dump() + " not certified");
  }
}

JobResult job_subcover(const Json& p, Flags& flags) {
  SpacePtr space = space_from(p);
  Covering cov = job_covering(space, p, flags);
  Rational q = flags.required("q");
  std::size_t k = subcover_from_lebesgue(q);
  std::size_t members = std::min(k, cov.members());
  std::vector<CodePoint> samples = job_samples(*space, p, flags);
  Json cover = Json::array();
  Json uncovered = nullptr;
  for (std::size_t i = 0; i < samples.size() && uncovered.is_null(); ++i) {
    bool found = false;
    for (std::size_t m = 0; m < members && !found; ++m) {
      OpenSetCode u = cov.member(m);
      Membership mem = open_membership(*space, Point::constant(samples[i]), u, u.horizon(4096),
                                       kPrecision);
      if (mem.yes) {
        cover.push_back({{"x", lit(*space, samples[i])}, {"member", m}, {"ball", mem.index}});
        found = true;
      }
    }
    if (!found) uncovered = {{"index", i}, {"x", lit(*space, samples[i])}};
  }
  JobResult out;
  out.report["result"] = {{"q", q.str()}, {"k", k},         {"members", members},
                          {"cover", cover}, {"uncovered", uncovered}};
  out.summary = "k = " + std::to_string(k) + "; first " + std::to_string(members) + " members ";
  if (uncovered.is_null()) {
    out.summary += "cover " + std::to_string(samples.size()) + " samples";
  } else {
    out.exit_code = kExitFailure;
    out.report["status"] = "failure";
    out.summary += "miss " + uncovered["x"].dump();
  }
  return out;
}

void check_subcover(const Json& rep, Replay& r) {
  const Json& input = need(rep, "input");
  SpacePtr space = space_from(input);
  Flags flags(rep.value("flags", Json::object()));
  Covering cov = job_covering(space, input, flags);
  const Json& res = need(rep, "result");
  Rational q = positive(need(res, "q"), "q");
  std::size_t k = parse_count(need(res, "k"), "k");
  auto kl = static_cast<long>(k);
  r.expect(Rational::pow2(-kl) < q && (k == 0 || q <= Rational::pow2(1 - kl)),
           "k is not the least with 2^-k < q");
  for (const Json& c : need(res, "cover")) {
    CodePoint x = point_of(*space, need(c, "x"));
    std::size_t m = parse_count(need(c, "member"), "member");
    std::size_t b = parse_count(need(c, "ball"), "ball");
    auto ball = m < k && m < cov.members() ? cov.member(m).ball(b) : std::nullopt;
    r.expect(ball && less(*space, x, ball->center, ball->radius),
             "sample " + lit(*space, x).dump() + " not in member " + std::to_string(m));
  }
}

// ---------------------------------------------------------------------------
// witness, pairs

Json witness_json(const Space& s, const WitnessReport& w) {
  Json escapes = Json::array();
  for (const Escape& e : w.escapes) escapes.push_back({{"member", e.member}, {"b", lit(s, e.b)}});
  return {{"witness", lit(s, w.a)}, {"candidate", w.candidate}, {"eps", w.eps.str()},
          {"horizon", w.horizon},   {"escapes", escapes}};
}

WitnessReport witness_of(const Space& s, const Json& j) {
  WitnessReport w;
  w.a = point_of(s, need(j, "witness"));
  w.candidate = parse_count(need(j, "candidate"), "candidate");
  w.eps = positive(need(j, "eps"), "eps");
  w.horizon = parse_count(need(j, "horizon"), "horizon");
  for (const Json& e : need(j, "escapes"))
    w.escapes.push_back({parse_count(need(e, "member"), "member"), point_of(s, need(e, "b"))});
  return w;
}

JobResult job_witness(const Json& p, Flags& flags) {
  SpacePtr space = space_from(p);
  Covering cov = job_covering(space, p, flags);
  Rational eps = flags.required("eps");
  std::size_t budget = flags.count("budget", 10000);
  std::size_t escapes = flags.count("depth", 256);
  WitnessSearch w = strong_witness_search(cov, eps, budget, escapes);
  JobResult out;
  if (w.report) {
    Json res = witness_json(*space, *w.report);
    res["scanned"] = w.scanned;
    out.report["result"] = res;
    out.summary = "strong " + eps.str() + "-witness " + res["witness"].dump() + " against " +
                  std::to_string(cov.members()) + " members";
  } else {
    out.exit_code = kExitFailure;
    out.report["status"] = "not_found";
    out.report["result"] = {{"scanned", w.scanned},
                            {"horizon", cov.members()},
                            {"budgets", {{"points", budget}, {"escapes", escapes}}}};
    out.summary = "NotFound: no strong " + eps.str() + "-witness among " +
                  std::to_string(w.scanned) + " code points (horizon " +
                  std::to_string(cov.members()) + ")";
  }
  return out;
}

void check_witness_report(const Json& rep, Replay& r) {
  if (rep.value("status", "") == "not_found") return;
  const Json& input = need(rep, "input");
  SpacePtr space = space_from(input);
  Flags flags(rep.value("flags", Json::object()));
  Covering cov = job_covering(space, input, flags);
  r.expect(check_witness(cov, witness_of(*space, need(rep, "result"))), "witness escapes fail");
}

CodePoint flip_digit(const Space& s, const CodePoint& a, std::size_t index) {
  Json w = s.literal(a);
  if (w.is_string()) {
    std::string t = w.get<std::string>();
    if (t.size() <= index) t.resize(index + 1, '0');
    t[index] = t[index] == '0' ? '1' : '0';
    return s.parse_literal(t);
  }
  if (!w.is_array()) throw SpecError("flip partners need a word space");
  while (w.size() <= index) w.push_back(0);
  w[index] = w[index].get<long>() == 0 ? 1 : 0;
  return s.parse_literal(w);
}

Json schedule_json(const FunctionCode& f, const NonuniformResult& nu) {
  Json out = Json::array();
  for (const Violation& v : nu.schedule) {
    if (!v.pair) {
      out.push_back({{"k", v.k}, {"pair", nullptr}});
      continue;
    }
    out.push_back({{"k", v.k},
                   {"pair", *v.pair},
                   {"distanceUpper", v.distance_upper.str()},
                   {"at0", quad_json(f, v.at0)},
                   {"at1", quad_json(f, v.at1)},
                   {"gapLower", v.gap_lower.str()}});
  }
  return out;
}

JobResult job_pairs(const Json& p, Flags& flags) {
  SpacePtr space = space_from(p);
  Rational tol = flags.rational("eps", Rational(1, 1000));
  bool separated = p.value("construction", "") == "separated";
  std::size_t budget = flags.count("budget", separated ? (std::size_t{1} << 20) : 10000);
  std::vector<std::pair<CodePoint, CodePoint>> pairs;
  Json res = Json::object();
  Json pair_list = Json::array();
  unsigned levels;
  if (separated) {
    Rational sep = positive(p.value("separation", Json("1/2")), "separation");
    levels = static_cast<unsigned>(flags.count("level", 20));
    SeparatedSequence seq = separated_sequence(*space, sep, levels + 1, budget);
    if (!seq.complete)
      throw OperationError("WitnessUnavailable", "only " + std::to_string(seq.points.size()) +
                                                     " separated points within budget");
    std::string partners = p.value("partners", "search");
    if (partners == "flip") {
      for (std::size_t n = 0; n < seq.points.size(); ++n)
        pairs.emplace_back(seq.points[n], flip_digit(*space, seq.points[n], n + 1));
    } else if (partners == "search") {
      pairs = punctured_partners(*space, seq.points, sep, budget);
    } else {
      throw SpecError("partners must be \"search\" or \"flip\"");
    }
    Json idx = Json::array();
    for (std::size_t i : seq.indices) idx.push_back(i);
    res["sequenceIndices"] = idx;
  } else {
    Covering cov = job_covering(space, p, flags);
    levels = static_cast<unsigned>(flags.count("level", 8));
    std::size_t escapes = flags.count("depth", 256);
    std::vector<WitnessPair> wp = witness_pairs(cov, levels, budget, escapes, 4096);
    Json witnesses = Json::array();
    for (const WitnessPair& w : wp) {
      pairs.emplace_back(w.b0, w.b1);
      witnesses.push_back(witness_json(*space, w.report));
    }
    res["witnesses"] = witnesses;
  }
  for (const auto& [b0, b1] : pairs)
    pair_list.push_back({{"b0", lit(*space, b0)}, {"b1", lit(*space, b1)},
                         {"distanceUpper", distance_bracket(*space, b0, b1, kPrecision).hi.str()}});
  std::vector<std::size_t> kept = thin_pairs(pairs);
  std::vector<std::pair<CodePoint, CodePoint>> retained;
  for (std::size_t i : kept) retained.push_back(pairs[i]);
  NonuniformResult nu = nonuniform_function(space, retained, levels, tol);
  res["pairs"] = pair_list;
  res["thinned"] = kept;
  res["separation"] = nu.separation.str();
  res["function"] = nu.f->spec();
  res["schedule"] = schedule_json(*nu.f, nu);
  JobResult out;
  std::size_t good = 0;
  Rational floor = Rational(1) - tol;
  for (const Violation& v : nu.schedule)
    if (v.pair && v.gap_lower >= floor) ++good;
  if (good != nu.schedule.size()) {
    out.exit_code = kExitFailure;
    out.report["status"] = "failure";
  }
  out.report["result"] = res;
  out.summary = std::to_string(pairs.size()) + " pairs, " + std::to_string(kept.size()) +
                " after thinning; gap >= " + floor.str() + " at " + std::to_string(good) + " of " +
                std::to_string(nu.schedule.size()) + " scales";
  return out;
}

void check_pairs(const Json& rep, Replay& r) {
  const Json& input = need(rep, "input");
  SpacePtr space = space_from(input);
  Flags flags(rep.value("flags", Json::object()));
  const Json& res = need(rep, "result");
  Rational tol = flags.rational("eps", Rational(1, 1000));
  std::vector<std::pair<CodePoint, CodePoint>> pairs;
  for (const Json& pj : need(res, "pairs"))
    pairs.emplace_back(point_of(*space, need(pj, "b0")), point_of(*space, need(pj, "b1")));
  if (res.contains("witnesses")) {
    Covering cov = job_covering(space, input, flags);
    const Json& ws = res.at("witnesses");
    r.expect(ws.size() == pairs.size(), "witness count differs from pair count");
    for (std::size_t m = 0; m < ws.size() && m < pairs.size(); ++m) {
      WitnessReport w = witness_of(*space, ws[m]);
      Rational eps = Rational::pow2(-static_cast<long>(m));
      r.expect(w.eps == eps && w.a == pairs[m].first && check_witness(cov, w),
               "witness " + std::to_string(m) + " fails");
      r.expect(!(pairs[m].first == pairs[m].second) &&
                   distance_bracket(*space, pairs[m].first, pairs[m].second, kPrecision).lo.sign() > 0 &&
                   less(*space, pairs[m].first, pairs[m].second, eps),
               "pair " + std::to_string(m) + " is not in the punctured ball");
    }
  }
  std::vector<std::pair<CodePoint, CodePoint>> retained;
  std::set<CodePoint> coords;
  for (const Json& i : need(res, "thinned")) {
    std::size_t n = parse_count(i, "thinned");
    if (n >= pairs.size()) {
      r.expect(false, "thinned index out of range");
      continue;
    }
    retained.push_back(pairs[n]);
    r.expect(coords.insert(pairs[n].first).second && coords.insert(pairs[n].second).second,
             "thinned coordinates repeat at pair " + std::to_string(n));
  }
  Rational sep = positive(need(res, "separation"), "separation");
  std::vector<CodePoint> c0, c1;
  for (const auto& [a, b] : retained) {
    c0.push_back(a);
    c1.push_back(b);
  }
  FunctionPtr f;
  try {
    f = make_urysohn(space, LocatedSet::finite(space, c0), LocatedSet::finite(space, c1), sep,
                     std::max(c0.size(), c1.size()));
  } catch (const OperationError& e) {
    r.expect(false, e.what());
    return;
  }
  for (const Json& v : need(res, "schedule")) {
    std::size_t k = parse_count(need(v, "k"), "k");
    if (v.at("pair").is_null()) {
      r.expect(false, "no pair at k = " + std::to_string(k));
      continue;
    }
    std::size_t i = parse_count(v.at("pair"), "pair");
    if (i >= retained.size()) {
      r.expect(false, "schedule pair out of range");
      continue;
    }
    Rational du = rat(need(v, "distanceUpper"), "distanceUpper");
    r.expect(du < Rational::pow2(-static_cast<long>(k)) &&
                 at_most(*space, retained[i].first, retained[i].second, du),
             "pair distance at k = " + std::to_string(k));
    Quadruple q0 = quad_of(*f, need(v, "at0")), q1 = quad_of(*f, need(v, "at1"));
    auto replay = [&](const Quadruple& q, const CodePoint& x) {
      long j = -q.r.floor_log2();
      auto fresh = f->localized(q.a, j);
      return q.a == x && Rational::pow2(-j) == q.r && fresh && same_quad(*fresh, q);
    };
    r.expect(replay(q0, retained[i].first) && replay(q1, retained[i].second),
             "quadruples at k = " + std::to_string(k) + " do not replay");
    Rational gap = (q0.b[0] - q1.b[0]).abs() - q0.s - q1.s;
    r.expect(gap == rat(need(v, "gapLower"), "gapLower") && gap >= Rational(1) - tol,
             "gap at k = " + std::to_string(k));
  }
}

// ---------------------------------------------------------------------------
// modulus, mincompact

JobResult job_modulus(const Json& p, Flags& flags) {
  SpacePtr space = space_from(p);
  FunctionPtr f = function_from(space, need(p, "function"));
  Rational eps = flags.required("eps");
  std::size_t samples = flags.count("samples", 1000);
  std::uint64_t seed = flags.count("seed", 0);
  auto level = static_cast<unsigned>(flags.count("level", 24));
  ModulusResult m = modulus_uc(*f, nets_for(space, level), eps, samples, seed);
  Json balls = Json::array();
  for (std::size_t i = 0; i < m.covering.members(); ++i) {
    Ball b = *m.covering.member(i).ball(0);
    auto quad = f->localized(b.center, static_cast<long>(m.level) - 1);
    balls.push_back(quad_json(*f, *quad));
  }
  JobResult out;
  out.report["result"] = {{"delta", m.delta.str()},
                          {"level", m.level},
                          {"balls", balls},
                          {"certificate", certificate_json(*space, m.certificate)},
                          {"pairsChecked", m.pairs_checked},
                          {"violations", m.violations}};
  if (m.violations > 0) {
    out.exit_code = kExitFailure;
    out.report["status"] = "failure";
  }
  out.summary = "delta = " + m.delta.str() + " for eps = " + eps.str() + "; " +
                std::to_string(m.violations) + " violations in " +
                std::to_string(m.pairs_checked) + " sampled pairs";
  return out;
}

void check_modulus(const Json& rep, Replay& r) {
  const Json& input = need(rep, "input");
  SpacePtr space = space_from(input);
  FunctionPtr f = function_from(space, need(input, "function"));
  Flags flags(rep.value("flags", Json::object()));
  Rational eps = flags.required("eps");
  const Json& res = need(rep, "result");
  auto level = static_cast<long>(parse_count(need(res, "level"), "level"));
  std::vector<Ball> balls;
  for (const Json& bj : need(res, "balls")) {
    Quadruple q = quad_of(*f, bj);
    auto fresh = f->localized(q.a, level - 1);
    r.expect(fresh && same_quad(*fresh, q) && q.s < eps / Rational(2),
             "pullback ball at " + bj.at("a").dump());
    balls.push_back({q.a, q.r});
  }
  const Json& cert = need(res, "certificate");
  replay_certificate(*space, balls, cert, r);
  r.expect(rat(need(res, "delta"), "delta") == rat(need(cert, "qLower"), "qLower"),
           "delta differs from the certified Lebesgue number");
}

JobResult job_mincompact(const Json& p, Flags& flags) {
  SpacePtr space = space_from(p);
  FunctionPtr f = function_from(space, need(p, "function"));
  Rational eps = flags.rational("eps", Rational(1, 1000));
  auto level = static_cast<unsigned>(flags.count("level", 24));
  MinResult m = min_on_compact(*f, nets_for(space, level), eps);
  JobResult out;
  out.report["result"] = {{"lower", m.lower.str()}, {"upper", m.upper.str()},
                          {"level", m.level},       {"cells", m.cells},
                          {"argmin", lit(*space, m.argmin)}};
  out.summary = "min in [" + m.lower.str() + ", " + m.upper.str() + "] at level " +
                std::to_string(m.level);
  return out;
}

void check_mincompact(const Json& rep, Replay& r) {
  const Json& input = need(rep, "input");
  SpacePtr space = space_from(input);
  FunctionPtr f = function_from(space, need(input, "function"));
  Flags flags(rep.value("flags", Json::object()));
  Rational eps = flags.rational("eps", Rational(1, 1000));
  const Json& res = need(rep, "result");
  Rational lower = rat(need(res, "lower"), "lower"), upper = rat(need(res, "upper"), "upper");
  auto level = static_cast<unsigned>(parse_count(need(res, "level"), "level"));
  r.expect(upper - lower <= eps, "bracket wider than eps");
  for (const CodePoint& x : space->net(level)) {
    auto l = min_cell_lower(*f, x, level);
    r.expect(l && *l >= lower, "cell " + lit(*space, x).dump() + " undercuts the lower bound");
  }
  CodePoint arg = point_of(*space, need(res, "argmin"));
  auto fine = f->localized(arg, static_cast<long>(level) + 10);
  r.expect(fine && fine->b[0] + fine->s == upper, "upper bound does not replay");
}

// ---------------------------------------------------------------------------
// embed, treecover

BallScheme job_scheme(SpacePtr space, const Json& p, Flags& flags, unsigned def) {
  auto depth = static_cast<unsigned>(flags.count("depth", def));
  auto oracle = space->split_oracle();
  if (!oracle) throw OperationError("OracleFailure", space->name() + " has no split oracle");
  std::optional<CodePoint> root;
  if (p.contains("root")) root = point_of(*space, p.at("root"));
  return build_scheme(space, *oracle, depth, root);
}

JobResult job_embed(const Json& p, Flags& flags) {
  SpacePtr space = space_from(p);
  BallScheme scheme = job_scheme(space, p, flags, 6);
  SchemeCheck c = check_scheme(scheme);
  auto opt = [](const std::optional<std::string>& w) { return w ? Json(*w) : Json(nullptr); };
  JobResult out;
  out.report["result"] = {
      {"depth", scheme.depth()},
      {"scheme", scheme.to_json()},
      {"violations", {{"nesting", opt(c.nesting)}, {"disjoint", opt(c.disjoint)}, {"radius", opt(c.radius)}}}};
  if (!c.ok()) {
    out.exit_code = kExitFailure;
    out.report["status"] = "failure";
  }
  out.summary = "scheme of depth " + std::to_string(scheme.depth()) + " with " +
                std::to_string(scheme.entries().size()) + " balls; invariants " +
                (c.ok() ? "certified" : "violated");
  return out;
}

void check_embed(const Json& rep, Replay& r) {
  SpacePtr space = space_from(need(rep, "input"));
  const Json& res = need(rep, "result");
  auto depth = static_cast<unsigned>(parse_count(need(res, "depth"), "depth"));
  const Json& scheme = need(res, "scheme");
  auto entry = [&](const std::string& w) -> std::optional<SchemeEntry> {
    if (!scheme.contains(w)) return std::nullopt;
    const Json& e = scheme.at(w);
    return SchemeEntry{point_of(*space, need(e, "a")), positive(need(e, "q"), "q")};
  };
  std::size_t total = (std::size_t{2} << depth) - 1;
  r.expect(scheme.size() == total, "scheme has the wrong number of words");
  for (std::size_t i = 0; i < total; ++i) {
    std::string w = BallScheme::word_of(i);
    auto e = entry(w);
    if (!e) {
      r.expect(false, "missing word \"" + w + "\"");
      continue;
    }
    r.expect(e->q <= Rational::pow2(-static_cast<long>(w.size()) - 1), "radius bound at \"" + w + "\"");
    if (w.size() == depth) continue;
    auto c0 = entry(w + "0"), c1 = entry(w + "1");
    if (!c0 || !c1) continue;
    r.expect(less(*space, e->a, c0->a, e->q - c0->q),
             "nesting at \"" + w + "0\"");
    r.expect(less(*space, e->a, c1->a, e->q - c1->q),
             "nesting at \"" + w + "1\"");
    r.expect(at_least(*space, c0->a, c1->a, c0->q + c1->q), "disjointness at \"" + w + "\"");
  }
}

std::set<std::string> tree_of(const Json& p) {
  std::set<std::string> t;
  for (const Json& w : need(p, "tree")) {
    if (!w.is_string()) throw SpecError("tree words are strings over {0,1}");
    t.insert(w.get<std::string>());
  }
  return t;
}

JobResult job_treecover(const Json& p, Flags& flags) {
  SpacePtr space = space_from(p);
  BallScheme scheme = job_scheme(space, p, flags, 10);
  TreeSubcover t = tree_covering_subcover(scheme, tree_of(p));
  Json balls = Json::array();
  for (const std::string& w : t.words)
    balls.push_back({{"word", w}, {"a", lit(*space, scheme.at(w).a)}, {"q", scheme.at(w).q.str()}});
  JobResult out;
  out.report["result"] = {{"complement", true}, {"balls", balls}, {"anchorsChecked", t.anchors_checked}};
  out.summary = "subcover: U plus " + std::to_string(t.words.size()) + " scheme balls; " +
                std::to_string(t.anchors_checked) + " anchors checked";
  return out;
}

void check_treecover(const Json& rep, Replay& r) {
  const Json& input = need(rep, "input");
  SpacePtr space = space_from(input);
  Flags flags(rep.value("flags", Json::object()));
  BallScheme scheme = job_scheme(space, input, flags, 10);
  std::set<std::string> tree = tree_of(input);
  std::set<std::string> words;
  for (const Json& b : need(need(rep, "result"), "balls")) {
    std::string w = need(b, "word").get<std::string>();
    words.insert(w);
    r.expect(!tree.count(w) && (w.empty() || tree.count(w.substr(0, w.size() - 1))) &&
                 w.size() <= scheme.depth(),
             "\"" + w + "\" is not a minimal word outside the tree");
    r.expect(w.size() <= scheme.depth() && point_of(*space, need(b, "a")) == scheme.at(w).a &&
                 rat(need(b, "q"), "q") == scheme.at(w).q,
             "ball of \"" + w + "\" differs from the scheme");
  }
  const auto& e = scheme.entries();
  for (std::size_t i = (std::size_t{1} << scheme.depth()) - 1; i < e.size(); ++i) {
    std::string w = BallScheme::word_of(i);
    std::size_t len = 0;
    while (len < w.size() && tree.count(w.substr(0, len))) ++len;
    std::string exit = w.substr(0, len);
    r.expect(words.count(exit) && less(*space, scheme.at(exit).a, e[i].a, scheme.at(exit).q),
             "anchor \"" + w + "\" is not covered");
  }
}

// ---------------------------------------------------------------------------
// one-sided distances

JobResult job_distance(const Json& p, Flags& flags, bool lower) {
  SpacePtr space = space_from(p);
  Point x = Point::constant(point_of(*space, need(p, "point")));
  std::size_t depth = flags.count("depth", 10000);
  auto k = static_cast<unsigned>(flags.count("precision", 64));
  Approx a = lower ? dist_lower_complement(*space, x, open_set_from(space, need(p, "open")), depth, k)
                   : dist_upper_sepclosed(*space, x, sepclosed_from(space, need(p, "sepclosed")),
                                          depth, k);
  JobResult out;
  out.report["result"] = {{"value", a.value.str()}, {"error", a.error.str()}};
  out.summary = std::string(lower ? "lower" : "upper") + " bound " + a.value.str() + " (~" +
                std::to_string(a.value.to_double()) + ") at depth " + std::to_string(depth);
  return out;
}

void check_distance(const Json& rep, Replay& r, bool lower) {
  const Json& input = need(rep, "input");
  Flags flags(rep.value("flags", Json::object()));
  JobResult again = job_distance(input, flags, lower);
  r.expect(again.report["result"] == need(rep, "result"), "distance bound does not replay");
}

JobResult dispatch(const std::string& command, const Json& p, Flags& flags) {
  if (command == "lebesgue") return job_lebesgue(p, flags);
  if (command == "verify") return job_verify(p, flags);
  if (command == "subcover") return job_subcover(p, flags);
  if (command == "witness") return job_witness(p, flags);
  if (command == "pairs") return job_pairs(p, flags);
  if (command == "modulus") return job_modulus(p, flags);
  if (command == "embed") return job_embed(p, flags);
  if (command == "treecover") return job_treecover(p, flags);
  if (command == "mincompact") return job_mincompact(p, flags);
  if (command == "distlower") return job_distance(p, flags, true);
  if (command == "distupper") return job_distance(p, flags, false);
  throw SpecError("unknown command \"" + command + "\"");
}

}  // namespace

// ---------------------------------------------------------------------------

SpacePtr space_from(const Json& payload) {
  if (!payload.is_object()) throw SpecError("payload must be a JSON object");
  return catalog(payload);
}

Covering covering_from(SpacePtr space, const Json& p) {
  if (p.contains("balls")) {
    std::vector<Ball> balls;
    for (const Json& b : p.at("balls")) balls.push_back(ball_of(*space, b));
    if (balls.empty()) throw SpecError("covering has no balls");
    return Covering::of_balls(space, std::move(balls));
  }
  if (!p.contains("family")) throw SpecError("payload needs \"balls\" or \"family\"");
  const std::string family = p.at("family").get<std::string>();
  auto count = [&](const char* key, std::size_t def) {
    return p.contains(key) ? parse_count(p.at(key), key) : def;
  };
  if (family == "unit_balls") return unit_balls(space, count("horizon", 1024));
  if (family == "staggered") return staggered_halfline(space, count("horizon", 16));
  if (family == "half_open")
    return half_open_shrink(space, count("components", 8), count("balls_per_member", 48));
  throw SpecError("unknown covering family \"" + family + "\"");
}

FunctionPtr function_from(SpacePtr domain, const Json& j) {
  if (!j.is_object()) throw SpecError("function spec must be an object, got " + j.dump());
  const std::string op = need(j, "op").get<std::string>();
  if (op == "const") return make_const(domain, rat(need(j, "c"), "const c"));
  if (op == "dist_to") return make_dist_to(domain, point_of(*domain, need(j, "a")));
  if (op == "tent")
    return make_tent(domain, point_of(*domain, need(j, "a")), positive(need(j, "r"), "tent r"));
  if (op == "add" || op == "max" || op == "min") {
    Combine c = op == "add" ? Combine::Add : op == "max" ? Combine::Max : Combine::Min;
    if (j.contains("args")) {
      const Json& args = j.at("args");
      if (!args.is_array() || args.empty()) throw SpecError(op + ": args must be a nonempty list");
      FunctionPtr acc = function_from(domain, args[0]);
      for (std::size_t i = 1; i < args.size(); ++i)
        acc = make_combine(c, acc, function_from(domain, args[i]));
      return acc;
    }
    return make_combine(c, function_from(domain, need(j, "f")), function_from(domain, need(j, "g")));
  }
  if (op == "scale") return make_scale(rat(need(j, "c"), "scale c"), function_from(domain, need(j, "f")));
  if (op == "compose") {
    FunctionPtr f = function_from(domain, need(j, "f"));
    return make_compose(function_from(f->codomain(), need(j, "g")), f);
  }
  if (op == "embed") {
    if (domain->name() != "cantor") throw SpecError("embed: domain must be cantor");
    SpacePtr target = catalog(need(j, "space"));
    auto depth = static_cast<unsigned>(parse_count(need(j, "depth"), "depth"));
    return make_embedding(build_scheme(target, depth));
  }
  if (op == "table") {
    SpacePtr cod = j.contains("codomain") ? catalog(j.at("codomain")) : real_line();
    std::vector<Quadruple> quads;
    for (const Json& q : need(j, "quads"))
      quads.push_back({point_of(*domain, need(q, "a")), positive(need(q, "r"), "r"),
                       point_of(*cod, need(q, "b")), positive(need(q, "s"), "s")});
    return make_table(domain, cod, std::move(quads));
  }
  if (op == "urysohn") {
    auto set = [&](const char* key) {
      std::vector<CodePoint> pts;
      for (const Json& x : need(j, key)) pts.push_back(point_of(*domain, x));
      if (pts.empty()) throw SpecError(std::string("urysohn: ") + key + " is empty");
      return LocatedSet::finite(domain, std::move(pts));
    };
    return make_urysohn(domain, set("c0"), set("c1"), positive(need(j, "separation"), "separation"));
  }
  throw SpecError("unknown function op \"" + op + "\"");
}

OpenSetCode open_set_from(SpacePtr space, const Json& j) {
  std::vector<Ball> balls;
  if (j.contains("balls"))
    for (const Json& b : j.at("balls")) balls.push_back(ball_of(*space, b));
  if (!j.contains("rays")) return OpenSetCode::of_balls(std::move(balls));
  // Rays (-inf, below) and (above, inf) as B(below - k, k), B(above + k, k), k >= 1, interleaved.
  const Json& rays = j.at("rays");
  std::optional<Rational> below, above;
  if (rays.contains("below")) below = rat(rays.at("below"), "below");
  if (rays.contains("above")) above = rat(rays.at("above"), "above");
  if (!below && !above) throw SpecError("rays need \"below\" or \"above\"");
  auto shared = std::make_shared<std::vector<Ball>>(std::move(balls));
  return OpenSetCode::enumerate([shared, below, above](std::size_t t) -> std::optional<Ball> {
    if (t < shared->size()) return (*shared)[t];
    std::size_t u = t - shared->size();
    std::size_t per = below && above ? 2 : 1;
    Rational k(static_cast<long>(u / per) + 1);
    bool left = below && (!above || u % 2 == 0);
    if (left) return Ball{CodePoint::of(*below - k), k};
    return Ball{CodePoint::of(*above + k), k};
  });
}

SepClosedCode sepclosed_from(SpacePtr space, const Json& j) {
  auto explicit_points = std::make_shared<std::vector<CodePoint>>();
  if (j.contains("generators"))
    for (const Json& x : j.at("generators")) explicit_points->push_back(point_of(*space, x));
  if (!j.contains("dyadic_grid")) {
    if (explicit_points->empty()) throw SpecError("sepclosed set has no generators");
    std::size_t n = explicit_points->size();
    return {[explicit_points](std::size_t i) { return Point::constant((*explicit_points)[i]); }, n};
  }
  const Json& g = j.at("dyadic_grid");
  Rational lo = rat(need(g, "lo"), "lo"), hi = rat(need(g, "hi"), "hi");
  if (!(lo < hi)) throw SpecError("dyadic_grid needs lo < hi");
  // lo, hi, then odd multiples of (hi - lo) 2^-m for m = 1, 2, ...
  return {[explicit_points, lo, hi](std::size_t i) {
            if (i < explicit_points->size()) return Point::constant((*explicit_points)[i]);
            std::size_t t = i - explicit_points->size();
            if (t == 0) return Point::constant(CodePoint::of(lo));
            if (t == 1) return Point::constant(CodePoint::of(hi));
            std::size_t u = t - 1;
            long m = 0;
            while ((std::size_t{1} << (m + 1)) <= u) ++m;
            std::size_t j = 2 * (u - (std::size_t{1} << m)) + 1;
            Rational v = lo + (hi - lo) * Rational(static_cast<long>(j)) * Rational::pow2(-(m + 1));
            return Point::constant(CodePoint::of(v));
          },
          std::nullopt};
}

JobResult run_job(const std::string& command, const Json& payload, const Json& flags_json) {
  if (command == "check") return check_report(payload);
  Flags flags(flags_json);
  JobResult out;
  try {
    out = dispatch(command, payload, flags);
    if (!out.report.contains("status")) out.report["status"] = "certified";
  } catch (const OperationError& e) {
    out = JobResult{};
    out.exit_code = kExitFailure;
    out.report["status"] = "failure";
    out.report["error"] = {{"kind", e.kind()}, {"message", e.what()}};
    out.summary = e.kind() + ": " + e.what();
  }
  out.report["command"] = command;
  out.report["input"] = payload;
  out.report["flags"] = flags.used();
  return out;
}

JobResult check_report(const Json& report) {
  if (!report.is_object()) throw SpecError("report must be a JSON object");
  const std::string command = need(report, "command").get<std::string>();
  Replay r;
  JobResult out;
  std::string status = report.value("status", "");
  if (status == "failure" && report.contains("error")) {
    // A failed run carries no certificate.
  } else if (command == "lebesgue") {
    check_lebesgue(report, r);
  } else if (command == "verify") {
    check_verify(report, r);
  } else if (command == "subcover") {
    check_subcover(report, r);
  } else if (command == "witness") {
    check_witness_report(report, r);
  } else if (command == "pairs") {
    check_pairs(report, r);
  } else if (command == "modulus") {
    check_modulus(report, r);
  } else if (command == "embed") {
    check_embed(report, r);
  } else if (command == "treecover") {
    check_treecover(report, r);
  } else if (command == "mincompact") {
    check_mincompact(report, r);
  } else if (command == "distlower" || command == "distupper") {
    check_distance(report, r, command == "distlower");
  } else {
    throw SpecError("cannot check command \"" + command + "\"");
  }
  bool ok = r.failures.empty();
  out.exit_code = ok ? kExitOk : kExitFailure;
  out.report = {{"command", "check"},
                {"checked", command},
                {"status", ok ? "certified" : "failure"},
                {"result", {{"certificates", r.checked}, {"failures", r.failures}}}};
  out.summary = "check " + command + ": " + std::to_string(r.checked) + " certificates, " +
                std::to_string(r.failures.size()) + " failures";
  return out;
}

}  // namespace csms
