// Copyright 2026 The csms Authors
// SPDX-License-Identifier: Apache-2.0

// Prints one PASS/FAIL line per acceptance criterion; exits 1 on any FAIL.

#include <chrono>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "core/cantor_embed.hpp"
#include "core/families.hpp"
#include "core/jobs.hpp"

using namespace csms;

namespace {

Rational r(long n, long d = 1) { return Rational(n, d); }
Rational rat(const Json& j) { return Rational::parse(j.get<std::string>()); }

Json fixture(const std::string& name) {
  std::ifstream in(std::string(CSMS_FIXTURES) + "/" + name + ".json");
  return Json::parse(in);
}

struct Recorded {
  std::string command;
  Json payload, flags;
  std::string bytes;
};
std::vector<Recorded> g_runs;

JobResult run(const std::string& command, const Json& payload, const Json& flags = Json::object()) {
  JobResult j = run_job(command, payload, flags);
  g_runs.push_back({command, payload, flags, j.report.dump(2)});
  return j;
}

int g_failures = 0;

void report(int n, bool pass, const std::string& detail) {
  if (!pass) ++g_failures;
  std::cout << (pass ? "PASS" : "FAIL") << " criterion " << n << ": " << detail << std::endl;
}

// Runs one criterion body; an exception is a FAIL with its message.
void criterion(int n, const std::function<bool(std::ostringstream&)>& body) {
  std::ostringstream detail;
  bool pass = false;
  try {
    pass = body(detail);
  } catch (const std::exception& e) {
    detail << " exception: " << e.what();
  }
  report(n, pass, detail.str());
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Word metric: 2^-i at the first differing digit.
Rational word_distance(const CodePoint& a, const CodePoint& b) {
  for (std::size_t i = 0; i < std::max(a.size(), b.size()); ++i) {
    Rational x = i < a.size() ? a[i] : r(0), y = i < b.size() ? b[i] : r(0);
    if (x != y) return Rational::pow2(-static_cast<long>(i));
  }
  return r(0);
}

Rational line_distance(const CodePoint& a, const CodePoint& b) { return (a[0] - b[0]).abs(); }

std::vector<std::string> words_of_length(unsigned n) {
  std::vector<std::string> out;
  for (std::size_t v = 0; v < (std::size_t{1} << n); ++v) {
    std::string w;
    for (unsigned i = 0; i < n; ++i) w += ((v >> (n - 1 - i)) & 1U) ? '1' : '0';
    out.push_back(w);
  }
  return out;
}

Json g_unit_report, g_cantor_report;

// ---------------------------------------------------------------------------

bool criterion1(std::ostringstream& d) {
  auto t0 = std::chrono::steady_clock::now();
  JobResult unit = run("lebesgue", fixture("two_balls"));
  double secs = seconds_since(t0);
  g_unit_report = unit.report;
  // Grid oracle: min over 10^4 + 1 points of the max of the two tents.
  Rational oracle = r(1000);
  for (long i = 0; i <= 10000; ++i) {
    Rational x = r(i, 10000);
    oracle = min(oracle, max(r(0), max(r(3, 5) - x, r(3, 5) - (r(1) - x))));
  }
  Rational lo = rat(unit.report["result"]["qLower"]), hi = rat(unit.report["result"]["qUpper"]);
  Rational tol = r(1, 1000);
  bool ok_unit = unit.exit_code == kExitOk && (lo - oracle).abs() <= tol && (hi - oracle).abs() <= tol &&
                 lo <= oracle && oracle <= hi && secs < 60;

  JobResult cantor = run("lebesgue", fixture("cantor_halves"));
  g_cantor_report = cantor.report;
  auto space = catalog("cantor");
  std::vector<Ball> balls;
  const Json halves = fixture("cantor_halves");
  for (const Json& b : halves["balls"])
    balls.push_back({space->parse_literal(b["center"]), rat(b["radius"])});
  // Exhaustive depth-4 cylinders.
  Rational coracle = r(1000);
  for (const std::string& w : words_of_length(4)) {
    CodePoint x = space->parse_literal(w);
    Rational v = r(0);
    for (const Ball& b : balls) v = max(v, b.radius - word_distance(x, b.center));
    coracle = min(coracle, v);
  }
  Rational clo = rat(cantor.report["result"]["qLower"]), chi = rat(cantor.report["result"]["qUpper"]);
  bool ok_cantor = cantor.exit_code == kExitOk && clo <= coracle && coracle <= chi && coracle == r(1, 2);

  d << "unit [" << lo.str() << ", " << hi.str() << "] vs grid oracle " << oracle.str() << " in " << secs
    << " s; cantor [" << clo.str() << ", " << chi.str() << "] vs cylinder oracle " << coracle.str();
  return ok_unit && ok_cantor;
}

// Exact replay of every cell with the test's own metric, plus the library check.
bool replay_cells(const Json& rep, const std::function<Rational(const CodePoint&, const CodePoint&)>& dist,
                  std::size_t& replayed, std::size_t& total) {
  SpacePtr space = catalog(rep["input"]["space"].get<std::string>());
  std::vector<Ball> balls;
  for (const Json& b : rep["input"]["balls"]) balls.push_back({space->parse_literal(b["center"]), rat(b["radius"])});
  const Json& res = rep["result"];
  Rational q = rat(res["qLower"]), cell = rat(res["cellRadius"]);
  std::set<CodePoint> centers;
  bool ok = true;
  for (const Json& c : res["cells"]) {
    ++total;
    CodePoint x = space->parse_literal(c["center"]);
    const Ball& b = balls.at(c["ball"].get<std::size_t>());
    Rational slack = b.radius - dist(x, b.center);
    if (slack >= rat(c["slack"]) && rat(c["slack"]) - cell >= q) ++replayed;
    else ok = false;
    centers.insert(x);
  }
  // The cells are the whole net at the reported level.
  auto net = nets_for(space, 30).level(res["level"].get<unsigned>());
  ok = ok && centers == std::set<CodePoint>(net.begin(), net.end()) && q.sign() > 0;
  return ok;
}

bool criterion2(std::ostringstream& d) {
  std::size_t replayed = 0, total = 0;
  bool ok = replay_cells(g_unit_report, line_distance, replayed, total) &&
            replay_cells(g_cantor_report, word_distance, replayed, total);
  JobResult a = check_report(g_unit_report), b = check_report(g_cantor_report);
  bool checks = a.exit_code == kExitOk && b.exit_code == kExitOk && a.report["result"]["failures"].empty() &&
                b.report["result"]["failures"].empty();
  d << replayed << "/" << total << " cell certificates replayed exactly; check: "
    << a.report["result"]["certificates"] << " + " << b.report["result"]["certificates"] << " certificates, "
    << a.report["result"]["failures"].size() + b.report["result"]["failures"].size() << " failures";
  return ok && checks && replayed == total && total > 0;
}

bool criterion3(std::ostringstream& d) {
  Json payload = fixture("two_balls");
  JobResult j = run("subcover", payload, Json{{"q", "1/10"}});
  const Json& res = j.report["result"];
  std::size_t k = res["k"].get<std::size_t>();
  std::size_t members = std::min<std::size_t>(k, payload["balls"].size());
  // Oracle: each sample lies in a ball among the first k members.
  std::size_t covered = 0;
  for (const Json& s : res["cover"]) {
    Rational x = rat(s["x"]);
    bool in = false;
    for (std::size_t m = 0; m < members; ++m) {
      const Json& b = payload["balls"][m];
      in = in || (x - rat(b["center"])).abs() < rat(b["radius"]);
    }
    covered += in;
  }
  std::size_t samples = res["cover"].size();
  d << "k=" << k << " (2^-k < 1/10 <= 2^-k+1), " << covered << "/" << samples
    << " seeded samples inside the first " << members << " members";
  return j.exit_code == kExitOk && k == 4 && samples == 1000 && covered == samples && res["uncovered"].is_null();
}

bool criterion4(std::ostringstream& d) {
  Json payload = fixture("naturals_unit_balls");
  JobResult v = run("verify", payload, Json{{"q", "1"}});
  std::size_t good = 0;
  for (const Json& s : v.report["result"]["certified"]) {
    // Own ball B(n, 1): d = 0 and 0 + 1 <= 1.
    if (!s["member"].is_null() && s["member"].get<long>() == s["x"].get<long>()) ++good;
  }
  auto t0 = std::chrono::steady_clock::now();
  JobResult w = run("witness", payload, Json{{"eps", "1/2"}});
  d << good << "/" << v.report["result"]["certified"].size() << " samples certified at q=1; witness at eps=1/2: "
    << w.report["status"] << " after " << w.report["result"]["scanned"] << " candidates (" << seconds_since(t0)
    << " s)";
  return v.exit_code == kExitOk && good == 1000 && v.report["result"]["counter"].is_null() &&
         w.report["status"] == "not_found";
}

bool in_staggered(long n, const Rational& x) {
  return r(n) - Rational::pow2(-n) < x && x < r(n + 1) + Rational::pow2(-n - 1);
}

bool criterion5(std::ostringstream& d) {
  Json stag = fixture("staggered_halfline");
  bool ok = true;
  d << "halfline witnesses a =";
  for (long m = 0; m <= 8; ++m) {
    Rational eps = Rational::pow2(-m);
    JobResult j = run("witness", stag, Json{{"eps", eps.str()}});
    if (j.report["status"] != "certified") {
      ok = false;
      d << " none@" << m;
      continue;
    }
    const Json& res = j.report["result"];
    Rational a = rat(res["witness"]);
    bool replay = res["escapes"].size() == stag["horizon"].get<std::size_t>();
    for (const Json& e : res["escapes"]) {
      Rational b = rat(e["b"]);
      replay = replay && (b - a).abs() < eps && !in_staggered(e["member"].get<long>(), b);
    }
    replay = replay && check_report(j.report).exit_code == kExitOk;
    ok = ok && replay;
    d << " " << a.str() << (replay ? "" : "(bad replay)");
  }

  Json shrink = fixture("shrink_half_open");
  auto t0 = std::chrono::steady_clock::now();
  JobResult nf = run("witness", shrink, Json{{"eps", "1/4"}, {"budget", 10000}});
  double secs = seconds_since(t0);
  bool not_found = nf.report["status"] == "not_found" && nf.report["result"]["scanned"] == 10000;

  // The real endpoint L_7 escapes every member: member 14 misses L_7 itself,
  // member 15 misses R_7, and the other components are far away.
  SpacePtr space = space_from(shrink);
  Covering cov = covering_from(space, shrink);
  const long n = 7;
  Point left = shrink_endpoint(space, n, true), right = shrink_endpoint(space, n, false);
  PointWitnessCheck manual = verify_point_witness(
      cov, left, r(1, 4), [&](std::size_t m) { return m == static_cast<std::size_t>(2 * n + 1) ? right : left; });
  d << "; shrink_intervals: " << nf.report["status"] << " at budget 10^4 (" << secs
    << " s), endpoint witness L_7 " << (manual.ok ? "verified" : "rejected");
  return ok && not_found && manual.ok;
}

bool check_schedule(const Json& rep, unsigned levels,
                    const std::function<Rational(const CodePoint&, const CodePoint&)>& dist,
                    const SpacePtr& space, std::ostringstream& d) {
  const Json& res = rep["result"];
  bool ok = res["schedule"].size() == levels + 1;
  Rational worst = r(1);
  for (const Json& v : res["schedule"]) {
    unsigned k = v["k"].get<unsigned>();
    if (v["pair"].is_null()) {
      ok = false;
      continue;
    }
    const Json& p = res["pairs"][v["pair"].get<std::size_t>()];
    Rational dd = dist(space->parse_literal(p["b0"]), space->parse_literal(p["b1"]));
    Rational gap = rat(v["gapLower"]);
    worst = min(worst, gap);
    ok = ok && dd < Rational::pow2(-static_cast<long>(k)) && rat(v["distanceUpper"]) < Rational::pow2(-static_cast<long>(k)) &&
         gap >= r(999, 1000);
  }
  JobResult chk = check_report(rep);
  ok = ok && chk.exit_code == kExitOk;
  d << res["schedule"].size() << " scales, min gap " << worst.str() << ", check "
    << chk.report["result"]["certificates"] << " certificates";
  return ok;
}

bool criterion6(std::ostringstream& d) {
  Json stag = fixture("staggered_halfline");
  JobResult h = run("pairs", stag, Json{{"level", 8}});
  d << "halfline M=8 thinned to " << h.report["result"]["thinned"].size() << " pairs: ";
  bool a = h.exit_code == kExitOk && check_schedule(h.report, 8, line_distance, space_from(stag), d);
  Json baire = fixture("baire_separated");
  JobResult b = run("pairs", baire);
  d << "; baire separated: ";
  bool c = b.exit_code == kExitOk && check_schedule(b.report, 20, word_distance, space_from(baire), d);
  return a && c;
}

bool criterion7(std::ostringstream& d) {
  struct Case {
    const char* name;
    std::function<Rational(const Rational&)> f;
  };
  std::vector<Case> cases = {
      {"dist_to_zero", [](const Rational& x) { return x.abs(); }},
      {"max_of_tents", [](const Rational& x) { return max(r(0), max(r(3, 5) - x, r(3, 5) - (r(1) - x))); }},
  };
  bool ok = true;
  std::mt19937_64 rng(2026);
  for (const Case& c : cases) {
    for (long e : {10L, 100L}) {
      Rational eps = r(1, e);
      JobResult j = run("modulus", fixture(c.name), Json{{"eps", eps.str()}});
      const Json& res = j.report["result"];
      Rational delta = rat(res["delta"]);
      // Independent sampled pairs with d(x, y) < delta, exact gaps.
      std::size_t bad = 0;
      for (int i = 0; i < 1000; ++i) {
        Rational x = r(static_cast<long>(rng() % (1U << 20)), 1L << 20);
        Rational y = x + delta * r(static_cast<long>(rng() % 2001) - 1000, 1001);
        y = max(r(0), min(r(1), y));
        if ((c.f(x) - c.f(y)).abs() >= eps) ++bad;
      }
      bool pass = j.exit_code == kExitOk && delta.sign() > 0 && res["violations"] == 0 &&
                  res["pairsChecked"] == 1000 && bad == 0 && check_report(j.report).exit_code == kExitOk;
      ok = ok && pass;
      d << c.name << "@" << eps.str() << " delta=" << delta.str() << " (" << bad << " oracle violations) ";
    }
  }
  return ok;
}

bool criterion8(std::ostringstream& d) {
  bool ok = true;
  for (const char* name : {"unit_interval", "cantor"}) {
    SpacePtr space = catalog(name);
    auto dist = std::string(name) == "cantor" ? word_distance : line_distance;
    JobResult j = run("embed", Json{{"space", name}}, Json{{"depth", 12}});
    BallScheme s = build_scheme(space, 12);
    // Exact replay of nesting, sibling disjointness and radius bounds.
    std::size_t failures = 0;
    for (unsigned len = 0; len <= 12; ++len)
      for (const std::string& w : words_of_length(len)) {
        const SchemeEntry& e = s.at(w);
        if (!(e.q.sign() > 0 && e.q <= Rational::pow2(-static_cast<long>(len) - 1))) ++failures;
        if (len == 12) continue;
        const SchemeEntry& c0 = s.at(w + "0");
        const SchemeEntry& c1 = s.at(w + "1");
        if (!(dist(e.a, c0.a) + c0.q < e.q && dist(e.a, c1.a) + c1.q < e.q)) ++failures;
        if (!(dist(c0.a, c1.a) >= c0.q + c1.q)) ++failures;
      }
    // Lipschitz-1 on 10^4 pairs of words with random common prefixes.
    std::mt19937_64 rng(8);
    std::size_t lip = 0;
    for (int t = 0; t < 10000; ++t) {
      std::string x, y;
      unsigned common = static_cast<unsigned>(rng() % 13);
      for (unsigned i = 0; i < 12; ++i) {
        char c = (rng() & 1U) ? '1' : '0';
        x += c;
        y += i < common ? c : ((rng() & 1U) ? '1' : '0');
      }
      Rational dc = Rational::pow2(-12);
      for (unsigned i = 0; i < 12; ++i)
        if (x[i] != y[i]) {
          dc = Rational::pow2(-static_cast<long>(i));
          break;
        }
      if (dist(s.at(x).a, s.at(y).a) > dc) ++lip;
    }
    // complement_open: disjoint from every closed leaf ball.
    OpenSetCode u = complement_open(s, 256);
    std::size_t captured = 0, balls = 0;
    for (std::size_t i = 0; i < 256; ++i) {
      auto b = u.ball(i);
      if (!b) continue;
      ++balls;
      for (const std::string& w : words_of_length(12))
        if (dist(b->center, s.at(w).a) < b->radius + s.at(w).q) ++captured;
    }
    bool zero = true;
    if (std::string(name) == "unit_interval")
      zero = open_membership(*space, point_from_code(CodePoint::of(r(0))), u, 256, 64).yes;
    bool pass = j.exit_code == kExitOk && failures == 0 && lip == 0 && captured == 0 && balls > 0 && zero &&
                check_report(j.report).exit_code == kExitOk;
    ok = ok && pass;
    d << name << ": " << failures << " invariant failures, " << lip << " Lipschitz violations, " << balls
      << " complement balls, " << captured << " anchor captures" << (std::string(name) == "unit_interval" ? (zero ? ", 0 captured; " : ", 0 missed; ") : "");
  }
  return ok;
}

bool criterion9(std::ostringstream& d) {
  run("treecover", fixture("tree"));
  const unsigned depth = 10;
  BallScheme s = build_scheme(catalog("unit_interval"), depth);
  std::mt19937_64 rng(9);
  std::vector<std::set<std::string>> trees;
  trees.emplace_back();  // empty
  std::set<std::string> full;
  for (unsigned len = 0; len <= depth; ++len)
    for (const auto& w : words_of_length(len)) full.insert(w);
  trees.push_back(full);
  while (trees.size() < 100) {
    std::set<std::string> t = {""};
    unsigned keep = 30 + static_cast<unsigned>(rng() % 60);
    unsigned height = static_cast<unsigned>(rng() % (depth + 1));
    std::vector<std::string> frontier = {""};
    while (!frontier.empty()) {
      std::string w = frontier.back();
      frontier.pop_back();
      if (w.size() >= height) continue;
      for (char c : {'0', '1'})
        if (rng() % 100 < keep) {
          t.insert(w + c);
          frontier.push_back(w + c);
        }
    }
    trees.push_back(t);
  }
  std::size_t agree = 0, finite = 0, exhausted = 0;
  for (const auto& t : trees) {
    // Oracle: the exits of T are its missing children (the root when T is
    // empty); they are available iff no word of T reaches the scheme depth.
    bool reaches = false;
    std::set<std::string> exits;
    for (const auto& w : t) {
      reaches = reaches || w.size() >= depth;
      for (char c : {'0', '1'})
        if (!t.count(w + c)) exits.insert(w + c);
    }
    if (t.empty()) exits.insert("");
    bool match = false;
    try {
      TreeSubcover res = tree_covering_subcover(s, t);
      std::set<std::string> got(res.words.begin(), res.words.end());
      // Every depth-level word extends exactly one exit.
      bool partition = true;
      for (const auto& w : words_of_length(depth)) {
        int hits = 0;
        for (const auto& v : got) hits += w.compare(0, v.size(), v) == 0;
        partition = partition && hits == 1;
      }
      match = !reaches && got == exits && partition && res.anchors_checked == (std::size_t{1} << depth);
      ++finite;
    } catch (const OperationError& e) {
      match = reaches && e.kind() == "DepthExhausted";
      ++exhausted;
    }
    agree += match;
  }
  d << agree << "/" << trees.size() << " trees match the oracle (" << finite << " finite subcovers, " << exhausted
    << " DepthExhausted incl. the full tree)";
  return agree == trees.size();
}

Rational sandwich_exact(const Rational& x) {
  Rational to_interval = x < r(0) ? -x : (x > r(1) ? x - r(1) : r(0));
  return min(to_interval, (x - r(2)).abs());
}

bool criterion10(std::ostringstream& d) {
  Json lower = fixture("sandwich_lower"), upper = fixture("sandwich_upper");
  std::vector<Rational> points = {r(-5), r(-1, 3), r(0), r(1, 3), r(1), r(3, 2), r(7, 4), r(2), r(5, 2), r(9, 7)};
  bool ok = true;
  Rational worst = r(0);
  std::size_t checks = 0;
  for (const Rational& x : points) {
    Rational exact = sandwich_exact(x);
    for (long depth : {10L, 100L, 1000L, 10000L}) {
      lower["point"] = x.str();
      upper["point"] = x.str();
      Json flags{{"depth", depth}};
      JobResult lo = run("distlower", lower, flags), hi = run("distupper", upper, flags);
      Rational l = rat(lo.report["result"]["value"]) - rat(lo.report["result"]["error"]);
      Rational u = rat(hi.report["result"]["value"]) + rat(hi.report["result"]["error"]);
      ok = ok && l <= exact && exact <= u;
      ++checks;
      if (depth == 10000) {
        worst = max(worst, u - l);
        ok = ok && u - l < r(1, 1000);
      }
    }
  }
  d << checks << " (point, depth) checks of lower <= exact <= upper; worst gap at depth 10^4 " << worst.to_double();
  return ok;
}

bool criterion11(std::ostringstream& d) {
  std::vector<Recorded> first = g_runs;
  std::size_t same = 0;
  for (const Recorded& rec : first) {
    JobResult again = run_job(rec.command, rec.payload, rec.flags);
    same += again.report.dump(2) == rec.bytes;
  }
  d << same << "/" << first.size() << " reports byte-identical on rerun";
  return same == first.size() && !first.empty();
}

}  // namespace

int main() {
  criterion(1, criterion1);
  criterion(2, criterion2);
  criterion(3, criterion3);
  criterion(4, criterion4);
  criterion(5, criterion5);
  criterion(6, criterion6);
  criterion(7, criterion7);
  criterion(8, criterion8);
  criterion(9, criterion9);
  criterion(10, criterion10);
  criterion(11, criterion11);
  std::cout << (g_failures ? "acceptance: FAILED " : "acceptance: all criteria passed") ;
  if (g_failures) std::cout << g_failures;
  std::cout << std::endl;
  return g_failures ? 1 : 0;
}
