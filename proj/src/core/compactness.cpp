// Copyright 2026 The csms Authors
// SPDX-License-Identifier: Apache-2.0

#include "core/compactness.hpp"

#include <algorithm>
#include <set>

namespace csms {

std::vector<CodePoint> NetFamily::level(unsigned n) const {
  if (n > max_level)
    throw OperationError("LevelExceeded", "net level " + std::to_string(n) + " above maximum " +
                                              std::to_string(max_level));
  return space->net(n);
}

NetFamily nets_for(SpacePtr space, unsigned max_level) {
  if (!space->effectively_compact())
    throw OperationError("NotEffectivelyCompact", space->name() + " has no net construction");
  return NetFamily{std::move(space), max_level};
}

std::vector<unsigned> doubling_levels(unsigned start, unsigned max_level) {
  std::vector<unsigned> out;
  for (unsigned n = start; n < max_level; n = n == 0 ? 1 : 2 * n) out.push_back(n);
  out.push_back(max_level);
  return out;
}

std::vector<CodePoint> eps_net(const NetFamily& nets, const Rational& eps) {
  if (eps.sign() <= 0) throw std::invalid_argument("eps_net: eps must be positive");
  long n = std::max(0L, 1 - eps.floor_log2());
  if (n > static_cast<long>(nets.max_level))
    throw OperationError("LevelExceeded", "eps_net needs level " + std::to_string(n));
  Rational slack = eps - Rational::pow2(-n);
  std::vector<CodePoint> kept;
  for (const CodePoint& x : nets.level(static_cast<unsigned>(n))) {
    bool covered = false;
    for (const CodePoint& k : kept) {
      if (auto d = nets.space->exact_distance(x, k)) {
        covered = *d <= slack;
      } else {
        covered = distance_bracket(*nets.space, x, k, 64).hi <= slack;
      }
      if (covered) break;
    }
    if (!covered) kept.push_back(x);
  }
  return kept;
}

std::optional<Rational> min_cell_lower(const FunctionCode& f, const CodePoint& x, unsigned level) {
  auto q = f.localized(x, static_cast<long>(level) - 1);
  if (!q) return std::nullopt;
  return q->b[0] - q->s;
}

MinResult min_on_compact(const FunctionCode& f, const NetFamily& nets, const Rational& eps) {
  if (eps.sign() <= 0) throw std::invalid_argument("min_on_compact: eps must be positive");
  if (f.codomain()->name() != "reals") throw SpecError("min_on_compact needs a real-valued function");
  MinResult best;
  for (unsigned n : doubling_levels(1, nets.max_level)) {
    std::vector<CodePoint> cells = nets.level(n);
    std::optional<Rational> lo, hi;
    CodePoint arg;
    for (const CodePoint& x : cells) {
      auto l = min_cell_lower(f, x, n);
      auto fine = f.localized(x, static_cast<long>(n) + 10);
      if (!l || !fine)
        throw OperationError("DepthExhausted", "no quadruple for a net cell at level " + std::to_string(n));
      if (!lo || *l < *lo) lo = *l;
      Rational u = fine->b[0] + fine->s;
      if (!hi || u < *hi) {
        hi = u;
        arg = x;
      }
    }
    best = {*lo, *hi, n, cells.size(), arg};
    if (best.upper - best.lower <= eps) return best;
  }
  throw OperationError("DepthExhausted", "min_on_compact: bracket wider than eps at level " +
                                             std::to_string(nets.max_level));
}

HeineBorelResult heine_borel_subcover(const Covering& covering, const NetFamily& nets,
                                      std::size_t budget) {
  const Space& s = *covering.space;
  std::size_t members = std::min(covering.members(), budget);
  std::vector<OpenSetCode> opens;
  for (std::size_t m = 0; m < members; ++m) opens.push_back(covering.member(m));
  HeineBorelResult out;
  for (unsigned n : doubling_levels(0, nets.max_level)) {
    Rational rho = Rational::pow2(-static_cast<long>(n));
    out = HeineBorelResult{};
    out.level = n;
    std::set<std::size_t> used;
    for (const CodePoint& x : nets.level(n)) {
      std::optional<CellCover> found;
      for (std::size_t m = 0; m < members && !found; ++m) {
        const OpenSetCode& u = opens[m];
        std::size_t h = u.horizon(budget);
        for (std::size_t i = 0; i < h; ++i) {
          auto ball = u.ball(i);
          if (!ball) continue;
          if (distance_less(s, x, ball->center, ball->radius - rho) == Certainty::Yes) {
            found = CellCover{x, m, i};
            break;
          }
        }
      }
      if (!found) {
        out.failed_cell = x;
        break;
      }
      used.insert(found->member);
      out.cells.push_back(*found);
    }
    if (!out.failed_cell) {
      out.found = true;
      out.indices.assign(used.begin(), used.end());
      return out;
    }
  }
  return out;
}

}  // namespace csms
