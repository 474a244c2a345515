// Copyright 2026 The csms Authors
// SPDX-License-Identifier: Apache-2.0

#include "core/cantor_embed.hpp"

#include <algorithm>

namespace csms {

namespace {

const unsigned kPrecision = 128;

Bracket bracket(const Space& s, const CodePoint& a, const CodePoint& b) {
  return distance_bracket(s, a, b, kPrecision);
}

std::string cantor_prefix(const CodePoint& w, std::size_t n) {
  std::string out(n, '0');
  for (std::size_t i = 0; i < n && i < w.size(); ++i)
    if (w[i].sign() != 0) out[i] = '1';
  return out;
}

}  // namespace

std::size_t BallScheme::index_of(const std::string& word) {
  std::size_t v = 0;
  for (char c : word) v = 2 * v + (c == '1' ? 1 : 0);
  return (std::size_t{1} << word.size()) - 1 + v;
}

std::string BallScheme::word_of(std::size_t index) {
  std::size_t len = 0;
  while ((std::size_t{1} << (len + 1)) - 1 <= index) ++len;
  std::size_t v = index - ((std::size_t{1} << len) - 1);
  std::string out(len, '0');
  for (std::size_t i = 0; i < len; ++i)
    if ((v >> (len - 1 - i)) & 1) out[i] = '1';
  return out;
}

const SchemeEntry& BallScheme::at(const std::string& word) const {
  if (word.size() > depth_)
    throw OperationError("DepthExceeded", "word of length " + std::to_string(word.size()) +
                                              " beyond scheme depth " + std::to_string(depth_));
  return entries_[index_of(word)];
}

Json BallScheme::to_json() const {
  Json out = Json::object();
  for (std::size_t i = 0; i < entries_.size(); ++i)
    out[word_of(i)] = {{"a", space_->literal(entries_[i].a)}, {"q", entries_[i].q.str()}};
  return out;
}

BallScheme build_scheme(SpacePtr space, const SplitOracle& oracle, unsigned depth,
                        std::optional<CodePoint> root) {
  if (depth > 20) throw SpecError("scheme depth above 20");
  const Space& s = *space;
  if (!root)
    root = s.name() == "unit_interval" ? CodePoint::of(Rational(1, 2)) : s.code_point(0);
  std::vector<SchemeEntry> entries((std::size_t{2} << depth) - 1);
  entries[0] = {*root, Rational(1, 2)};
  std::size_t inner = (std::size_t{1} << depth) - 1;
  for (std::size_t i = 0; i < inner; ++i) {
    const SchemeEntry& parent = entries[i];
    auto fail = [&](const std::string& why) {
      return OperationError("OracleFailure", "split of B(" + s.literal(parent.a).dump() + ", " +
                                                 parent.q.str() + "): " + why);
    };
    auto pair = oracle(parent.a, parent.q);
    if (!pair) throw fail("no pair");
    Bracket d0 = bracket(s, parent.a, pair->first), d1 = bracket(s, parent.a, pair->second);
    Bracket sep = bracket(s, pair->first, pair->second);
    if (!(d0.hi < parent.q) || !(d1.hi < parent.q)) throw fail("point not certified inside");
    if (sep.lo.sign() <= 0) throw fail("points not certified distinct");
    Rational third = sep.lo / Rational(3);
    entries[2 * i + 1] = {pair->first, min((parent.q - d0.hi) / Rational(2), third)};
    entries[2 * i + 2] = {pair->second, min((parent.q - d1.hi) / Rational(2), third)};
  }
  return BallScheme(std::move(space), depth, std::move(entries));
}

BallScheme build_scheme(SpacePtr space, unsigned depth) {
  auto oracle = space->split_oracle();
  if (!oracle) throw OperationError("OracleFailure", space->name() + " has no split oracle");
  return build_scheme(space, *oracle, depth);
}

SchemeCheck check_scheme(const BallScheme& scheme) {
  const Space& s = *scheme.space();
  const auto& e = scheme.entries();
  SchemeCheck out;
  for (std::size_t i = 0; i < e.size(); ++i) {
    std::string w = BallScheme::word_of(i);
    if (!out.radius && e[i].q > Rational::pow2(-static_cast<long>(w.size()) - 1)) out.radius = w;
    if (w.size() == scheme.depth()) continue;
    const SchemeEntry& c0 = e[2 * i + 1];
    const SchemeEntry& c1 = e[2 * i + 2];
    if (!out.nesting) {
      if (!(bracket(s, e[i].a, c0.a).hi + c0.q < e[i].q)) out.nesting = w + "0";
      else if (!(bracket(s, e[i].a, c1.a).hi + c1.q < e[i].q)) out.nesting = w + "1";
    }
    if (!out.disjoint && !(bracket(s, c0.a, c1.a).lo >= c0.q + c1.q)) out.disjoint = w;
  }
  return out;
}

std::vector<CodePoint> phi_apply(const BallScheme& scheme, const std::string& x, unsigned n) {
  if (n > scheme.depth())
    throw OperationError("DepthExceeded", "prefix " + std::to_string(n) + " beyond scheme depth " +
                                              std::to_string(scheme.depth()));
  if (x.size() < n) throw SpecError("phi_apply: word shorter than the prefix");
  std::vector<CodePoint> out;
  for (unsigned k = 0; k <= n; ++k) out.push_back(scheme.at(x.substr(0, k)).a);
  return out;
}

Point phi_point(const BallScheme& scheme, const Point& x) {
  return Point::from_sequence([scheme, x](unsigned n) {
    return scheme.at(cantor_prefix(x.at(n), n)).a;
  });
}

namespace {

class EmbeddingCode final : public FunctionCode {
 public:
  explicit EmbeddingCode(BallScheme scheme)
      : FunctionCode(catalog(std::string("cantor")), scheme.space()), scheme_(std::move(scheme)) {}

  std::optional<Quadruple> localized(const CodePoint& a, long j) const override {
    long len = std::max(0L, j + 1);
    if (len > static_cast<long>(scheme_.depth())) return std::nullopt;
    const SchemeEntry& e = scheme_.at(cantor_prefix(a, static_cast<std::size_t>(len)));
    return Quadruple{a, Rational::pow2(-j), e.a, e.q};
  }

  Json spec() const override {
    return {{"op", "embed"}, {"space", scheme_.space()->spec()}, {"depth", scheme_.depth()}};
  }

 private:
  BallScheme scheme_;
};

}  // namespace

FunctionPtr make_embedding(const BallScheme& scheme) {
  return std::make_shared<EmbeddingCode>(scheme);
}

OpenSetCode complement_open(const BallScheme& scheme, std::size_t count) {
  if (scheme.depth() < 1) throw SpecError("complement_open needs depth >= 1");
  const auto& e = scheme.entries();
  std::size_t first = (std::size_t{1} << scheme.depth()) - 1;
  auto space = scheme.space();
  auto leaves = std::make_shared<std::vector<SchemeEntry>>(e.begin() + static_cast<long>(first), e.end());
  return OpenSetCode::enumerate(
      [space, leaves](std::size_t i) -> std::optional<Ball> {
        CodePoint b = space->code_point(i);
        std::optional<Rational> m;
        for (const SchemeEntry& leaf : *leaves) {
          Rational v = bracket(*space, b, leaf.a).lo - leaf.q;
          if (v.sign() <= 0) return std::nullopt;
          if (!m || v < *m) m = v;
        }
        return Ball{b, *m / Rational(2)};
      },
      count);
}

TreeSubcover tree_covering_subcover(const BallScheme& scheme, const std::set<std::string>& tree) {
  for (const std::string& w : tree) {
    if (w.find_first_not_of("01") != std::string::npos) throw SpecError("tree word is not binary");
    if (!w.empty() && !tree.count(w.substr(0, w.size() - 1)))
      throw SpecError("tree is not prefix-closed at " + w);
    if (w.size() >= scheme.depth())
      throw OperationError("DepthExhausted", "tree reaches the scheme depth at \"" + w + "\"");
  }
  TreeSubcover out;
  if (tree.empty()) {
    out.words.push_back("");
  } else {
    for (const std::string& w : tree)
      for (char c : {'0', '1'})
        if (!tree.count(w + c)) out.words.push_back(w + c);
  }
  std::sort(out.words.begin(), out.words.end(), [](const std::string& x, const std::string& y) {
    return BallScheme::index_of(x) < BallScheme::index_of(y);
  });
  // Each anchor a_w at the scheme depth lies in the ball of its exit prefix.
  const Space& s = *scheme.space();
  std::size_t first = (std::size_t{1} << scheme.depth()) - 1;
  for (std::size_t i = first; i < scheme.entries().size(); ++i) {
    std::string w = BallScheme::word_of(i);
    std::size_t len = 0;
    while (tree.count(w.substr(0, len))) ++len;
    std::string exit = w.substr(0, len);
    if (!std::binary_search(out.words.begin(), out.words.end(), exit,
                            [](const std::string& x, const std::string& y) {
                              return BallScheme::index_of(x) < BallScheme::index_of(y);
                            }))
      throw OperationError("NotACovering", "exit prefix of " + w + " missing");
    const SchemeEntry& e = scheme.at(exit);
    if (!(bracket(s, e.a, scheme.entries()[i].a).hi < e.q))
      throw OperationError("NotACovering", "anchor " + w + " not certified in its exit ball");
    ++out.anchors_checked;
  }
  return out;
}

}  // namespace csms
