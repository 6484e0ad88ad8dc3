#pragma once

#include <utility>
#include <vector>

#include "kgraph.hpp"

namespace lsys {

/// Z(lambda, mu) = {(lambda z, d(lambda) - d(mu), mu z)}.
struct Bisection {
  Path lambda;
  Path mu;

  std::vector<int> cocycle() const { return signed_diff(lambda.degree, mu.degree); }
  friend bool operator==(const Bisection& a, const Bisection& b) { return a.lambda == b.lambda && a.mu == b.mu; }
  friend bool operator<(const Bisection& a, const Bisection& b) {
    return std::tie(a.lambda, a.mu) < std::tie(b.lambda, b.mu);
  }
};

struct BisectionUnion {
  std::vector<Bisection> items;
  bool disjoint = false;
};

/// Family of groupoid elements (lambda nu z, d(lambda) - d(mu), mu nu z).
struct Witness {
  Path lambda;
  Path mu;
  Path nu;
};

inline Bisection make_bisection(const Path& lambda, const Path& mu) {
  if (lambda.source != mu.source) throw Error("bisection needs s(lambda) = s(mu)");
  return {lambda, mu};
}

/// Pairs (alpha, beta) in Lambda^min(l1,l2) and Lambda^min(m1,m2); each gives Z(l1 alpha, m1 alpha).
inline std::vector<std::pair<Path, Path>> intersect_pairs(const KGraph& g, const Bisection& a, const Bisection& b) {
  std::vector<std::pair<Path, Path>> out;
  if (a.cocycle() != b.cocycle()) return out;
  if (a.lambda.range != b.lambda.range || a.mu.range != b.mu.range) return out;
  auto lm = g.lambda_min(a.lambda, b.lambda);
  if (lm.empty()) return out;
  auto mm = g.lambda_min(a.mu, b.mu);
  for (const auto& p : lm)
    for (const auto& q : mm)
      if (p == q) out.push_back(p);
  return out;
}

inline BisectionUnion intersect(const KGraph& g, const Bisection& a, const Bisection& b) {
  BisectionUnion u{{}, true};
  for (const auto& [alpha, beta] : intersect_pairs(g, a, b))
    u.items.push_back({g.compose(a.lambda, alpha), g.compose(a.mu, alpha)});
  return u;
}

/// Extensions alpha with Z(l1 alpha, m1 alpha) making up Z(l1,m1) \ Z(l2,m2).
inline std::vector<Path> complement_extensions(const KGraph& g, const Bisection& a, const Bisection& b) {
  Degree p = join(a.lambda.degree, b.lambda.degree) - a.lambda.degree;
  auto hit = intersect_pairs(g, a, b);
  std::vector<Path> out;
  for (const Path& alpha : g.paths(a.lambda.source, p)) {
    bool excluded = false;
    for (const auto& h : hit)
      if (h.first == alpha) excluded = true;
    if (!excluded) out.push_back(alpha);
  }
  return out;
}

inline BisectionUnion complement(const KGraph& g, const Bisection& a, const Bisection& b) {
  BisectionUnion u{{}, true};
  for (const Path& alpha : complement_extensions(g, a, b))
    u.items.push_back({g.compose(a.lambda, alpha), g.compose(a.mu, alpha)});
  return u;
}

inline BisectionUnion refine(const KGraph& g, const Bisection& a, const Degree& p) {
  BisectionUnion u{{}, true};
  for (const Path& nu : g.paths(a.lambda.source, p))
    u.items.push_back({g.compose(a.lambda, nu), g.compose(a.mu, nu)});
  return u;
}

/// Sequential relative complements in input order.
inline BisectionUnion disjointize(const KGraph& g, const std::vector<Bisection>& in) {
  BisectionUnion u{{}, true};
  for (size_t i = 0; i < in.size(); ++i) {
    std::vector<Bisection> pieces{in[i]};
    for (size_t j = 0; j < i && !pieces.empty(); ++j) {
      std::vector<Bisection> next;
      for (const auto& piece : pieces) {
        auto c = complement(g, piece, in[j]);
        next.insert(next.end(), c.items.begin(), c.items.end());
      }
      pieces = std::move(next);
    }
    u.items.insert(u.items.end(), pieces.begin(), pieces.end());
  }
  return u;
}

/// Does every element of the witness family lie in a?
inline bool member(const KGraph& g, const Witness& w, const Bisection& a) {
  if (w.lambda.source != w.mu.source || w.lambda.source != w.nu.range) throw Error("malformed witness");
  if (signed_diff(w.lambda.degree, w.mu.degree) != a.cocycle()) return false;
  Path L = g.compose(w.lambda, w.nu);
  Path M = g.compose(w.mu, w.nu);
  if (L.range != a.lambda.range || M.range != a.mu.range) return false;
  if (a.lambda.degree.leq(L.degree)) {
    auto [head, rho] = g.factorize(L, a.lambda.degree, L.degree - a.lambda.degree);
    if (head != a.lambda) return false;
    return M == g.compose(a.mu, rho);
  }
  Degree p = join(L.degree, a.lambda.degree) - L.degree;
  for (const Path& ext : g.paths(w.nu.source, p))
    if (!member(g, {w.lambda, w.mu, g.compose(w.nu, ext)}, a)) return false;
  return true;
}

}  // namespace lsys
