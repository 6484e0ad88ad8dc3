#pragma once

#include <complex>
#include <map>
#include <utility>
#include <vector>

#include "cylsets.hpp"
#include "lsystem.hpp"

namespace lsys {

/// f_T^{lambda,mu} with T : X_mu -> X_lambda.
struct BasicSection {
  Path lambda;
  Path mu;
  Matrix T;

  std::vector<int> cocycle() const { return signed_diff(lambda.degree, mu.degree); }
};

struct Section {
  std::vector<BasicSection> terms;
  bool normalized = false;

  bool empty() const { return terms.empty(); }
};

inline Section basic(const LambdaSystem& s, const Path& lambda, const Path& mu, const Matrix& T) {
  if (lambda.source != mu.source) throw Error("basic section needs s(lambda) = s(mu)");
  if (T.rows() != s.module(lambda)->dim || T.cols() != s.module(mu)->dim) throw Error("basic section: operator has wrong shape");
  return Section{{{lambda, mu, T}}, false};
}

inline Section operator+(Section a, const Section& b) {
  a.terms.insert(a.terms.end(), b.terms.begin(), b.terms.end());
  a.normalized = false;
  return a;
}

inline Section operator*(cplx c, Section a) {
  for (auto& t : a.terms) t.T *= c;
  return a;
}

inline Section operator-(Section a, const Section& b) { return a + cplx(-1.0) * b; }

/// Refinement to a common depth per cocycle class; equal (lambda, mu) merged; negligible terms dropped.
inline Section normalize(const LambdaSystem& s, const Section& a, double drop = 1e-13) {
  const KGraph& g = s.graph();
  std::map<std::vector<int>, Degree> depth;
  for (const auto& t : a.terms) {
    auto c = t.cocycle();
    auto it = depth.find(c);
    if (it == depth.end()) depth.emplace(c, t.lambda.degree);
    else it->second = join(it->second, t.lambda.degree);
  }
  std::map<std::pair<Path, Path>, Matrix> acc;
  for (const auto& t : a.terms) {
    const Degree& D = depth.at(t.cocycle());
    for (const Path& nu : g.paths(t.lambda.source, D - t.lambda.degree)) {
      Matrix op = s.embed(t.lambda, t.mu, nu, t.T);
      auto key = std::make_pair(g.compose(t.lambda, nu), g.compose(t.mu, nu));
      auto it = acc.find(key);
      if (it == acc.end()) acc.emplace(key, std::move(op));
      else it->second += op;
    }
  }
  double scale = 0.0;
  for (const auto& [k, m] : acc) scale = std::max(scale, spectral_norm(m));
  Section out;
  out.normalized = true;
  for (auto& [k, m] : acc)
    if (spectral_norm(m) > drop * std::max(1.0, scale)) out.terms.push_back({k.first, k.second, m});
  return out;
}

inline Section convolve(const LambdaSystem& s, const Section& a, const Section& b, bool normalize_result = false) {
  const KGraph& g = s.graph();
  Section out;
  for (const auto& t1 : a.terms)
    for (const auto& t2 : b.terms) {
      if (t1.mu.range != t2.lambda.range) continue;
      for (const auto& [alpha, beta] : g.lambda_min(t1.mu, t2.lambda)) {
        Matrix op = s.embed(t1.lambda, t1.mu, alpha, t1.T) * s.embed(t2.lambda, t2.mu, beta, t2.T);
        out.terms.push_back({g.compose(t1.lambda, alpha), g.compose(t2.mu, beta), std::move(op)});
      }
    }
  return normalize_result ? normalize(s, out) : out;
}

inline Section involute(const Section& a) {
  Section out;
  out.normalized = a.normalized;
  for (const auto& t : a.terms) out.terms.push_back({t.mu, t.lambda, t.T.adjoint()});
  return out;
}

/// Keeps the terms with d(lambda) = d(mu).
inline Section expectation(const Section& a) {
  Section out;
  out.normalized = a.normalized;
  for (const auto& t : a.terms)
    if (t.lambda.degree == t.mu.degree) out.terms.push_back(t);
  return out;
}

inline std::map<std::vector<int>, Section> grade(const Section& a) {
  std::map<std::vector<int>, Section> out;
  for (const auto& t : a.terms) {
    auto& sec = out[t.cocycle()];
    sec.terms.push_back(t);
    sec.normalized = a.normalized;
  }
  return out;
}

inline cplx torus_power(const std::vector<cplx>& z, const std::vector<int>& n) {
  cplx r = 1.0;
  for (size_t i = 0; i < n.size(); ++i)
    for (int j = 0; j < std::abs(n[i]); ++j) r *= n[i] > 0 ? z[i] : std::conj(z[i]);
  return r;
}

inline Section gauge(const std::vector<cplx>& z, const Section& a) {
  Section out = a;
  for (auto& t : out.terms) t.T *= torus_power(z, t.cocycle());
  return out;
}

/// Value of a section on the family (L z, d(lambda)-d(mu), M z) with L = lambda nu', M = mu nu'.
struct FibreValue {
  Path lambda;
  Path mu;
  Matrix T;
};

inline FibreValue fibre_eval(const LambdaSystem& s, const Section& a, const Witness& w) {
  const KGraph& g = s.graph();
  Path L = g.compose(w.lambda, w.nu), M = g.compose(w.mu, w.nu);
  auto c = signed_diff(L.degree, M.degree);
  Degree D = L.degree;
  for (const auto& t : a.terms)
    if (t.cocycle() == c) D = join(D, t.lambda.degree);
  if (D != L.degree) {
    // extend along the first path of the missing degree
    Path ext = g.paths(L.source, D - L.degree).front();
    L = g.compose(L, ext);
    M = g.compose(M, ext);
  }
  FibreValue out{L, M, Matrix::Zero(s.module(L)->dim, s.module(M)->dim)};
  for (const auto& t : a.terms) {
    if (t.cocycle() != c || t.lambda.range != L.range || t.mu.range != M.range) continue;
    auto [head, rho] = g.factorize(L, t.lambda.degree, L.degree - t.lambda.degree);
    if (head != t.lambda || g.compose(t.mu, rho) != M) continue;
    out.T += s.embed(t.lambda, t.mu, rho, t.T);
  }
  return out;
}

struct NormBounds {
  double lower = 0.0;
  double upper = 0.0;
};

inline NormBounds norm_bounds(const LambdaSystem& s, const Section& a) {
  Section n = a.normalized ? a : normalize(s, a);
  NormBounds b;
  for (const auto& t : n.terms) {
    double x = spectral_norm(t.T);
    b.lower = std::max(b.lower, x);
    b.upper += x;
  }
  return b;
}

/// Upper bound for the norm of a - b.
inline double distance(const LambdaSystem& s, const Section& a, const Section& b) {
  return norm_bounds(s, normalize(s, a - b, 0.0)).upper;
}

/// Random operator in K(X_mu, X_lambda): a sum of two rank-one maps.
inline Matrix random_compact(const LambdaSystem& s, const Path& lambda, const Path& mu, std::mt19937_64& rng) {
  ModulePtr Xl = s.module(lambda), Xm = s.module(mu);
  Matrix T = Matrix::Zero(Xl->dim, Xm->dim);
  for (int i = 0; i < 2; ++i)
    T += rank_one(*Xl, random_vector(rng, Xl->dim), *Xm, random_vector(rng, Xm->dim));
  return T / std::max(1e-300, spectral_norm(T));
}

/// All paths with total degree at most t.
inline std::vector<Path> short_paths(const KGraph& g, int t) {
  std::vector<Path> out;
  for (const Degree& d : degrees_with_total_at_most(g.rank(), t)) {
    auto ps = g.paths_of_degree(d);
    out.insert(out.end(), ps.begin(), ps.end());
  }
  return out;
}

/// Random section with up to `terms` basic terms, path degrees of total at most `depth`.
inline Section random_section(const LambdaSystem& s, std::mt19937_64& rng, int terms = 2, int depth = 2) {
  const KGraph& g = s.graph();
  auto ps = short_paths(g, depth);
  std::uniform_int_distribution<size_t> pick(0, ps.size() - 1);
  std::uniform_int_distribution<int> count(1, terms);
  Section a;
  int n = count(rng);
  while (static_cast<int>(a.terms.size()) < n) {
    const Path& l = ps[pick(rng)];
    const Path& m = ps[pick(rng)];
    if (l.source != m.source) continue;
    a.terms.push_back({l, m, random_compact(s, l, m, rng)});
  }
  return a;
}

}  // namespace lsys
