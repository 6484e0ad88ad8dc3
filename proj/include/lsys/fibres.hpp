#pragma once

#include <random>
#include <vector>

#include "sections.hpp"

namespace lsys {

/// Element of E_g for g = (L z, d(L) - d(M), M z), stored at the stage K(X_M, X_L).
struct FibreElement {
  Path L;
  Path M;
  InfinitePathEP tail;
  Matrix T;

  std::vector<int> cocycle() const { return signed_diff(L.degree, M.degree); }
  double norm() const { return spectral_norm(T); }
};

/// Same element at the later stage q: i_{L,M}^{L nu, M nu} with nu = tail(0, q).
inline FibreElement push(const LambdaSystem& s, const FibreElement& e, const Degree& q) {
  const KGraph& g = s.graph();
  Path nu = ep_segment(g, e.tail, Degree::zero(g.rank()), q);
  return {g.compose(e.L, nu), g.compose(e.M, nu), ep_shift(g, e.tail, q), s.embed(e.L, e.M, nu, e.T)};
}

inline FibreElement adjoint(const FibreElement& e) { return {e.M, e.L, e.tail, e.T.adjoint()}; }

/// e1 e2 for s(g1) = r(g2); the middle paths are matched at depth join(d(M1), d(L2)).
inline FibreElement multiply(const LambdaSystem& s, const FibreElement& e1, const FibreElement& e2) {
  Degree D = join(e1.M.degree, e2.L.degree);
  FibreElement a = push(s, e1, D - e1.M.degree);
  FibreElement b = push(s, e2, D - e2.L.degree);
  if (a.M != b.L) throw Error("fibre elements are not composable");
  return {a.L, b.M, b.tail, a.T * b.T};
}

/// Difference of two elements over the same groupoid point, measured at a common stage.
inline double fibre_distance(const LambdaSystem& s, const FibreElement& e1, const FibreElement& e2) {
  if (e1.cocycle() != e2.cocycle()) throw Error("fibre elements lie over different points");
  Degree D = join(e1.L.degree, e2.L.degree);
  FibreElement a = push(s, e1, D - e1.L.degree);
  FibreElement b = push(s, e2, D - e2.L.degree);
  if (a.L != b.L || a.M != b.M) throw Error("fibre elements lie over different points");
  return spectral_norm(a.T - b.T);
}

/// Value of a section at g = (lambda x, d(lambda) - d(mu), mu x).
inline FibreElement fibre_at(const LambdaSystem& s, const Section& a, const Path& lambda, const Path& mu,
                             const InfinitePathEP& x) {
  const KGraph& g = s.graph();
  if (lambda.source != mu.source || lambda.source != x.prefix.range) throw Error("fibre_at: incompatible point");
  auto c = signed_diff(lambda.degree, mu.degree);
  Degree D = lambda.degree;
  for (const auto& t : a.terms)
    if (t.cocycle() == c) D = join(D, t.lambda.degree);
  Degree q = D - lambda.degree;
  Path nu = ep_segment(g, x, Degree::zero(g.rank()), q);
  FibreValue v = fibre_eval(s, a, {lambda, mu, nu});
  return {v.lambda, v.mu, ep_shift(g, x, q), v.T};
}

/// One stage of the linking algebra K(X_{L} + X_{M}) with L = lambda nu, M = mu nu.
struct FibreStage {
  Path nu;
  Path L;
  Path M;
  int dim_LL = 0;
  int dim_LM = 0;  // the E_g stage K(X_M, X_L)
  int dim_ML = 0;
  int dim_MM = 0;
  int span_rank_M = 0;  // rank of span{e* f} over the off-corner basis
  int span_rank_L = 0;  // rank of span{e f*}
  int size_L = 0;
  int size_M = 0;

  int linking_dim() const { return dim_LL + dim_LM + dim_ML + dim_MM; }
};

struct TruncatedFibre {
  Path lambda;
  Path mu;
  InfinitePathEP x;
  int budget = 0;
  std::vector<FibreStage> stages;

  /// Linking-algebra element at stage j carried to stage j + 1.
  Matrix connect(const LambdaSystem& s, int j, const Matrix& S) const {
    const FibreStage& a = stages.at(j);
    const FibreStage& b = stages.at(j + 1);
    const KGraph& g = s.graph();
    Path step = g.factorize(b.nu, a.nu.degree, b.nu.degree - a.nu.degree).second;
    const int l = a.size_L, m = a.size_M;
    Matrix out(b.size_L + b.size_M, b.size_L + b.size_M);
    out.topLeftCorner(b.size_L, b.size_L) = s.embed(a.L, a.L, step, S.topLeftCorner(l, l));
    out.topRightCorner(b.size_L, b.size_M) = s.embed(a.L, a.M, step, S.topRightCorner(l, m));
    out.bottomLeftCorner(b.size_M, b.size_L) = s.embed(a.M, a.L, step, S.bottomLeftCorner(m, l));
    out.bottomRightCorner(b.size_M, b.size_M) = s.embed(a.M, a.M, step, S.bottomRightCorner(m, m));
    return out;
  }

  Matrix corner_L(int j) const {
    const FibreStage& a = stages.at(j);
    Matrix P = Matrix::Zero(a.size_L + a.size_M, a.size_L + a.size_M);
    P.topLeftCorner(a.size_L, a.size_L).setIdentity();
    return P;
  }
  Matrix corner_M(int j) const {
    const FibreStage& a = stages.at(j);
    Matrix P = Matrix::Zero(a.size_L + a.size_M, a.size_L + a.size_M);
    P.bottomRightCorner(a.size_M, a.size_M).setIdentity();
    return P;
  }
};

inline int span_rank(const std::vector<Matrix>& ms, double cut) {
  if (ms.empty()) return 0;
  Matrix stack(ms[0].size(), static_cast<Eigen::Index>(ms.size()));
  for (size_t i = 0; i < ms.size(); ++i) stack.col(static_cast<Eigen::Index>(i)) = ms[i].reshaped();
  return numeric_rank(stack, cut);
}

/// Stages nu_j = x(0, j(1,...,1)) for j = 0..budget over the base (lambda, mu).
inline TruncatedFibre fibre_E(const LambdaSystem& s, const Path& lambda, const Path& mu, const InfinitePathEP& x,
                              int budget) {
  const KGraph& g = s.graph();
  if (lambda.source != mu.source || lambda.source != x.prefix.range) throw Error("fibre_E: incompatible base");
  const double cut = s.tolerance().cut;
  TruncatedFibre F{lambda, mu, x, budget, {}};
  Degree one(std::vector<int>(g.rank(), 1));
  for (int j = 0; j <= budget; ++j) {
    FibreStage st;
    st.nu = ep_segment(g, x, Degree::zero(g.rank()), one * j);
    st.L = g.compose(lambda, st.nu);
    st.M = g.compose(mu, st.nu);
    ModulePtr XL = s.module(st.L), XM = s.module(st.M);
    st.size_L = XL->dim;
    st.size_M = XM->dim;
    auto off = compact_basis(*XM, *XL, cut);
    st.dim_LL = static_cast<int>(compact_basis(*XL, *XL, cut).size());
    st.dim_LM = static_cast<int>(off.size());
    st.dim_ML = static_cast<int>(compact_basis(*XL, *XM, cut).size());
    st.dim_MM = static_cast<int>(compact_basis(*XM, *XM, cut).size());
    std::vector<Matrix> left, right;
    for (const Matrix& e : off)
      for (const Matrix& f : off) {
        right.push_back(e.adjoint() * f);
        left.push_back(e * f.adjoint());
      }
    st.span_rank_M = span_rank(right, cut);
    st.span_rank_L = span_rank(left, cut);
    F.stages.push_back(st);
  }
  return F;
}

/// Diagonal fibre E_x.
inline TruncatedFibre fibre_E(const LambdaSystem& s, const InfinitePathEP& x, int budget) {
  Path v = s.graph().vertex(x.prefix.range);
  return fibre_E(s, v, v, x, budget);
}

inline std::vector<Path> short_paths_to(const KGraph& g, int v, int depth) {
  std::vector<Path> out;
  for (const Path& p : short_paths(g, depth))
    if (p.source == v) out.push_back(p);
  return out;
}

/// Random element of E_g at g = (lambda x, ., mu x), obtained by evaluating a random section.
inline FibreElement random_fibre_element(const LambdaSystem& s, const Path& lambda, const Path& mu,
                                         const InfinitePathEP& x, std::mt19937_64& rng) {
  const KGraph& g = s.graph();
  std::uniform_int_distribution<int> stage(0, 1);
  Degree q = Degree::zero(g.rank());
  for (int i = 0; i < g.rank(); ++i) q.c[i] = stage(rng);
  Path nu = ep_segment(g, x, Degree::zero(g.rank()), q);
  Path L = g.compose(lambda, nu), M = g.compose(mu, nu);
  Section a = basic(s, L, M, random_compact(s, L, M, rng)) + cplx(0.5) * random_section(s, rng, 2, 2);
  return fibre_at(s, a, lambda, mu, x);
}

}  // namespace lsys
