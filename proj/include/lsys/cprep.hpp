#pragma once

#include <functional>
#include <random>
#include <string>
#include <vector>

#include "fibres.hpp"
#include "report.hpp"
#include "sections.hpp"

namespace lsys {

/// *-algebra operations of a representation target. `norm` measures residuals; targets that are
/// only trusted on part of the space (truncations) restrict it there.
template <class T>
struct TargetOps {
  std::function<T(const T&, const T&)> mul;
  std::function<T(const T&, const T&)> add;
  std::function<T(cplx, const T&)> scale;
  std::function<T(const T&)> adj;
  std::function<T()> zero;
  std::function<double(const T&)> norm;
  std::function<T(const std::vector<cplx>&, const T&)> gauge;  // empty when the target has none

  T sub(const T& a, const T& b) const { return add(a, scale(cplx(-1.0), b)); }
  double dist(const T& a, const T& b) const { return norm(sub(a, b)); }
};

/// (rho, pi): rho takes a path and coordinates in X_lambda, pi a vertex and an element of A_v.
template <class T>
struct Representation {
  std::string name;
  TargetOps<T> ops;
  std::function<T(const Path&, const Vector&)> rho;
  std::function<T(int, const Matrix&)> pi;
};

inline Vector basis_vector(int n, int i) {
  Vector e = Vector::Zero(n);
  e(i) = 1.0;
  return e;
}

inline TargetOps<Section> section_ops(const LambdaSystem& s) {
  const LambdaSystem* sp = &s;
  TargetOps<Section> o;
  o.mul = [sp](const Section& a, const Section& b) { return convolve(*sp, a, b); };
  o.add = [](const Section& a, const Section& b) { return a + b; };
  o.scale = [](cplx c, const Section& a) { return c * a; };
  o.adj = [](const Section& a) { return involute(a); };
  o.zero = [] { return Section{}; };
  o.norm = [sp](const Section& a) { return norm_bounds(*sp, normalize(*sp, a, 0.0)).upper; };
  o.gauge = [](const std::vector<cplx>& z, const Section& a) { return gauge(z, a); };
  return o;
}

/// pi_v(a) = f^{v,v}_{l_a}, rho_lambda(x) = f^{lambda,s(lambda)}_{l_x}.
inline Representation<Section> canonical_representation(const LambdaSystem& s) {
  const LambdaSystem* sp = &s;
  Representation<Section> r{"canonical", section_ops(s), {}, {}};
  r.pi = [sp](int v, const Matrix& a) {
    Path p = sp->graph().vertex(v);
    return basic(*sp, p, p, sp->module(p)->act_left(a));
  };
  r.rho = [sp](const Path& lambda, const Vector& x) {
    Path src = sp->graph().vertex(lambda.source);
    ModulePtr X = sp->module(lambda);
    const FDAlgebra& B = sp->algebra(lambda.source);
    Matrix l(X->dim, B.dim());
    for (int k = 0; k < B.dim(); ++k) l.col(k) = X->right[k] * x;
    return basic(*sp, lambda, src, l);
  };
  return r;
}

/// Truncated Fock model on the sum of X_mu over d(mu) <= top. Creation operators
/// rho_lambda(x): z -> chi(x (x) z), cut off where the degree leaves the box.
struct FockSpace {
  Degree top;
  Degree probe;  // residuals are measured on levels <= probe
  std::vector<Path> paths;
  std::vector<int> offset;
  std::map<Path, int> index;
  int dim = 0;
};

inline FockSpace fock_space(const LambdaSystem& s, const Degree& top, int margin) {
  FockSpace F;
  F.top = top;
  F.probe = top;
  for (int& c : F.probe.c) c = std::max(0, c - margin);
  for (const Degree& d : degrees_below(top))
    for (const Path& p : s.graph().paths_of_degree(d)) {
      F.index[p] = static_cast<int>(F.paths.size());
      F.paths.push_back(p);
      F.offset.push_back(F.dim);
      F.dim += s.module(p)->dim;
    }
  return F;
}

inline Representation<Matrix> fock_truncation(const LambdaSystem& s, const Degree& top, int margin = 2) {
  auto F = std::make_shared<FockSpace>(fock_space(s, top, margin));
  const LambdaSystem* sp = &s;
  Matrix probe = Matrix::Zero(F->dim, F->dim);
  for (size_t i = 0; i < F->paths.size(); ++i)
    if (F->paths[i].degree.leq(F->probe)) {
      int d = s.module(F->paths[i])->dim;
      probe.block(F->offset[i], F->offset[i], d, d).setIdentity();
    }
  Representation<Matrix> r;
  r.name = "fock";
  const int n = F->dim;
  r.ops.mul = [](const Matrix& a, const Matrix& b) -> Matrix { return a * b; };
  r.ops.add = [](const Matrix& a, const Matrix& b) -> Matrix { return a + b; };
  r.ops.scale = [](cplx c, const Matrix& a) -> Matrix { return c * a; };
  r.ops.adj = [](const Matrix& a) -> Matrix { return a.adjoint(); };
  r.ops.zero = [n]() -> Matrix { return Matrix::Zero(n, n); };
  r.ops.norm = [probe](const Matrix& a) { return spectral_norm(a * probe); };
  r.ops.gauge = [F, sp](const std::vector<cplx>& z, const Matrix& a) -> Matrix {
    Vector d(F->dim);
    for (size_t i = 0; i < F->paths.size(); ++i)
      d.segment(F->offset[i], sp->module(F->paths[i])->dim).setConstant(torus_power(z, F->paths[i].degree.c));
    return d.asDiagonal() * a * d.conjugate().asDiagonal();
  };
  r.pi = [F, sp](int v, const Matrix& a) -> Matrix {
    Matrix out = Matrix::Zero(F->dim, F->dim);
    for (size_t i = 0; i < F->paths.size(); ++i) {
      const Path& p = F->paths[i];
      if (p.range != v) continue;
      ModulePtr X = sp->module(p);
      out.block(F->offset[i], F->offset[i], X->dim, X->dim) = X->act_left(a);
    }
    return out;
  };
  r.rho = [F, sp, pi = r.pi](const Path& lambda, const Vector& x) -> Matrix {
    const KGraph& g = sp->graph();
    if (lambda.is_vertex()) return pi(lambda.range, sp->algebra(lambda.range).element(x));
    Matrix out = Matrix::Zero(F->dim, F->dim);
    for (size_t i = 0; i < F->paths.size(); ++i) {
      const Path& mu = F->paths[i];
      if (mu.range != lambda.source) continue;
      Path lm = g.compose(lambda, mu);
      auto it = F->index.find(lm);
      if (it == F->index.end()) continue;  // beyond the truncation
      const int dm = sp->module(mu)->dim;
      Matrix create = sp->chi(lambda, mu) * sp->pair(lambda, mu).factor * kron(x, Matrix::Identity(dm, dm));
      out.block(F->offset[it->second], F->offset[i], create.rows(), dm) = create;
    }
    return out;
  };
  return r;
}

struct RepCheckOptions {
  int depth = 1;        // each path has total degree <= depth
  int pair_limit = -1;  // when >= 0, only pairs with |d(alpha)| + |d(beta)| <= pair_limit
  double tol = 1e-9;
};

/// Relations (1)-(3), the *-homomorphism property of pi and the reduced relations (A)-(C).
template <class T>
Report check_representation(const LambdaSystem& s, const Representation<T>& r, const RepCheckOptions& opt = {}) {
  const KGraph& g = s.graph();
  const auto& o = r.ops;
  Report rep("representation " + r.name);
  double r1 = 0, hom = 0, star = 0, orth_v = 0;
  for (int v = 0; v < g.num_vertices(); ++v) {
    const FDAlgebra& A = s.algebra(v);
    Path p = g.vertex(v);
    for (int k = 0; k < A.dim(); ++k) {
      r1 = std::max(r1, o.dist(r.rho(p, basis_vector(A.dim(), k)), r.pi(v, A.unit_matrix(k))));
      star = std::max(star, o.dist(o.adj(r.pi(v, A.unit_matrix(k))), r.pi(v, A.unit_matrix(k).adjoint())));
      for (int l = 0; l < A.dim(); ++l)
        hom = std::max(hom, o.dist(o.mul(r.pi(v, A.unit_matrix(k)), r.pi(v, A.unit_matrix(l))),
                                   r.pi(v, A.unit_matrix(k) * A.unit_matrix(l))));
    }
    for (int w = 0; w < g.num_vertices(); ++w) {
      if (w == v) continue;
      for (int k = 0; k < A.dim(); ++k)
        for (int l = 0; l < s.algebra(w).dim(); ++l)
          orth_v = std::max(orth_v, o.norm(o.mul(r.pi(v, A.unit_matrix(k)), r.pi(w, s.algebra(w).unit_matrix(l)))));
    }
  }
  rep.add_residual("rho_vertex_is_pi", r1, opt.tol);
  rep.add_residual("pi_multiplicative", hom, opt.tol);
  rep.add_residual("pi_adjoint", star, opt.tol);

  double mult = 0, orth = 0, inner = 0, innerC = 0;
  int pairs = 0;
  auto paths = short_paths(g, opt.depth);
  for (const Path& a : paths) {
    ModulePtr Xa = s.module(a);
    std::vector<T> ra;
    for (int i = 0; i < Xa->dim; ++i) ra.push_back(r.rho(a, basis_vector(Xa->dim, i)));
    for (const Path& b : paths) {
      if (opt.pair_limit >= 0 && a.degree.total() + b.degree.total() > opt.pair_limit) continue;
      ModulePtr Xb = s.module(b);
      ++pairs;
      std::vector<T> rb;
      for (int j = 0; j < Xb->dim; ++j) rb.push_back(r.rho(b, basis_vector(Xb->dim, j)));
      Path ab;
      if (a.source == b.range) ab = g.compose(a, b);
      for (int i = 0; i < Xa->dim; ++i)
        for (int j = 0; j < Xb->dim; ++j) {
          T prod = o.mul(ra[i], rb[j]);
          if (a.source == b.range) {
            Vector z = s.chi_apply(a, b, basis_vector(Xa->dim, i), basis_vector(Xb->dim, j));
            mult = std::max(mult, o.dist(prod, r.rho(ab, z)));
          } else {
            orth = std::max(orth, o.norm(prod));
          }
          if (a.degree == b.degree) {
            T lhs = o.mul(o.adj(ra[i]), rb[j]);
            if (a == b) {
              double d = o.dist(lhs, r.pi(a.source, Xa->inner_product(basis_vector(Xa->dim, i), basis_vector(Xb->dim, j))));
              inner = std::max(inner, d);
              innerC = std::max(innerC, d);
            } else {
              inner = std::max(inner, o.norm(lhs));
            }
          }
        }
    }
  }
  std::string detail = std::to_string(pairs) + " path pairs";
  rep.add_residual("multiplicative", mult, opt.tol, detail);
  rep.add_residual("orthogonality", orth, opt.tol, detail);
  rep.add_residual("inner_product", inner, opt.tol, detail);
  // reduced relations: (A) orthogonal vertex images, (B) multiplicativity on composable pairs,
  // (C) the inner-product relation for alpha = beta
  rep.add_residual("reduced_A", orth_v, opt.tol);
  rep.add_residual("reduced_B", mult, opt.tol);
  rep.add_residual("reduced_C", innerC, opt.tol);
  bool reduced = orth_v <= opt.tol && mult <= opt.tol && innerC <= opt.tol;
  bool full = mult <= opt.tol && orth <= opt.tol && inner <= opt.tol;
  rep.add("reduction_consistent", !reduced || full, reduced ? "(A)-(C) hold" : "(A)-(C) do not all hold");
  return rep;
}

/// sum_i rho(T u_i) rho(u_i)^* for a frame u (columns of U).
template <class T>
T rho_compact(const Representation<T>& r, const Path& lambda, const Matrix& Tm, const Matrix& U) {
  T acc = r.ops.zero();
  for (Eigen::Index i = 0; i < U.cols(); ++i)
    acc = r.ops.add(acc, r.ops.mul(r.rho(lambda, Tm * U.col(i)), r.ops.adj(r.rho(lambda, U.col(i)))));
  return acc;
}

/// pi_v(a) = sum over v Lambda^n of rho^{(lambda)}(phi_lambda(a)), for a = 1 and every matrix unit.
template <class T>
Report check_covariance(const LambdaSystem& s, const Representation<T>& r, const Degree& n, double tol = 1e-8,
                        std::uint64_t seed = 7) {
  const KGraph& g = s.graph();
  Report rep("covariance " + r.name + " n=" + n.str());
  std::mt19937_64 rng(seed);
  double cov = 0, indep = 0;
  std::string worst;
  for (int v = 0; v < g.num_vertices(); ++v) {
    const FDAlgebra& A = s.algebra(v);
    auto ps = g.paths(v, n);
    std::vector<Matrix> frames, frames2;
    for (const Path& p : ps) {
      ModulePtr X = s.module(p);
      frames.push_back(frame(*X));
      frames2.push_back(frame_from(*X, random_matrix(rng, X->dim, X->dim + 1)));
    }
    std::vector<Matrix> as{A.identity()};
    for (int k = 0; k < A.dim(); ++k) as.push_back(A.unit_matrix(k));
    for (const Matrix& a : as) {
      T sum = r.ops.zero(), sum2 = r.ops.zero();
      for (size_t i = 0; i < ps.size(); ++i) {
        Matrix phi = s.phi(ps[i], a);
        sum = r.ops.add(sum, rho_compact(r, ps[i], phi, frames[i]));
        sum2 = r.ops.add(sum2, rho_compact(r, ps[i], phi, frames2[i]));
      }
      double d = r.ops.dist(r.pi(v, a), sum);
      if (d > cov) {
        cov = d;
        worst = "vertex " + g.vertex_id(v);
      }
      indep = std::max(indep, r.ops.dist(sum, sum2));
    }
  }
  rep.add_residual("covariance", cov, tol, worst);
  rep.add_residual("frame_independence", indep, tol);
  return rep;
}

/// Gauge equivariance of the generators and injectivity of every pi_v.
template <class T>
Report check_giut_hypotheses(const LambdaSystem& s, const Representation<T>& r, int samples = 8, double tol = 1e-9) {
  const KGraph& g = s.graph();
  Report rep("gauge-invariant uniqueness hypotheses " + r.name);
  if (!r.ops.gauge) {
    rep.add("gauge_available", false, "target has no gauge action");
  } else {
    double eq = 0;
    for (int t = 0; t < samples; ++t) {
      std::vector<cplx> z(g.rank());
      for (int i = 0; i < g.rank(); ++i) z[i] = std::polar(1.0, 2.0 * M_PI * (t + 0.37 * (i + 1)) / samples);
      for (int v = 0; v < g.num_vertices(); ++v)
        for (int k = 0; k < s.algebra(v).dim(); ++k) {
          T p = r.pi(v, s.algebra(v).unit_matrix(k));
          eq = std::max(eq, r.ops.dist(r.ops.gauge(z, p), p));
        }
      for (int e = 0; e < g.num_edges(); ++e) {
        Path p = g.edge_path(e);
        ModulePtr X = s.module(p);
        for (int i = 0; i < X->dim; ++i) {
          T x = r.rho(p, basis_vector(X->dim, i));
          eq = std::max(eq, r.ops.dist(r.ops.gauge(z, x), r.ops.scale(torus_power(z, p.degree.c), x)));
        }
      }
    }
    rep.add_residual("gauge_equivariant", eq, tol, std::to_string(samples) + " torus samples");
  }
  // pi_v is a *-homomorphism, so its kernel is a sum of blocks: test the block units
  for (int v = 0; v < g.num_vertices(); ++v) {
    const FDAlgebra& A = s.algebra(v);
    int kernel = 0;
    double smallest = 1e300;
    for (size_t b = 0; b < A.blocks().size(); ++b) {
      Matrix p = Matrix::Zero(A.size(), A.size());
      const int n = A.blocks()[b];
      p.block(A.offset(static_cast<int>(b)), A.offset(static_cast<int>(b)), n, n).setIdentity();
      double x = r.ops.norm(r.pi(v, p));
      smallest = std::min(smallest, x);
      if (x <= tol) kernel += n * n;
    }
    rep.add("pi_injective " + g.vertex_id(v), kernel == 0,
            "kernel dimension " + std::to_string(kernel) + ", smallest block image " + format_double(smallest));
  }
  return rep;
}

enum class Fault { sign_flip_edge, scaled_edge, zero_pi, doubled_pi, composite_sign };

inline std::vector<Fault> all_faults() {
  return {Fault::sign_flip_edge, Fault::scaled_edge, Fault::zero_pi, Fault::doubled_pi, Fault::composite_sign};
}

inline std::string fault_name(Fault f) {
  switch (f) {
    case Fault::sign_flip_edge: return "sign flip on one edge";
    case Fault::scaled_edge: return "edge scaled by 3/2";
    case Fault::zero_pi: return "zero vertex representation";
    case Fault::doubled_pi: return "vertex representation doubled";
    case Fault::composite_sign: return "sign flip on paths of length >= 2";
  }
  return "";
}

/// Injects a fault into a representation; edge faults hit the first edge.
template <class T>
Representation<T> corrupted(const Representation<T>& r, Fault f) {
  Representation<T> c = r;
  c.name = r.name + " [" + fault_name(f) + "]";
  auto rho = r.rho;
  auto pi = r.pi;
  auto ops = r.ops;
  switch (f) {
    case Fault::sign_flip_edge:
    case Fault::scaled_edge: {
      cplx factor = f == Fault::sign_flip_edge ? cplx(-1.0) : cplx(1.5);
      c.rho = [rho, ops, factor](const Path& p, const Vector& x) {
        return p.length() == 1 && p.edges[0] == 0 ? ops.scale(factor, rho(p, x)) : rho(p, x);
      };
      break;
    }
    case Fault::zero_pi:
      c.pi = [ops](int, const Matrix&) { return ops.zero(); };
      c.rho = [rho, ops](const Path& p, const Vector& x) { return p.is_vertex() ? ops.zero() : rho(p, x); };
      break;
    case Fault::doubled_pi:
      c.pi = [pi, ops](int v, const Matrix& a) { return ops.scale(cplx(2.0), pi(v, a)); };
      c.rho = [rho, ops](const Path& p, const Vector& x) { return p.is_vertex() ? ops.scale(cplx(2.0), rho(p, x)) : rho(p, x); };
      break;
    case Fault::composite_sign:
      c.rho = [rho, ops](const Path& p, const Vector& x) { return p.length() >= 2 ? ops.scale(cplx(-1.0), rho(p, x)) : rho(p, x); };
      break;
  }
  return c;
}

/// Product-system view: psi_n(y) = sum over Lambda^n of rho_lambda(y_lambda).
template <class T>
T psi(const Representation<T>& r, const ProductSystemFibre& Y, const Vector& y) {
  T acc = r.ops.zero();
  for (const Path& p : Y.paths) {
    Vector c = Y.component(p, y);
    if (c.norm() == 0.0) continue;
    acc = r.ops.add(acc, r.rho(p, c));
  }
  return acc;
}

/// Multiplicativity of psi against Theta_{m,n} and its covariance via frames of Y_n.
template <class T>
Report check_product_system_rep(const LambdaSystem& s, const Representation<T>& r, const Degree& m, const Degree& n,
                                double tol = 1e-8) {
  Report rep("product system " + r.name);
  ProductSystemFibre Ym = product_fibre(s, m), Yn = product_fibre(s, n), Ymn = product_fibre(s, m + n);
  ProductMultiplication pm = product_multiplication(s, Ym, Yn, Ymn);
  const int dm = Ym.module->dim, dn = Yn.module->dim;
  double mult = 0, agree = 0;
  std::vector<T> pn;
  for (int j = 0; j < dn; ++j) pn.push_back(psi(r, Yn, basis_vector(dn, j)));
  for (int i = 0; i < dm; ++i) {
    Vector y = basis_vector(dm, i);
    T py = psi(r, Ym, y);
    for (int j = 0; j < dn; ++j) {
      Vector z = pm.theta * pm.tp.cls(y, basis_vector(dn, j));
      mult = std::max(mult, r.ops.dist(r.ops.mul(py, pn[j]), psi(r, Ymn, z)));
    }
  }
  for (const Path& p : Ym.paths) {
    ModulePtr X = s.module(p);
    for (int i = 0; i < X->dim; ++i) {
      Vector x = basis_vector(X->dim, i);
      agree = std::max(agree, r.ops.dist(psi(r, Ym, Ym.iota(p, x)), r.rho(p, x)));
    }
  }
  rep.add_residual("psi_multiplicative", mult, tol);
  rep.add_residual("psi_restricts_to_rho", agree, tol);

  // psi_0(a) = sum_i psi_n(phi_n(a) u_i) psi_n(u_i)^*
  FDAlgebra A = total_algebra(s);
  std::vector<int> uoff = unit_offsets(s);
  Matrix U = frame(*Yn.module);
  double cov = 0;
  for (int k = 0; k < A.dim(); ++k) {
    Matrix a = A.unit_matrix(k);
    int v = 0;
    while (v + 1 < s.graph().num_vertices() && uoff[v + 1] <= k) ++v;
    Matrix av = s.algebra(v).unit_matrix(k - uoff[v]);
    Matrix phin = Yn.module->act_left(a);
    T sum = r.ops.zero();
    for (Eigen::Index i = 0; i < U.cols(); ++i)
      sum = r.ops.add(sum, r.ops.mul(psi(r, Yn, phin * U.col(i)), r.ops.adj(psi(r, Yn, U.col(i)))));
    cov = std::max(cov, r.ops.dist(sum, r.pi(v, av)));
  }
  rep.add_residual("psi_covariant", cov, tol);
  return rep;
}

}  // namespace lsys
