#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <utility>
#include <vector>

#include "fdcstar.hpp"
#include "kgraph.hpp"

namespace lsys {

/// Raw finite presentation of a Lambda-system.
/// square_iso[i] belongs to graph.squares()[i] = (f,g,g',f') and maps the algebraic tensor
/// X_f (x) X_g to X_{g'} (x) X_{f'} in the edge modules' given coordinates.
struct SystemPresentation {
  KGraph graph;
  std::vector<FDAlgebra> vertex_alg;
  std::vector<Bimodule> edge_mod;
  std::vector<Matrix> square_iso;
};

class LambdaSystem {
 public:
  using Key = std::vector<int>;

  explicit LambdaSystem(SystemPresentation p, Tolerance tol = {}) : pres_(std::move(p)), tol_(tol) {
    const KGraph& g = pres_.graph;
    if (static_cast<int>(pres_.vertex_alg.size()) != g.num_vertices()) throw Error("one algebra per vertex required");
    if (static_cast<int>(pres_.edge_mod.size()) != g.num_edges()) throw Error("one module per edge required");
    if (pres_.square_iso.size() != g.squares().size()) throw Error("one unitary per square required");
    for (int v = 0; v < g.num_vertices(); ++v)
      vertex_.push_back(std::make_shared<Bimodule>(identity_correspondence(pres_.vertex_alg[v])));
    for (int e = 0; e < g.num_edges(); ++e) {
      const Bimodule& X = pres_.edge_mod[e];
      const Edge& ed = g.edge(e);
      if (X.left_alg != pres_.vertex_alg[ed.range] || X.right_alg != pres_.vertex_alg[ed.source])
        throw Error("module of edge '" + ed.id + "' is not an A_r(e)-A_s(e) correspondence");
      auto [Y, P] = orthonormalize(X, tol_.cut);
      edge_.push_back(std::make_shared<Bimodule>(std::move(Y)));
      change_.push_back(P);
    }
    for (size_t i = 0; i < g.squares().size(); ++i) ingest_square(i);
  }

  const KGraph& graph() const { return pres_.graph; }
  const SystemPresentation& presentation() const { return pres_; }
  const Tolerance& tolerance() const { return tol_; }
  const FDAlgebra& algebra(int v) const { return pres_.vertex_alg.at(v); }
  /// squares whose given isomorphism was replaced by its unitary polar part
  const std::vector<int>& polar_normalized() const { return polar_fixed_; }
  /// coordinate change x_given = P x_internal for edge e
  const Matrix& coordinate_change(int e) const { return change_.at(e); }

  static Key key(const Path& p) { return p.is_vertex() ? Key{-(p.range + 1)} : p.edges; }

  ModulePtr module(const Path& p) const { return module(key(p)); }
  const TensorProduct& pair(const Path& a, const Path& b) const { return pair(key(a), key(b)); }

  /// chi_{a,b} : X_a (x) X_b -> X_{ab}, in quotient coordinates of pair(a,b).
  const Matrix& chi(const Path& a, const Path& b) const {
    if (a.source != b.range) throw Error("chi: non-composable pair");
    std::lock_guard<std::recursive_mutex> lock(mu_);
    auto k = std::make_pair(key(a), key(b));
    auto it = chi_.find(k);
    if (it != chi_.end()) return it->second;
    Matrix m = compute_chi(a, b);
    return chi_.emplace(k, std::move(m)).first->second;
  }

  Vector chi_apply(const Path& a, const Path& b, const Vector& x, const Vector& y) const {
    return chi(a, b) * pair(a, b).cls(x, y);
  }

  /// i_{lambda,mu}^{lambda nu, mu nu}(T) for T : X_mu -> X_lambda.
  Matrix embed(const Path& lambda, const Path& mu, const Path& nu, const Matrix& T) const {
    if (lambda.source != mu.source || mu.source != nu.range) throw Error("embed: non-composable");
    if (nu.is_vertex()) return T;
    const TensorProduct& src = pair(mu, nu);
    const TensorProduct& dst = pair(lambda, nu);
    return chi(lambda, nu) * induced_map(T, src, dst) * chi(mu, nu).adjoint();
  }

  /// i_alpha^{alpha beta}(S)
  Matrix embed(const Path& alpha, const Path& beta, const Matrix& S) const { return embed(alpha, alpha, beta, S); }

  /// Left action of a in A_{r(lambda)} on X_lambda.
  Matrix phi(const Path& lambda, const Matrix& a) const { return module(lambda)->act_left(a); }

  ModulePtr module(const Key& k) const {
    if (k.size() == 1 && k[0] < 0) return vertex_.at(-k[0] - 1);
    if (k.size() == 1) return edge_.at(k[0]);
    return word_tensor(k).module;
  }

  const TensorProduct& pair(const Key& a, const Key& b) const {
    std::lock_guard<std::recursive_mutex> lock(mu_);
    if (b.size() == 1 && b[0] >= 0 && a[0] >= 0) {
      Key w = a;
      w.push_back(b[0]);
      return word_tensor(w);
    }
    auto k = std::make_pair(a, b);
    auto it = pairs_.find(k);
    if (it != pairs_.end()) return *it->second;
    auto t = std::make_shared<TensorProduct>(tensor(module(a), module(b), tol_.cut));
    return *pairs_.emplace(k, t).first->second;
  }

  /// Unitary on X_f (x) X_g -> X_{g'} (x) X_{f'} in quotient coordinates.
  const Matrix& square_unitary(int f, int g) const { return square_.at({f, g}); }

 private:
  // X_w = X_{w minus last} (x) X_{last} for words of length >= 2
  const TensorProduct& word_tensor(const Key& w) const {
    std::lock_guard<std::recursive_mutex> lock(mu_);
    auto it = words_.find(w);
    if (it != words_.end()) return *it->second;
    Key pre(w.begin(), w.end() - 1);
    auto t = std::make_shared<TensorProduct>(tensor(module(pre), edge_.at(w.back()), tol_.cut));
    return *words_.emplace(w, t).first->second;
  }

  void ingest_square(size_t i) {
    const KGraph& g = pres_.graph;
    const Square& s = g.squares()[i];
    const Matrix& raw = pres_.square_iso[i];
    const TensorProduct& src = word_tensor({s.f, s.g});
    const TensorProduct& dst = word_tensor({s.gp, s.fp});
    if (raw.rows() != dst.algebraic_dim() || raw.cols() != src.algebraic_dim())
      throw Error("square (" + g.edge(s.f).id + "," + g.edge(s.g).id + "): unitary has wrong shape");
    Matrix Pin = kron(change_[s.f], change_[s.g]);
    Matrix Pout = kron(change_[s.gp], change_[s.fp]);
    Matrix alg = Pout.fullPivLu().inverse() * raw * Pin;
    Matrix Q = dst.factor * alg * src.lift;
    if (Q.rows() != Q.cols())
      throw Error("square (" + g.edge(s.f).id + "," + g.edge(s.g).id + "): tensor dimensions differ");
    Eigen::JacobiSVD<Matrix> svd(Q, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    if (sv.size() && sv(sv.size() - 1) <= tol_.cut)
      throw Error("square (" + g.edge(s.f).id + "," + g.edge(s.g).id + "): map is not invertible");
    Matrix W = svd.matrixU() * svd.matrixV().adjoint();
    if ((W - Q).norm() > tol_.eq) polar_fixed_.push_back(static_cast<int>(i));
    square_[{s.f, s.g}] = W;
  }

  // X_a (x) X_b -> X_{a++b} for edge words a, b
  const Matrix& rebracket(const Key& a, const Key& b) const {
    std::lock_guard<std::recursive_mutex> lock(mu_);
    auto k = std::make_pair(a, b);
    auto it = rebr_.find(k);
    if (it != rebr_.end()) return it->second;
    Matrix m;
    if (b.size() == 1) {
      m = Matrix::Identity(pair(a, b).module->dim, pair(a, b).module->dim);
    } else {
      Key bp(b.begin(), b.end() - 1);
      Key ab(a);
      ab.insert(ab.end(), b.begin(), b.end());
      Key abp(a);
      abp.insert(abp.end(), bp.begin(), bp.end());
      const Matrix R = rebracket(a, bp) * pair(a, bp).factor;
      const int da = module(a)->dim, de = edge_.at(b.back())->dim;
      m = word_tensor(ab).factor * kron(R, Matrix::Identity(de, de)) * kron(Matrix::Identity(da, da), word_tensor(b).lift) *
          pair(a, b).lift;
    }
    return rebr_.emplace(k, std::move(m)).first->second;
  }

  // apply T : X_[w_p,w_{p+1}] -> X_[y,z] at positions p, p+1 of the word w
  Matrix local_swap(const Key& w, size_t p, const Key& yz, const Matrix& T) const {
    const size_t n = w.size();
    if (n == 2) return T;
    Key w2 = w;
    w2[p] = yz[0];
    w2[p + 1] = yz[1];
    if (p + 2 == n) {
      Key pre(w.begin(), w.end() - 2);
      Key old_pair{w[p], w[p + 1]};
      const int dp = module(pre)->dim;
      Matrix mid = pair(pre, yz).factor * kron(Matrix::Identity(dp, dp), T) * pair(pre, old_pair).lift;
      return rebracket(pre, yz) * mid * rebracket(pre, old_pair).adjoint();
    }
    Key pre(w.begin(), w.end() - 1);
    const int de = edge_.at(w.back())->dim;
    return word_tensor(w2).factor * kron(local_swap(pre, p, yz, T), Matrix::Identity(de, de)) * word_tensor(w).lift;
  }

  // X_w -> X_{sorted w} through square moves
  Matrix sort_word(const Key& w) const {
    const KGraph& g = pres_.graph;
    std::vector<int> swaps;
    g.sort_word(w, &swaps);
    Key cur = w;
    Matrix M = Matrix::Identity(module(w)->dim, module(w)->dim);
    for (int p : swaps) {
      auto fg = g.square_backward(cur[p], cur[p + 1]);
      Key yz{fg->first, fg->second};
      M = local_swap(cur, p, yz, square_.at(*fg).adjoint()) * M;
      cur[p] = yz[0];
      cur[p + 1] = yz[1];
    }
    return M;
  }

  Matrix compute_chi(const Path& a, const Path& b) const {
    const TensorProduct& tp = pair(a, b);
    ModulePtr Xa = module(a), Xb = module(b);
    if (a.is_vertex() || b.is_vertex()) {
      const int da = Xa->dim, db = Xb->dim;
      Matrix alg(a.is_vertex() ? db : da, da * db);
      if (a.is_vertex()) {
        // a (x) x -> a x ; X_a coordinates are matrix-unit coefficients
        for (int k = 0; k < da; ++k)
          for (int j = 0; j < db; ++j) alg.col(k * db + j) = Xb->left[k].col(j);
      } else {
        for (int i = 0; i < da; ++i)
          for (int k = 0; k < db; ++k) alg.col(i * db + k) = Xa->right[k].col(i);
      }
      return alg * tp.lift;
    }
    Key w = a.edges;
    w.insert(w.end(), b.edges.begin(), b.edges.end());
    return sort_word(w) * rebracket(a.edges, b.edges);
  }

  SystemPresentation pres_;
  Tolerance tol_;
  std::vector<ModulePtr> vertex_, edge_;
  std::vector<Matrix> change_;
  std::map<std::pair<int, int>, Matrix> square_;
  std::vector<int> polar_fixed_;
  mutable std::recursive_mutex mu_;
  mutable std::map<Key, std::shared_ptr<TensorProduct>> words_;
  mutable std::map<std::pair<Key, Key>, std::shared_ptr<TensorProduct>> pairs_;
  mutable std::map<std::pair<Key, Key>, Matrix> chi_, rebr_;
};

/// Y_n = sum over Lambda^n of X_lambda, a module over A = sum_v A_v.
struct ProductSystemFibre {
  Degree n;
  std::vector<Path> paths;
  std::vector<int> offset;
  std::map<Path, int> index;
  ModulePtr module;

  Vector iota(const Path& p, const Vector& x) const {
    int i = index.at(p);
    Vector y = Vector::Zero(module->dim);
    y.segment(offset[i], x.size()) = x;
    return y;
  }
  Vector component(const Path& p, const Vector& y) const {
    int i = index.at(p);
    int len = (i + 1 < static_cast<int>(offset.size()) ? offset[i + 1] : module->dim) - offset[i];
    return y.segment(offset[i], len);
  }
};

inline FDAlgebra total_algebra(const LambdaSystem& s) {
  std::vector<int> blocks;
  for (int v = 0; v < s.graph().num_vertices(); ++v)
    for (int b : s.algebra(v).blocks()) blocks.push_back(b);
  return FDAlgebra(blocks);
}

inline std::vector<int> unit_offsets(const LambdaSystem& s) {
  std::vector<int> off;
  int o = 0;
  for (int v = 0; v < s.graph().num_vertices(); ++v) {
    off.push_back(o);
    o += s.algebra(v).dim();
  }
  return off;
}

/// Element a_v of A_v placed in A = sum_w A_w.
inline Matrix embed_vertex_element(const LambdaSystem& s, int v, const Matrix& a) {
  FDAlgebra A = total_algebra(s);
  Vector c = Vector::Zero(A.dim());
  c.segment(unit_offsets(s)[v], s.algebra(v).dim()) = s.algebra(v).coords(a);
  return A.element(c);
}

inline ProductSystemFibre product_fibre(const LambdaSystem& s, const Degree& n) {
  ProductSystemFibre Y;
  Y.n = n;
  Y.paths = s.graph().paths_of_degree(n);
  FDAlgebra A = total_algebra(s);
  std::vector<int> uoff = unit_offsets(s);
  int dim = 0;
  for (size_t i = 0; i < Y.paths.size(); ++i) {
    Y.index[Y.paths[i]] = static_cast<int>(i);
    Y.offset.push_back(dim);
    dim += s.module(Y.paths[i])->dim;
  }
  auto M = std::make_shared<Bimodule>();
  M->left_alg = A;
  M->right_alg = A;
  M->dim = dim;
  M->left.assign(A.dim(), Matrix::Zero(dim, dim));
  M->right.assign(A.dim(), Matrix::Zero(dim, dim));
  M->inner.assign(A.dim(), Matrix::Zero(dim, dim));
  for (size_t i = 0; i < Y.paths.size(); ++i) {
    const Path& p = Y.paths[i];
    ModulePtr X = s.module(p);
    const int o = Y.offset[i], d = X->dim;
    for (int k = 0; k < s.algebra(p.range).dim(); ++k) M->left[uoff[p.range] + k].block(o, o, d, d) = X->left[k];
    for (int k = 0; k < s.algebra(p.source).dim(); ++k) {
      M->right[uoff[p.source] + k].block(o, o, d, d) = X->right[k];
      M->inner[uoff[p.source] + k].block(o, o, d, d) = X->inner[k];
    }
  }
  Y.module = M;
  return Y;
}

/// Theta_{m,n} : Y_m (x)_A Y_n -> Y_{m+n} together with the tensor product it is defined on.
struct ProductMultiplication {
  TensorProduct tp;
  Matrix theta;
};

inline ProductMultiplication product_multiplication(const LambdaSystem& s, const ProductSystemFibre& Ym,
                                                    const ProductSystemFibre& Yn, const ProductSystemFibre& Ymn) {
  ProductMultiplication pm{tensor(Ym.module, Yn.module, s.tolerance().cut), {}};
  const int dm = Ym.module->dim, dn = Yn.module->dim;
  Matrix alg = Matrix::Zero(Ymn.module->dim, dm * dn);
  for (const Path& a : Ym.paths)
    for (const Path& b : Yn.paths) {
      if (a.source != b.range) continue;
      Path ab = s.graph().compose(a, b);
      const Matrix& chi = s.chi(a, b);
      const TensorProduct& local = s.pair(a, b);
      const int da = s.module(a)->dim, db = s.module(b)->dim;
      const int oa = Ym.offset[Ym.index.at(a)], ob = Yn.offset[Yn.index.at(b)], oab = Ymn.offset[Ymn.index.at(ab)];
      Matrix block = chi * local.factor;  // (dim X_ab) x (da*db)
      for (int i = 0; i < da; ++i)
        for (int j = 0; j < db; ++j) alg.block(oab, (oa + i) * dn + (ob + j), block.rows(), 1) = block.col(i * db + j);
    }
  pm.theta = alg * pm.tp.lift;
  return pm;
}

/// Regularity, module axioms, unitarity of chi and coherence.
inline Report check_regular(const LambdaSystem& s, int chi_depth = 1) {
  const KGraph& g = s.graph();
  const Tolerance& tol = s.tolerance();
  Report rep("regular");
  rep.merge(verify_kgraph(g), "graph");
  for (int e = 0; e < g.num_edges(); ++e) {
    Report m = verify_bimodule(s.presentation().edge_mod[e], tol);
    rep.merge(m, "edge[" + g.edge(e).id + "]");
  }
  for (int i : s.polar_normalized()) {
    const Square& q = g.squares()[i];
    rep.add("square_polar", true, "square (" + g.edge(q.f).id + "," + g.edge(q.g).id + ") replaced by its unitary part");
  }
  if (!rep.ok()) return rep;
  for (const Square& q : g.squares()) {
    const Matrix& W = s.square_unitary(q.f, q.g);
    const TensorProduct& src = s.pair(g.edge_path(q.f), g.edge_path(q.g));
    const TensorProduct& dst = s.pair(g.edge_path(q.gp), g.edge_path(q.fp));
    double d = 0;
    for (int k = 0; k < src.module->left_alg.dim(); ++k)
      d = std::max(d, (W * src.module->left[k] - dst.module->left[k] * W).norm());
    d = std::max(d, right_linearity_defect(W, *src.module, *dst.module));
    rep.add_residual("square_bimodule[" + g.edge(q.f).id + "," + g.edge(q.g).id + "]", d, tol.eq);
  }
  // chi unitary and a bimodule map on short paths
  std::vector<Path> short_paths;
  for (const Degree& d : degrees_with_total_at_most(g.rank(), chi_depth)) {
    auto ps = g.paths_of_degree(d);
    short_paths.insert(short_paths.end(), ps.begin(), ps.end());
  }
  double unit = 0, bim = 0;
  for (const Path& a : short_paths)
    for (const Path& b : short_paths) {
      if (a.source != b.range) continue;
      const Matrix& c = s.chi(a, b);
      const TensorProduct& tp = s.pair(a, b);
      ModulePtr Xab = s.module(g.compose(a, b));
      if (c.rows() != c.cols()) {
        unit = std::max(unit, 1.0);
        continue;
      }
      unit = std::max(unit, (c.adjoint() * c - Matrix::Identity(c.cols(), c.cols())).norm());
      for (int k = 0; k < tp.module->left_alg.dim(); ++k)
        bim = std::max(bim, (c * tp.module->left[k] - Xab->left[k] * c).norm());
      bim = std::max(bim, right_linearity_defect(c, *tp.module, *Xab));
    }
  rep.add_residual("chi_unitary", unit, tol.eq);
  rep.add_residual("chi_bimodule", bim, tol.eq);

  // chi(ab,c)(chi(a,b) (x) 1) = chi(a,bc)(1 (x) chi(b,c)) on edge triples
  double coh = 0;
  int triples = 0;
  for (int e1 = 0; e1 < g.num_edges(); ++e1)
    for (int e2 = 0; e2 < g.num_edges(); ++e2)
      for (int e3 = 0; e3 < g.num_edges(); ++e3) {
        if (g.edge(e1).source != g.edge(e2).range || g.edge(e2).source != g.edge(e3).range) continue;
        Path a = g.edge_path(e1), b = g.edge_path(e2), c = g.edge_path(e3);
        Path ab = g.compose(a, b), bc = g.compose(b, c);
        const int da = s.module(a)->dim, db = s.module(b)->dim, dc = s.module(c)->dim;
        Matrix lhs = s.chi(ab, c) * s.pair(ab, c).factor * kron(s.chi(a, b) * s.pair(a, b).factor, Matrix::Identity(dc, dc));
        Matrix rhs = s.chi(a, bc) * s.pair(a, bc).factor * kron(Matrix::Identity(da, da), s.chi(b, c) * s.pair(b, c).factor);
        (void)db;
        coh = std::max(coh, (lhs - rhs).norm());
        ++triples;
      }
  rep.add_residual("chi_coherence", coh, tol.eq, std::to_string(triples) + " edge triples");
  return rep;
}

}  // namespace lsys
