#pragma once

#include <Eigen/Dense>
#include <complex>
#include <memory>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "kgraph.hpp"
#include "report.hpp"

namespace lsys {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

struct Tolerance {
  double eq = 1e-9;     // equality of computed quantities
  double cut = 1e-10;   // Gram-kernel and rank cuts
};

inline Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix r(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) r.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return r;
}

inline double spectral_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  return Eigen::JacobiSVD<Matrix>(m).singularValues()(0);
}

inline int numeric_rank(const Matrix& m, double cut) {
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<Matrix> svd(m);
  const auto& s = svd.singularValues();
  double scale = std::max(1.0, s(0));
  int r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > cut * scale) ++r;
  return r;
}

inline Matrix hermitian_function(const Matrix& h, double (*f)(double)) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (h + h.adjoint()));
  Eigen::VectorXd ev = es.eigenvalues();
  for (Eigen::Index i = 0; i < ev.size(); ++i) ev(i) = f(ev(i));
  return es.eigenvectors() * ev.cast<cplx>().asDiagonal() * es.eigenvectors().adjoint();
}

inline Matrix random_matrix(std::mt19937_64& rng, Eigen::Index r, Eigen::Index c) {
  std::normal_distribution<double> n(0.0, 1.0);
  Matrix m(r, c);
  for (Eigen::Index i = 0; i < r; ++i)
    for (Eigen::Index j = 0; j < c; ++j) m(i, j) = cplx(n(rng), n(rng));
  return m;
}

inline Vector random_vector(std::mt19937_64& rng, Eigen::Index n) { return random_matrix(rng, n, 1).col(0); }

/// Direct sum of full matrix algebras M_{n_1} + ... + M_{n_r}, elements stored as block-diagonal matrices.
class FDAlgebra {
 public:
  struct Unit {
    int block, row, col;
  };

  FDAlgebra() = default;
  explicit FDAlgebra(std::vector<int> blocks) : blocks_(std::move(blocks)) {
    int off = 0;
    for (int n : blocks_) {
      if (n <= 0) throw Error("algebra block sizes must be positive");
      offsets_.push_back(off);
      off += n;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) units_.push_back({static_cast<int>(offsets_.size()) - 1, i, j});
    }
    size_ = off;
  }

  const std::vector<int>& blocks() const { return blocks_; }
  int size() const { return size_; }
  int dim() const { return static_cast<int>(units_.size()); }
  const Unit& unit(int k) const { return units_.at(k); }
  int offset(int block) const { return offsets_.at(block); }

  Matrix unit_matrix(int k) const {
    Matrix m = Matrix::Zero(size_, size_);
    const Unit& u = units_.at(k);
    m(offsets_[u.block] + u.row, offsets_[u.block] + u.col) = 1.0;
    return m;
  }
  bool unit_is_diagonal(int k) const { return units_[k].row == units_[k].col; }

  Matrix identity() const { return Matrix::Identity(size_, size_); }
  Matrix zero() const { return Matrix::Zero(size_, size_); }

  Vector coords(const Matrix& a) const {
    Vector c(dim());
    for (int k = 0; k < dim(); ++k) {
      const Unit& u = units_[k];
      c(k) = a(offsets_[u.block] + u.row, offsets_[u.block] + u.col);
    }
    return c;
  }

  Matrix element(const Vector& c) const {
    Matrix m = zero();
    for (int k = 0; k < dim(); ++k) {
      const Unit& u = units_[k];
      m(offsets_[u.block] + u.row, offsets_[u.block] + u.col) = c(k);
    }
    return m;
  }

  // distance of a from the block-diagonal subspace
  double off_block_norm(const Matrix& a) const { return (a - element(coords(a))).norm(); }

  Matrix random_element(std::mt19937_64& rng) const { return element(random_vector(rng, dim())); }

  friend bool operator==(const FDAlgebra& a, const FDAlgebra& b) { return a.blocks_ == b.blocks_; }
  friend bool operator!=(const FDAlgebra& a, const FDAlgebra& b) { return !(a == b); }

  std::string str() const {
    std::string s;
    for (size_t i = 0; i < blocks_.size(); ++i) s += (i ? "+" : "") + std::string("M") + std::to_string(blocks_[i]);
    return s;
  }

 private:
  std::vector<int> blocks_;
  std::vector<int> offsets_;
  std::vector<Unit> units_;
  int size_ = 0;
};

/// Finite-dimensional A-B correspondence given in coordinates.
/// left[k]: matrix of the left action of the k-th matrix unit of A.
/// right[k]: x . E_k = right[k] * x for the k-th matrix unit of B.
/// inner[k]: coefficient of E_k in <x,y> is x^H inner[k] y.
struct Bimodule {
  FDAlgebra left_alg;
  FDAlgebra right_alg;
  int dim = 0;
  std::vector<Matrix> left;
  std::vector<Matrix> right;
  std::vector<Matrix> inner;

  Matrix act_left(const Matrix& a) const {
    Vector c = left_alg.coords(a);
    Matrix m = Matrix::Zero(dim, dim);
    for (int k = 0; k < left_alg.dim(); ++k)
      if (c(k) != cplx(0)) m += c(k) * left[k];
    return m;
  }
  Matrix act_right(const Matrix& b) const {
    Vector c = right_alg.coords(b);
    Matrix m = Matrix::Zero(dim, dim);
    for (int k = 0; k < right_alg.dim(); ++k)
      if (c(k) != cplx(0)) m += c(k) * right[k];
    return m;
  }
  Matrix inner_product(const Vector& x, const Vector& y) const {
    Vector c(right_alg.dim());
    for (int k = 0; k < right_alg.dim(); ++k) c(k) = x.dot(inner[k] * y);
    return right_alg.element(c);
  }
  /// Scalar Gram form tr(<x,y>); positive definite for a definite module.
  Matrix gram() const {
    Matrix h = Matrix::Zero(dim, dim);
    for (int k = 0; k < right_alg.dim(); ++k)
      if (right_alg.unit_is_diagonal(k)) h += inner[k];
    return h;
  }
  double norm(const Vector& x) const { return std::sqrt(spectral_norm(inner_product(x, x))); }
};

using ModulePtr = std::shared_ptr<const Bimodule>;

/// Module with basis given by concrete p x q matrices, right action by multiplication with
/// B (block diagonal q x q), inner product x^* y and left action by the given p x p images of A's units.
inline Bimodule concrete_module(const FDAlgebra& A, const FDAlgebra& B, const std::vector<Matrix>& basis,
                                const std::vector<Matrix>& left_images) {
  if (basis.empty()) throw Error("empty module basis");
  const Eigen::Index p = basis[0].rows(), q = basis[0].cols();
  if (q != B.size()) throw Error("module basis width must match the right algebra");
  if (static_cast<int>(left_images.size()) != A.dim()) throw Error("left action must give one image per unit");
  const int d = static_cast<int>(basis.size());
  Matrix stack(p * q, d);
  for (int i = 0; i < d; ++i) stack.col(i) = basis[i].reshaped();
  auto qr = stack.colPivHouseholderQr();
  if (qr.rank() != d) throw Error("module basis is linearly dependent");
  auto coords = [&](const Matrix& x) -> Vector {
    Vector v = x.reshaped();
    Vector c = qr.solve(v);
    if ((stack * c - v).norm() > 1e-9 * std::max(1.0, v.norm())) throw Error("module basis not closed under the actions");
    return c;
  };
  Bimodule X;
  X.left_alg = A;
  X.right_alg = B;
  X.dim = d;
  for (int k = 0; k < A.dim(); ++k) {
    Matrix m(d, d);
    for (int j = 0; j < d; ++j) m.col(j) = coords(left_images[k] * basis[j]);
    X.left.push_back(m);
  }
  for (int k = 0; k < B.dim(); ++k) {
    Matrix e = B.unit_matrix(k);
    Matrix m(d, d);
    for (int j = 0; j < d; ++j) m.col(j) = coords(basis[j] * e);
    X.right.push_back(m);
  }
  for (int k = 0; k < B.dim(); ++k) X.inner.push_back(Matrix::Zero(d, d));
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      Vector c = B.coords(basis[i].adjoint() * basis[j]);
      for (int k = 0; k < B.dim(); ++k) X.inner[k](i, j) = c(k);
    }
  return X;
}

inline std::vector<Matrix> unit_matrices(const FDAlgebra& A) {
  std::vector<Matrix> u;
  for (int k = 0; k < A.dim(); ++k) u.push_back(A.unit_matrix(k));
  return u;
}

/// A as an A-A correspondence; coordinates are matrix-unit coefficients.
inline Bimodule identity_correspondence(const FDAlgebra& A) {
  auto u = unit_matrices(A);
  return concrete_module(A, A, u, u);
}

/// phi B: the module B with <x,y> = x^* y and a . x = phi(a) x. phi_units[k] = phi(E_k).
inline Bimodule homomorphism_correspondence(const FDAlgebra& A, const FDAlgebra& B, const std::vector<Matrix>& phi_units) {
  return concrete_module(A, B, unit_matrices(B), phi_units);
}

/// Module from raw data with inner-product table table[i][j] = <b_i, b_j> in B.
inline Bimodule module_from_table(const FDAlgebra& A, const FDAlgebra& B, int dim, std::vector<Matrix> left,
                                  std::vector<Matrix> right, const std::vector<std::vector<Matrix>>& table) {
  Bimodule X;
  X.left_alg = A;
  X.right_alg = B;
  X.dim = dim;
  X.left = std::move(left);
  X.right = std::move(right);
  for (int k = 0; k < B.dim(); ++k) X.inner.push_back(Matrix::Zero(dim, dim));
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) {
      Vector c = B.coords(table.at(i).at(j));
      for (int k = 0; k < B.dim(); ++k) X.inner[k](i, j) = c(k);
    }
  return X;
}

inline std::vector<std::vector<Matrix>> inner_table(const Bimodule& X) {
  std::vector<std::vector<Matrix>> t(X.dim, std::vector<Matrix>(X.dim));
  for (int i = 0; i < X.dim; ++i)
    for (int j = 0; j < X.dim; ++j) t[i][j] = X.inner_product(Vector::Unit(X.dim, i), Vector::Unit(X.dim, j));
  return t;
}

/// Square root of the Gram form and its inverse (pseudo-inverse with cut).
struct GramRoots {
  Matrix half;
  Matrix inv_half;
  Matrix inv;
  double min_eig = 0.0;
};

inline GramRoots gram_roots(const Bimodule& X, double cut = 1e-10) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (X.gram() + X.gram().adjoint()));
  Eigen::VectorXd ev = es.eigenvalues();
  Eigen::VectorXd h(ev.size()), ih(ev.size()), iv(ev.size());
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    double e = ev(i);
    h(i) = e > 0 ? std::sqrt(e) : 0.0;
    ih(i) = e > cut ? 1.0 / std::sqrt(e) : 0.0;
    iv(i) = e > cut ? 1.0 / e : 0.0;
  }
  const Matrix& V = es.eigenvectors();
  GramRoots r;
  r.half = V * h.cast<cplx>().asDiagonal() * V.adjoint();
  r.inv_half = V * ih.cast<cplx>().asDiagonal() * V.adjoint();
  r.inv = V * iv.cast<cplx>().asDiagonal() * V.adjoint();
  r.min_eig = ev.size() ? ev(0) : 0.0;
  return r;
}

/// Adjoint of T : X -> Y with respect to the module inner products.
inline Matrix adjoint(const Matrix& T, const Bimodule& X, const Bimodule& Y, double cut = 1e-10) {
  return gram_roots(X, cut).inv * T.adjoint() * Y.gram();
}

/// Operator norm of T : X -> Y (C*-norm of the compact operator).
inline double op_norm(const Matrix& T, const Bimodule& X, const Bimodule& Y, double cut = 1e-10) {
  return spectral_norm(gram_roots(Y, cut).half * T * gram_roots(X, cut).inv_half);
}

/// Re-express X in coordinates orthonormal for the Gram form. Returns the module and P with x_old = P x_new.
inline std::pair<Bimodule, Matrix> orthonormalize(const Bimodule& X, double cut = 1e-10) {
  GramRoots g = gram_roots(X, cut);
  if (g.min_eig <= cut) throw Error("module Gram form is not definite");
  const Matrix& P = g.inv_half;
  const Matrix& Pi = g.half;
  Bimodule Y = X;
  for (auto& m : Y.left) m = Pi * m * P;
  for (auto& m : Y.right) m = Pi * m * P;
  for (auto& m : Y.inner) m = P.adjoint() * m * P;
  return {Y, P};
}

inline bool is_orthonormal(const Bimodule& X, double tol = 1e-12) {
  return (X.gram() - Matrix::Identity(X.dim, X.dim)).norm() <= tol;
}

/// Right-linear map between modules over the same right algebra.
struct CompactMap {
  ModulePtr domain;
  ModulePtr codomain;
  Matrix m;

  CompactMap adjoint() const { return {codomain, domain, lsys::adjoint(m, *domain, *codomain)}; }
  double norm() const { return op_norm(m, *domain, *codomain); }
};

/// theta_{xi,eta}(zeta) = xi <eta, zeta>, as a matrix from X (eta's module) to Y (xi's module).
inline Matrix rank_one(const Bimodule& Y, const Vector& xi, const Bimodule& X, const Vector& eta) {
  if (X.right_alg != Y.right_alg) throw Error("rank_one: right algebra mismatch");
  Matrix T = Matrix::Zero(Y.dim, X.dim);
  for (int k = 0; k < X.right_alg.dim(); ++k) T += (Y.right[k] * xi) * (eta.adjoint() * X.inner[k]);
  return T;
}

inline CompactMap rank_one(const ModulePtr& Y, const Vector& xi, const ModulePtr& X, const Vector& eta) {
  return {X, Y, rank_one(*Y, xi, *X, eta)};
}

/// Is T right B-linear from X to Y?
inline double right_linearity_defect(const Matrix& T, const Bimodule& X, const Bimodule& Y) {
  double d = 0.0;
  for (int k = 0; k < X.right_alg.dim(); ++k) d = std::max(d, (T * X.right[k] - Y.right[k] * T).norm());
  return d;
}

/// Parseval frame u = S^{-1/2} w where S = sum theta_{w,w}; columns of W generate X.
inline Matrix frame_from(const Bimodule& X, const Matrix& W, double cut = 1e-10) {
  Matrix S = Matrix::Zero(X.dim, X.dim);
  for (Eigen::Index j = 0; j < W.cols(); ++j) S += rank_one(X, W.col(j), X, W.col(j));
  GramRoots g = gram_roots(X, cut);
  if (g.min_eig <= cut) throw Error("frame: module is not definite");
  // S is self-adjoint for the Gram form; pass to orthonormal coordinates for functional calculus.
  Matrix So = g.half * S * g.inv_half;
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (So + So.adjoint()));
  if (es.eigenvalues()(0) <= cut) throw Error("frame: generators do not span the module");
  Eigen::VectorXd ev = es.eigenvalues();
  for (Eigen::Index i = 0; i < ev.size(); ++i) ev(i) = 1.0 / std::sqrt(ev(i));
  Matrix So_ih = es.eigenvectors() * ev.cast<cplx>().asDiagonal() * es.eigenvectors().adjoint();
  Matrix S_ih = g.inv_half * So_ih * g.half;
  return S_ih * W;
}

/// Frame built from the coordinate basis.
inline Matrix frame(const Bimodule& X, double cut = 1e-10) { return frame_from(X, Matrix::Identity(X.dim, X.dim), cut); }

inline Matrix frame_sum(const Bimodule& X, const Matrix& U) {
  Matrix S = Matrix::Zero(X.dim, X.dim);
  for (Eigen::Index j = 0; j < U.cols(); ++j) S += rank_one(X, U.col(j), X, U.col(j));
  return S;
}

struct Positivity {
  bool positive;
  double min_eig;
  double hermitian_defect;
};

inline Positivity positivity(const Matrix& a, double tol = 1e-9) {
  double hd = (a - a.adjoint()).norm();
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (a + a.adjoint()), Eigen::EigenvaluesOnly);
  double me = a.rows() ? es.eigenvalues()(0) : 0.0;
  return {hd <= tol && me >= -tol, me, hd};
}

/// Positivity of T in K(X).
inline Positivity positivity(const Matrix& T, const Bimodule& X, double tol = 1e-9) {
  GramRoots g = gram_roots(X);
  return positivity(g.half * T * g.inv_half, tol);
}

/// X (A-B) tensor Y (B-C) over B.
struct TensorProduct {
  ModulePtr left;
  ModulePtr right;
  ModulePtr module;
  Matrix factor;  // class(x (x) y) = factor * kron(x, y)
  Matrix lift;    // representative of each quotient basis vector; factor * lift = I
  int algebraic_dim() const { return left->dim * right->dim; }
  Vector cls(const Vector& x, const Vector& y) const { return factor * kron(x, y); }
};

inline TensorProduct tensor(const ModulePtr& X, const ModulePtr& Y, double cut = 1e-10) {
  if (X->right_alg != Y->left_alg) throw Error("tensor: middle algebras differ");
  const FDAlgebra& B = X->right_alg;
  const FDAlgebra& C = Y->right_alg;
  const int dx = X->dim, dy = Y->dim, n = dx * dy;
  std::vector<Matrix> LY(B.dim());
  for (int m = 0; m < B.dim(); ++m) LY[m] = Y->left[m];
  // inner units of the algebraic tensor: M_k = sum_m ipX_m (x) (ipY_k LY_m)
  std::vector<Matrix> M(C.dim(), Matrix::Zero(n, n));
  for (int k = 0; k < C.dim(); ++k)
    for (int m = 0; m < B.dim(); ++m) {
      if (X->inner[m].isZero(0.0)) continue;
      M[k] += kron(X->inner[m], Y->inner[k] * LY[m]);
    }
  Matrix H = Matrix::Zero(n, n);
  for (int k = 0; k < C.dim(); ++k)
    if (C.unit_is_diagonal(k)) H += M[k];
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (H + H.adjoint()));
  const Eigen::VectorXd& ev = es.eigenvalues();
  double scale = std::max(1.0, ev.size() ? ev(ev.size() - 1) : 0.0);
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = ev.size() - 1; i >= 0; --i)
    if (ev(i) > cut * scale) keep.push_back(i);
  const int r = static_cast<int>(keep.size());
  Matrix F(r, n), U(n, r);
  for (int j = 0; j < r; ++j) {
    double lam = ev(keep[j]);
    Vector v = es.eigenvectors().col(keep[j]);
    // fix the phase of each eigenvector for reproducibility
    Eigen::Index piv = 0;
    v.cwiseAbs().maxCoeff(&piv);
    v *= std::abs(v(piv)) / v(piv);
    F.row(j) = std::sqrt(lam) * v.adjoint();
    U.col(j) = v / std::sqrt(lam);
  }
  auto Z = std::make_shared<Bimodule>();
  Z->left_alg = X->left_alg;
  Z->right_alg = C;
  Z->dim = r;
  const Matrix Iy = Matrix::Identity(dy, dy), Ix = Matrix::Identity(dx, dx);
  for (int k = 0; k < X->left_alg.dim(); ++k) Z->left.push_back(F * kron(X->left[k], Iy) * U);
  for (int k = 0; k < C.dim(); ++k) Z->right.push_back(F * kron(Ix, Y->right[k]) * U);
  for (int k = 0; k < C.dim(); ++k) Z->inner.push_back(U.adjoint() * M[k] * U);
  return {X, Y, Z, F, U};
}

/// T (x) 1 : X (x) Y -> X' (x) Y for T : X -> X'.
inline Matrix induced_map(const Matrix& T, const TensorProduct& src, const TensorProduct& dst) {
  const int dy = src.right->dim;
  return dst.factor * kron(T, Matrix::Identity(dy, dy)) * src.lift;
}

/// Hilbert-module and correspondence axioms on a basis.
inline Report verify_bimodule(const Bimodule& X, const Tolerance& tol = {}) {
  Report rep("bimodule");
  const FDAlgebra &A = X.left_alg, &B = X.right_alg;
  const int d = X.dim;
  bool shapes = static_cast<int>(X.left.size()) == A.dim() && static_cast<int>(X.right.size()) == B.dim() &&
                static_cast<int>(X.inner.size()) == B.dim() && d > 0;
  for (const auto* v : {&X.left, &X.right, &X.inner})
    for (const auto& m : *v) shapes = shapes && m.rows() == d && m.cols() == d;
  rep.add("shapes", shapes);
  if (!shapes) return rep;

  auto unit_product = [](const FDAlgebra& alg, int a, int b) -> int {
    const auto &ua = alg.unit(a), &ub = alg.unit(b);
    if (ua.block != ub.block || ua.col != ub.row) return -1;
    for (int k = 0; k < alg.dim(); ++k) {
      const auto& u = alg.unit(k);
      if (u.block == ua.block && u.row == ua.row && u.col == ub.col) return k;
    }
    return -1;
  };
  const Matrix Z = Matrix::Zero(d, d), I = Matrix::Identity(d, d);

  double lh = 0, rh = 0, bim = 0;
  for (int a = 0; a < A.dim(); ++a)
    for (int b = 0; b < A.dim(); ++b) {
      int p = unit_product(A, a, b);
      lh = std::max(lh, (X.left[a] * X.left[b] - (p < 0 ? Z : X.left[p])).norm());
    }
  for (int a = 0; a < B.dim(); ++a)
    for (int b = 0; b < B.dim(); ++b) {
      int p = unit_product(B, a, b);
      rh = std::max(rh, (X.right[b] * X.right[a] - (p < 0 ? Z : X.right[p])).norm());
    }
  for (int a = 0; a < A.dim(); ++a)
    for (int b = 0; b < B.dim(); ++b) bim = std::max(bim, (X.left[a] * X.right[b] - X.right[b] * X.left[a]).norm());
  rep.add_residual("left_homomorphism", lh, tol.eq);
  rep.add_residual("right_action", rh, tol.eq);
  rep.add_residual("right_unit", (X.act_right(B.identity()) - I).norm(), tol.eq);
  rep.add_residual("commuting_actions", bim, tol.eq);

  auto table = inner_table(X);
  double rl = 0, herm = 0, adj = 0;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      herm = std::max(herm, (table[i][j].adjoint() - table[j][i]).norm());
      for (int k = 0; k < B.dim(); ++k) {
        Matrix lhs = X.inner_product(Vector::Unit(d, i), X.right[k] * Vector::Unit(d, j));
        rl = std::max(rl, (lhs - table[i][j] * B.unit_matrix(k)).norm());
      }
      for (int a = 0; a < A.dim(); ++a) {
        Matrix ea = A.unit_matrix(a);
        Matrix lhs = X.inner_product(X.left[a] * Vector::Unit(d, i), Vector::Unit(d, j));
        Matrix rhs = X.inner_product(Vector::Unit(d, i), X.act_left(ea.adjoint()) * Vector::Unit(d, j));
        adj = std::max(adj, (lhs - rhs).norm());
      }
    }
  rep.add_residual("inner_right_linear", rl, tol.eq);
  rep.add_residual("inner_hermitian", herm, tol.eq);
  rep.add_residual("left_adjointable", adj, tol.eq);

  double offb = 0;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) offb = std::max(offb, B.off_block_norm(table[i][j]));
  rep.add_residual("inner_in_algebra", offb, tol.eq);

  // [<b_i, b_j>] must be positive in M_d(B)
  const int N = B.size();
  Matrix big(d * N, d * N);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) big.block(i * N, j * N, N, N) = table[i][j];
  Positivity pos = positivity(big, tol.eq);
  rep.add("positive", pos.positive, "min eigenvalue " + format_double(pos.min_eig));
  GramRoots g = gram_roots(X, tol.cut);
  rep.add("definite", g.min_eig > tol.cut, "min Gram eigenvalue " + format_double(g.min_eig));

  Matrix span(B.dim(), d * d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) span.col(i * d + j) = B.coords(table[i][j]);
  int fr = numeric_rank(span, tol.cut);
  rep.add("full", fr == B.dim(), "span rank " + std::to_string(fr) + " of " + std::to_string(B.dim()));
  int nr = numeric_rank(X.act_left(A.identity()), tol.cut);
  rep.add("nondegenerate", nr == d, "rank of left unit " + std::to_string(nr) + " of " + std::to_string(d));
  Matrix lv(d * d, A.dim());
  for (int a = 0; a < A.dim(); ++a) lv.col(a) = X.left[a].reshaped();
  int ir = numeric_rank(lv, tol.cut);
  rep.add("left_injective", ir == A.dim(), "rank " + std::to_string(ir) + " of " + std::to_string(A.dim()));
  return rep;
}

/// Basis (columns of vec) of the space of right-linear maps X -> Y.
inline std::vector<Matrix> compact_basis(const Bimodule& X, const Bimodule& Y, double cut = 1e-10) {
  const int dx = X.dim, dy = Y.dim;
  const int B = X.right_alg.dim();
  // vec(T R_X - R_Y T) = (R_X^T (x) I - I (x) R_Y) vec(T)
  Matrix sys(B * dx * dy, dx * dy);
  const Matrix Ix = Matrix::Identity(dx, dx), Iy = Matrix::Identity(dy, dy);
  for (int k = 0; k < B; ++k)
    sys.block(k * dx * dy, 0, dx * dy, dx * dy) = kron(X.right[k].transpose(), Iy) - kron(Ix, Y.right[k]);
  Eigen::JacobiSVD<Matrix> svd(sys, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  int rank = 0;
  double scale = std::max(1.0, s.size() ? s(0) : 0.0);
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > cut * scale) ++rank;
  std::vector<Matrix> out;
  for (int j = rank; j < dx * dy; ++j) out.push_back(svd.matrixV().col(j).reshaped(dy, dx));
  return out;
}

}  // namespace lsys
