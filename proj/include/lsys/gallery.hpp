#pragma once

#include <functional>
#include <string>
#include <vector>

#include "lsystem.hpp"

namespace lsys {

/// One vertex v with n loops e1..en of color 1.
inline KGraph bouquet(int n) {
  KGraph g(1);
  g.add_vertex("v");
  for (int i = 1; i <= n; ++i) g.add_edge("e" + std::to_string(i), 1, "v", "v");
  return g;
}

/// T_k: one vertex, one loop per color, squares xy = yx.
inline KGraph torus_graph(int k) {
  static const char* names[] = {"b", "r", "g", "y"};
  if (k < 1 || k > 4) throw Error("torus_graph supports 1 <= k <= 4");
  KGraph g(k);
  g.add_vertex("v");
  for (int i = 0; i < k; ++i) g.add_edge(names[i], i + 1, "v", "v");
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j) g.add_square(names[i], names[j], names[j], names[i]);
  return g;
}

/// 1-graph of a {0,1}-matrix: an edge eij with range vi and source vj whenever m[i][j] = 1.
inline KGraph matrix_graph(const std::vector<std::vector<int>>& m) {
  KGraph g(1);
  for (size_t i = 0; i < m.size(); ++i) g.add_vertex("v" + std::to_string(i + 1));
  for (size_t i = 0; i < m.size(); ++i)
    for (size_t j = 0; j < m[i].size(); ++j)
      if (m[i][j]) g.add_edge("e" + std::to_string(i + 1) + std::to_string(j + 1), 1, "v" + std::to_string(j + 1), "v" + std::to_string(i + 1));
  return g;
}

/// All A_v = C, all X_e = C, every square unitary = 1.
inline SystemPresentation trivial_system(const KGraph& g) {
  SystemPresentation p{g, {}, {}, {}};
  FDAlgebra C({1});
  p.vertex_alg.assign(g.num_vertices(), C);
  p.edge_mod.assign(g.num_edges(), identity_correspondence(C));
  p.square_iso.assign(g.squares().size(), Matrix::Identity(1, 1));
  return p;
}

using AlgebraMap = std::function<Matrix(const Matrix&)>;

inline Matrix unitary_conjugate(const Matrix& u, const Matrix& a) { return u * a * u.adjoint(); }

/// X_e = phi_e A_{s(e)} for unital *-homomorphisms phi_e : A_{r(e)} -> A_{s(e)};
/// chi(x (x) y) = phi_beta(x) y, so the square unitary sends x (x) y to 1 (x) phi_g(x) y.
inline SystemPresentation homomorphism_system(const KGraph& g, const std::vector<FDAlgebra>& algs,
                                              const std::vector<AlgebraMap>& phi) {
  SystemPresentation p{g, algs, {}, {}};
  for (int e = 0; e < g.num_edges(); ++e) {
    const FDAlgebra &A = algs.at(g.edge(e).range), &B = algs.at(g.edge(e).source);
    std::vector<Matrix> images;
    for (int k = 0; k < A.dim(); ++k) images.push_back(phi.at(e)(A.unit_matrix(k)));
    p.edge_mod.push_back(homomorphism_correspondence(A, B, images));
  }
  for (const Square& s : g.squares()) {
    const FDAlgebra& Af = algs.at(g.edge(s.f).source);  // coordinates of X_f
    const FDAlgebra& Ag = algs.at(g.edge(s.g).source);  // coordinates of X_g
    const FDAlgebra& Agp = algs.at(g.edge(s.gp).source);
    Vector one = Agp.coords(Agp.identity());
    Matrix S(Agp.dim() * Ag.dim(), Af.dim() * Ag.dim());
    for (int k = 0; k < Af.dim(); ++k)
      for (int l = 0; l < Ag.dim(); ++l) {
        Vector z = Ag.coords(phi.at(s.g)(Af.unit_matrix(k)) * Ag.unit_matrix(l));
        S.col(k * Ag.dim() + l) = kron(one, z);
      }
    p.square_iso.push_back(S);
  }
  return p;
}

inline Matrix pauli_z() {
  Matrix u(2, 2);
  u << 1, 0, 0, -1;
  return u;
}
inline Matrix flip() {
  Matrix u(2, 2);
  u << 0, 1, 1, 0;
  return u;
}

inline AlgebraMap ad(const Matrix& u) {
  return [u](const Matrix& a) { return unitary_conjugate(u, a); };
}

/// The B_2 system on A = M_2 with X_{e_i} = _{alpha_i^{-1}} A, alpha_i = Ad(u_i).
inline SystemPresentation twisted_o2() {
  KGraph g = bouquet(2);
  FDAlgebra A({2});
  return homomorphism_system(g, {A}, {ad(pauli_z().adjoint()), ad(flip().adjoint())});
}

/// T_k with A = M_2 and commuting automorphisms Ad(u_i).
inline SystemPresentation zk_crossed(int k = 2) {
  KGraph g = torus_graph(k);
  FDAlgebra A({2});
  std::vector<Matrix> us{pauli_z(), flip(), pauli_z() * flip(), Matrix::Identity(2, 2)};
  std::vector<AlgebraMap> phi;
  for (int i = 0; i < k; ++i) phi.push_back(ad(us[i]));
  return homomorphism_system(g, {A}, phi);
}

/// Two vertices v (C) and w (M_2); e : w -> v carries row vectors, f : v -> w column vectors.
inline SystemPresentation sse() {
  KGraph g(1);
  g.add_vertex("v");
  g.add_vertex("w");
  g.add_edge("e", 1, "w", "v");
  g.add_edge("f", 1, "v", "w");
  FDAlgebra C({1}), M2({2});
  std::vector<Matrix> rows, cols;
  for (int i = 0; i < 2; ++i) {
    Matrix r = Matrix::Zero(1, 2), c = Matrix::Zero(2, 1);
    r(0, i) = 1;
    c(i, 0) = 1;
    rows.push_back(r);
    cols.push_back(c);
  }
  Bimodule Xe = concrete_module(C, M2, rows, {Matrix::Identity(1, 1)});
  Bimodule Xf = concrete_module(M2, C, cols, unit_matrices(M2));
  return {g, {C, M2}, {Xe, Xf}, {}};
}

/// Lambda_Sigma for Sigma = [[1,1],[1,0]] with A_i = M_2 and twisted identity correspondences.
inline SystemPresentation pwy_block() {
  KGraph g = matrix_graph({{1, 1}, {1, 0}});
  FDAlgebra A({2});
  Matrix id = Matrix::Identity(2, 2);
  // edges in creation order: e11, e12, e21
  return homomorphism_system(g, {A, A}, {ad(pauli_z()), ad(id), ad(flip())});
}

inline std::vector<std::string> gallery_names() { return {"trivial-b2", "sse", "zk-crossed", "twisted-o2", "pwy-block"}; }

inline SystemPresentation gallery(const std::string& name, int k = 2) {
  if (name == "trivial-b2") return trivial_system(bouquet(2));
  if (name == "sse") return sse();
  if (name == "zk-crossed") return zk_crossed(k);
  if (name == "twisted-o2") return twisted_o2();
  if (name == "pwy-block") return pwy_block();
  throw Error("unknown gallery '" + name + "'");
}

}  // namespace lsys
