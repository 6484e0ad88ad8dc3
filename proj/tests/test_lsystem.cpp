#include <gtest/gtest.h>

#include "lsys/lsystem.hpp"
#include "oracles.hpp"

using namespace lsys;

namespace {

std::vector<std::pair<std::string, SystemPresentation>> all_systems() {
  auto out = oracle::systems();
  out.emplace_back("zk-crossed-1", zk_crossed(1));
  out.emplace_back("zk-crossed-3", zk_crossed(3));
  return out;
}

// dim X_lambda read off the construction of each gallery system
int expected_dim(const std::string& name, const LambdaSystem& s, const Path& p) {
  if (name == "sse") return s.algebra(p.range).size() * s.algebra(p.source).size();
  return s.algebra(p.source).dim();
}

std::vector<Path> paths_up_to(const KGraph& g, int t) { return oracle::all_paths_total(g, t); }

Matrix any_compact(const LambdaSystem& s, const Path& lambda, const Path& mu, std::mt19937_64& rng) {
  auto basis = compact_basis(*s.module(mu), *s.module(lambda), s.tolerance().cut);
  Matrix T = Matrix::Zero(s.module(lambda)->dim, s.module(mu)->dim);
  std::normal_distribution<double> n;
  for (const Matrix& b : basis) T += cplx(n(rng), n(rng)) * b;
  return T;
}

}  // namespace

TEST(LambdaSystem, GallerySystemsAreRegular) {
  for (const auto& [name, p] : all_systems()) {
    LambdaSystem s(p);
    Report r = check_regular(s, 2);
    EXPECT_TRUE(r.ok()) << name;
    EXPECT_TRUE(s.polar_normalized().empty()) << name;
  }
}

TEST(LambdaSystem, ModuleDimensions) {
  for (const auto& [name, p] : all_systems()) {
    LambdaSystem s(p);
    for (const Path& l : paths_up_to(s.graph(), 3)) EXPECT_EQ(s.module(l)->dim, expected_dim(name, s, l)) << name << " " << s.graph().str(l);
  }
  LambdaSystem s(sse());
  EXPECT_EQ(s.module(s.graph().parse_path("e,f"))->dim, 1);
  EXPECT_EQ(s.module(s.graph().parse_path("f,e"))->dim, 4);
}

TEST(LambdaSystem, ChiIsCoherentOnShortPaths) {
  // chi(ab,c)(chi(a,b) (x) 1) = chi(a,bc)(1 (x) chi(b,c)) for arbitrary short paths, vertices included
  for (const auto& [name, p] : oracle::systems()) {
    LambdaSystem s(p);
    const KGraph& g = s.graph();
    auto ps = paths_up_to(g, 1);
    for (const Path& a : ps)
      for (const Path& b : ps)
        for (const Path& c : ps) {
          if (a.source != b.range || b.source != c.range) continue;
          Path ab = g.compose(a, b), bc = g.compose(b, c);
          const int da = s.module(a)->dim, dc = s.module(c)->dim;
          Matrix lhs = s.chi(ab, c) * s.pair(ab, c).factor * kron(s.chi(a, b) * s.pair(a, b).factor, Matrix::Identity(dc, dc));
          Matrix rhs = s.chi(a, bc) * s.pair(a, bc).factor * kron(Matrix::Identity(da, da), s.chi(b, c) * s.pair(b, c).factor);
          EXPECT_LT((lhs - rhs).norm(), 1e-9) << name;
        }
  }
}

TEST(LambdaSystem, EmbeddingsAreFunctorial) {
  std::mt19937_64 rng(23);
  for (const auto& [name, p] : oracle::systems()) {
    LambdaSystem s(p);
    const KGraph& g = s.graph();
    auto ps = paths_up_to(g, 1);
    for (const Path& l : ps)
      for (const Path& m : ps) {
        if (l.source != m.source) continue;
        Matrix T = any_compact(s, l, m, rng);
        Matrix S = any_compact(s, m, l, rng);
        for (const Path& nu : ps) {
          if (nu.range != l.source) continue;
          Matrix eT = s.embed(l, m, nu, T);
          EXPECT_LT((eT * s.embed(m, l, nu, S) - s.embed(l, l, nu, T * S)).norm(), 1e-9) << name;
          EXPECT_LT((s.embed(m, l, nu, T.adjoint()) - eT.adjoint()).norm(), 1e-9) << name;
          for (const Path& nu2 : ps) {
            if (nu2.range != nu.source) continue;
            Matrix twice = s.embed(g.compose(l, nu), g.compose(m, nu), nu2, eT);
            EXPECT_LT((twice - s.embed(l, m, g.compose(nu, nu2), T)).norm(), 1e-9) << name;
          }
        }
        Matrix I = Matrix::Identity(s.module(l)->dim, s.module(l)->dim);
        for (const Path& nu : ps)
          if (nu.range == l.source) {
            EXPECT_LT((s.embed(l, l, nu, I) - Matrix::Identity(s.module(g.compose(l, nu))->dim, s.module(g.compose(l, nu))->dim)).norm(), 1e-9);
          }
      }
  }
}

TEST(ProductSystem, FibreDimensionsAreSums) {
  for (const auto& [name, p] : all_systems()) {
    LambdaSystem s(p);
    const KGraph& g = s.graph();
    for (const Degree& n : degrees_with_total_at_most(g.rank(), 3)) {
      ProductSystemFibre Y = product_fibre(s, n);
      int sum = 0;
      for (int v = 0; v < g.num_vertices(); ++v)
        for (const Path& l : oracle::all_paths(g, v, n)) sum += expected_dim(name, s, l);
      EXPECT_EQ(Y.module->dim, sum) << name << " " << n.str();
      EXPECT_TRUE(verify_bimodule(*Y.module).ok()) << name << " " << n.str();
    }
  }
}

TEST(ProductSystem, LeftActionIsInjective) {
  for (const auto& [name, p] : all_systems()) {
    LambdaSystem s(p);
    FDAlgebra A = total_algebra(s);
    for (const Degree& n : degrees_with_total_at_most(s.graph().rank(), 3)) {
      ProductSystemFibre Y = product_fibre(s, n);
      Matrix lv(Y.module->dim * Y.module->dim, A.dim());
      for (int k = 0; k < A.dim(); ++k) lv.col(k) = Y.module->left[k].reshaped();
      EXPECT_EQ(numeric_rank(lv, 1e-10), A.dim()) << name << " " << n.str();
    }
  }
}

TEST(ProductSystem, MultiplicationIsUnitaryAndAssociative) {
  for (const auto& [name, p] : all_systems()) {
    LambdaSystem s(p);
    const int k = s.graph().rank();
    std::vector<Degree> ds{Degree::zero(k)};
    for (int c = 0; c < k; ++c) ds.push_back(Degree::unit(k, c));
    for (const Degree& m : ds)
      for (const Degree& n : ds) {
        auto Ym = product_fibre(s, m), Yn = product_fibre(s, n), Ymn = product_fibre(s, m + n);
        auto pm = product_multiplication(s, Ym, Yn, Ymn);
        Matrix I = Matrix::Identity(Ymn.module->dim, Ymn.module->dim);
        ASSERT_EQ(pm.theta.rows(), pm.theta.cols()) << name;
        EXPECT_LT((pm.theta.adjoint() * pm.theta - I).norm(), 1e-9) << name;
        for (const Degree& q : ds) {
          auto Yq = product_fibre(s, q), Ynq = product_fibre(s, n + q), Yall = product_fibre(s, m + n + q);
          auto mn_q = product_multiplication(s, Ymn, Yq, Yall);
          auto n_q = product_multiplication(s, Yn, Yq, Ynq);
          auto m_nq = product_multiplication(s, Ym, Ynq, Yall);
          Matrix Iq = Matrix::Identity(Yq.module->dim, Yq.module->dim), Im = Matrix::Identity(Ym.module->dim, Ym.module->dim);
          Matrix lhs = mn_q.theta * mn_q.tp.factor * kron(pm.theta * pm.tp.factor, Iq);
          Matrix rhs = m_nq.theta * m_nq.tp.factor * kron(Im, n_q.theta * n_q.tp.factor);
          EXPECT_LT((lhs - rhs).norm(), 1e-9) << name << " " << m.str() << n.str() << q.str();
        }
      }
  }
}

TEST(LambdaSystem, BadSquareIsomorphisms) {
  SystemPresentation p = zk_crossed(2);
  ASSERT_FALSE(p.square_iso.empty());
  SystemPresentation zero = p;
  zero.square_iso[0].setZero();
  EXPECT_THROW(LambdaSystem{zero}, Error);

  SystemPresentation scaled = p;
  scaled.square_iso[0] *= 2.0;
  LambdaSystem s(scaled);
  EXPECT_EQ(s.polar_normalized(), std::vector<int>{0});
  Report r = check_regular(s);
  EXPECT_TRUE(r.ok());
  EXPECT_NE(r.find("square_polar"), nullptr);

  SystemPresentation shape = p;
  shape.square_iso[0] = Matrix::Identity(3, 3);
  EXPECT_THROW(LambdaSystem{shape}, Error);

  SystemPresentation missing = p;
  missing.square_iso.pop_back();
  EXPECT_THROW(LambdaSystem{missing}, Error);
}

TEST(LambdaSystem, MismatchedModulesAreRejected) {
  SystemPresentation p = sse();
  std::swap(p.edge_mod[0], p.edge_mod[1]);
  EXPECT_THROW(LambdaSystem{p}, Error);
}
