#include <gtest/gtest.h>

#include "lsys/cprep.hpp"
#include "lsys/fibres.hpp"
#include "oracles.hpp"

using namespace lsys;

namespace {

Degree ones(int k, int c) { return Degree(std::vector<int>(k, c)); }

std::vector<Degree> small_degrees(int k) {
  std::vector<Degree> out;
  for (const Degree& d : degrees_with_total_at_most(k, 2))
    if (d.total() > 0) out.push_back(d);
  return out;
}

// a random element of the linking algebra at a stage: every block right-linear
Matrix random_linking(const LambdaSystem& s, const FibreStage& st, std::mt19937_64& rng) {
  ModulePtr XL = s.module(st.L), XM = s.module(st.M);
  Matrix S = Matrix::Zero(st.size_L + st.size_M, st.size_L + st.size_M);
  std::normal_distribution<double> n;
  auto fill = [&](const Bimodule& from, const Bimodule& to, Eigen::Index r0, Eigen::Index c0) {
    for (const Matrix& b : compact_basis(from, to)) S.block(r0, c0, b.rows(), b.cols()) += cplx(n(rng), n(rng)) * b;
  };
  fill(*XL, *XL, 0, 0);
  fill(*XM, *XL, 0, st.size_L);
  fill(*XL, *XM, st.size_L, 0);
  fill(*XM, *XM, st.size_L, st.size_L);
  return S;
}

}  // namespace

TEST(Canonical, RelationsHoldOnGallerySystems) {
  for (const auto& [name, p] : oracle::systems()) {
    LambdaSystem s(p);
    auto r = canonical_representation(s);
    Report rep = check_representation(s, r, {1, -1, 1e-9});
    EXPECT_TRUE(rep.ok()) << name;
    EXPECT_LT(rep.max_residual(""), 1e-12) << name;
    EXPECT_TRUE(check_giut_hypotheses(s, r).ok()) << name;
  }
}

TEST(Canonical, CovariantForSmallDegrees) {
  for (const auto& [name, p] : oracle::systems()) {
    LambdaSystem s(p);
    auto r = canonical_representation(s);
    for (const Degree& n : small_degrees(s.graph().rank())) {
      Report c = check_covariance(s, r, n, 1e-8);
      EXPECT_TRUE(c.ok()) << name << " n=" << n.str();
      ASSERT_NE(c.find("frame_independence"), nullptr);
      EXPECT_TRUE(c.find("frame_independence")->pass);
    }
  }
}

TEST(Canonical, CuntzKriegerOnB2) {
  LambdaSystem s(gallery("trivial-b2"));
  auto r = canonical_representation(s);
  const KGraph& g = s.graph();
  const auto& o = r.ops;
  Vector one = Vector::Ones(1);
  Section id = r.pi(0, Matrix::Identity(1, 1));
  Section sum;
  for (int i = 0; i < 2; ++i) {
    Section si = r.rho(g.edge_path(i), one);
    for (int j = 0; j < 2; ++j) {
      Section sj = r.rho(g.edge_path(j), one);
      Section want = i == j ? id : o.zero();
      EXPECT_LT(o.dist(o.mul(o.adj(si), sj), want), 1e-12);
    }
    sum = o.add(sum, o.mul(si, o.adj(si)));
  }
  EXPECT_LT(o.dist(sum, id), 1e-12);
}

TEST(Canonical, TwistedCuntzRelations) {
  LambdaSystem s(gallery("twisted-o2"));
  auto r = canonical_representation(s);
  const auto& o = r.ops;
  const FDAlgebra& A = s.algebra(0);
  std::vector<Matrix> u{pauli_z(), flip()};
  std::vector<Section> V;
  for (int e = 0; e < 2; ++e) {
    // the unit of A in the edge module, in internal coordinates
    Vector x = s.coordinate_change(e).fullPivLu().solve(A.coords(A.identity()));
    V.push_back(r.rho(s.graph().edge_path(e), x));
  }
  Section id = r.pi(0, A.identity());
  Section sum;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) EXPECT_LT(o.dist(o.mul(o.adj(V[i]), V[j]), i == j ? id : o.zero()), 1e-9);
    sum = o.add(sum, o.mul(V[i], o.adj(V[i])));
  }
  EXPECT_LT(o.dist(sum, id), 1e-9);
  std::mt19937_64 rng(3);
  std::vector<Matrix> as = unit_matrices(A);
  as.push_back(A.random_element(rng));
  for (int i = 0; i < 2; ++i)
    for (const Matrix& a : as)
      EXPECT_LT(o.dist(o.mul(r.pi(0, unitary_conjugate(u[i], a)), V[i]), o.mul(V[i], r.pi(0, a))), 1e-9);
  // with the wrong automorphism the last relation fails
  EXPECT_GT(o.dist(o.mul(r.pi(0, unitary_conjugate(u[1], as[1])), V[0]), o.mul(V[0], r.pi(0, as[1]))), 0.5);
}

TEST(Canonical, ProductSystemView) {
  for (const auto& [name, p] : oracle::systems()) {
    LambdaSystem s(p);
    auto r = canonical_representation(s);
    const int k = s.graph().rank();
    for (int c = 0; c < k; ++c) {
      Report rep = check_product_system_rep(s, r, Degree::unit(k, c), Degree::unit(k, k - 1 - c));
      EXPECT_TRUE(rep.ok()) << name;
    }
  }
}

TEST(Fock, RelationsHoldButCovarianceFails) {
  for (const auto& [name, p] : oracle::systems()) {
    LambdaSystem s(p);
    const int k = s.graph().rank();
    auto r = fock_truncation(s, ones(k, 3), 2);
    EXPECT_TRUE(check_representation(s, r, {1, -1, 1e-9}).ok()) << name;
    EXPECT_TRUE(check_giut_hypotheses(s, r).ok()) << name;
    double unit = 1e300;
    for (int v = 0; v < s.graph().num_vertices(); ++v)
      for (int u = 0; u < s.algebra(v).dim(); ++u) unit = std::min(unit, spectral_norm(s.algebra(v).unit_matrix(u)));
    for (int c = 0; c < k; ++c) {
      Report cov = check_covariance(s, r, Degree::unit(k, c));
      EXPECT_FALSE(cov.ok()) << name;
      EXPECT_GE(cov.find("covariance")->residual, 0.5 * unit) << name;
    }
  }
}

TEST(Faults, EveryInjectedFaultIsDetected) {
  for (const auto& [name, p] : oracle::systems()) {
    LambdaSystem s(p);
    auto r = canonical_representation(s);
    const int k = s.graph().rank();
    for (Fault f : all_faults()) {
      auto bad = corrupted(r, f);
      bool rel = check_representation(s, bad, {2, 3, 1e-9}).ok();
      bool cov = check_covariance(s, bad, Degree::unit(k, 0)).ok();
      bool giut = check_giut_hypotheses(s, bad).ok();
      EXPECT_FALSE(rel && cov && giut) << name << ": " << fault_name(f);
    }
  }
}

TEST(Faults, ZeroRepresentationFailsInjectivity) {
  LambdaSystem s(gallery("sse"));
  auto bad = corrupted(canonical_representation(s), Fault::zero_pi);
  Report g = check_giut_hypotheses(s, bad);
  EXPECT_FALSE(g.ok());
  EXPECT_FALSE(g.find("pi_injective v")->pass);
}

TEST(TruncatedFibres, TrivialSystemHasOneDimensionalFibres) {
  LambdaSystem s(gallery("trivial-b2"));
  const KGraph& g = s.graph();
  for (unsigned choice = 0; choice < 3; ++choice) {
    InfinitePathEP x = some_infinite_path(g, 0, choice);
    for (const Path& l : short_paths_to(g, 0, 2))
      for (const Path& m : short_paths_to(g, 0, 2))
        for (const FibreStage& st : fibre_E(s, l, m, x, 3).stages) {
          EXPECT_EQ(st.dim_LM, 1);
          EXPECT_EQ(st.linking_dim(), 4);
        }
  }
}

TEST(TruncatedFibres, AutomorphismSystemOnT1) {
  LambdaSystem s(zk_crossed(1));
  InfinitePathEP x = some_infinite_path(s.graph(), 0);
  for (const FibreStage& st : fibre_E(s, x, 4).stages) EXPECT_EQ(st.dim_LL, s.algebra(0).dim());
}

TEST(TruncatedFibres, ConnectingMapsAreIsometricHomomorphisms) {
  std::mt19937_64 rng(29);
  for (const auto& [name, p] : oracle::systems()) {
    LambdaSystem s(p);
    const KGraph& g = s.graph();
    for (int v = 0; v < g.num_vertices(); ++v) {
      InfinitePathEP x = some_infinite_path(g, v);
      for (const Path& l : short_paths_to(g, v, 1))
        for (const Path& m : short_paths_to(g, v, 1)) {
          TruncatedFibre F = fibre_E(s, l, m, x, 2);
          for (int j = 0; j + 1 < static_cast<int>(F.stages.size()); ++j) {
            Matrix S = random_linking(s, F.stages[j], rng), T = random_linking(s, F.stages[j], rng);
            Matrix cS = F.connect(s, j, S), cT = F.connect(s, j, T);
            EXPECT_LT((F.connect(s, j, S * T) - cS * cT).norm(), 1e-9) << name;
            EXPECT_LT((F.connect(s, j, S.adjoint()) - cS.adjoint()).norm(), 1e-9) << name;
            EXPECT_NEAR(spectral_norm(cS), spectral_norm(S), 1e-9) << name;
            EXPECT_LT((F.connect(s, j, F.corner_L(j)) - F.corner_L(j + 1)).norm(), 1e-9) << name;
            EXPECT_LT((F.connect(s, j, F.corner_M(j)) - F.corner_M(j + 1)).norm(), 1e-9) << name;
            // corners are carried into corners
            Matrix PS = F.corner_L(j) * S * F.corner_M(j);
            Matrix img = F.connect(s, j, PS);
            EXPECT_LT((img - F.corner_L(j + 1) * img * F.corner_M(j + 1)).norm(), 1e-12) << name;
          }
        }
    }
  }
}

TEST(TruncatedFibres, StrongMoritaEquivalenceLinkingIdentities) {
  // in the sse system the off-diagonal corner is an imprimitivity bimodule: both inner spans are full
  LambdaSystem s(gallery("sse"));
  const KGraph& g = s.graph();
  for (int v = 0; v < g.num_vertices(); ++v) {
    InfinitePathEP x = some_infinite_path(g, v);
    for (const Path& l : short_paths_to(g, v, 2))
      for (const Path& m : short_paths_to(g, v, 2)) {
        for (const FibreStage& st : fibre_E(s, l, m, x, 2).stages) {
          EXPECT_EQ(st.dim_LM, st.dim_ML);
          EXPECT_EQ(st.span_rank_L, st.dim_LL);
          EXPECT_EQ(st.span_rank_M, st.dim_MM);
          EXPECT_EQ(st.dim_LL, st.size_L * st.size_L / std::max(1, s.algebra(st.L.source).size() * s.algebra(st.L.source).size()));
        }
      }
  }
}
