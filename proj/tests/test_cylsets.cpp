#include <gtest/gtest.h>

#include "lsys/cylsets.hpp"
#include "oracles.hpp"

using namespace lsys;

namespace {

std::vector<Bisection> bisections(const KGraph& g, int depth) {
  std::vector<Bisection> out;
  auto ps = oracle::all_paths_total(g, depth);
  for (const Path& l : ps)
    for (const Path& m : ps)
      if (l.source == m.source) out.push_back({l, m});
  return out;
}

std::vector<Witness> witnesses(const KGraph& g, int depth) {
  std::vector<Witness> out;
  for (const Bisection& b : bisections(g, 1))
    for (const Degree& d : degrees_with_total_at_most(g.rank(), depth - std::max(b.lambda.degree.total(), b.mu.degree.total())))
      for (const Path& nu : oracle::all_paths(g, b.lambda.source, d)) out.push_back({b.lambda, b.mu, nu});
  return out;
}

bool in_union(const KGraph& g, const Path& L, const Path& M, const BisectionUnion& u) {
  for (const auto& b : u.items)
    if (oracle::decided_member(g, L, M, b)) return true;
  return false;
}

Degree depth_of(const std::vector<Bisection>& bs, int k) {
  Degree d = Degree::zero(k);
  for (const auto& b : bs) d = join(d, b.lambda.degree);
  return d;
}

}  // namespace

TEST(Cylinders, Examples) {
  KGraph g = bouquet(2);
  Path v = g.parse_path("v"), e1 = g.parse_path("e1"), e2 = g.parse_path("e2");
  auto a = intersect(g, {v, v}, {e1, e1});
  ASSERT_EQ(a.items.size(), 1u);
  EXPECT_EQ(a.items[0], (Bisection{e1, e1}));
  EXPECT_TRUE(intersect(g, {e1, v}, {e2, v}).items.empty());
  auto c = complement(g, {v, v}, {e1, e1});
  ASSERT_EQ(c.items.size(), 1u);
  EXPECT_EQ(c.items[0], (Bisection{e2, e2}));
  EXPECT_EQ(refine(g, {e1, v}, Degree({2})).items.size(), 4u);
  KGraph h = gallery("sse").graph;
  EXPECT_THROW(make_bisection(h.parse_path("e"), h.parse_path("f")), Error);
}

TEST(Cylinders, MemberAgreesWithDecidedOracle) {
  for (const auto& [name, g] : oracle::graphs()) {
    auto bs = bisections(g, 1);
    for (const Witness& w : witnesses(g, 3))
      for (const Bisection& b : bs) {
        bool got = member(g, w, b);
        // the family is inside b iff every refined subfamily is
        bool all = true;
        for (const auto& [L, M] : oracle::refine_witness(g, w, b.lambda.degree))
          all = all && oracle::decided_member(g, L, M, b);
        EXPECT_EQ(got, all) << name;
      }
  }
}

TEST(Cylinders, SetOperationsAgreeWithMembership) {
  for (const auto& [name, g] : oracle::graphs()) {
    auto bs = bisections(g, 1);
    auto ws = witnesses(g, 2);
    for (const Bisection& a : bs)
      for (const Bisection& b : bs) {
        BisectionUnion in = intersect(g, a, b), out = complement(g, a, b);
        Degree D = depth_of({a, b}, g.rank());
        for (const Witness& w : ws)
          for (const auto& [L, M] : oracle::refine_witness(g, w, D)) {
            bool ma = oracle::decided_member(g, L, M, a), mb = oracle::decided_member(g, L, M, b);
            ASSERT_EQ(in_union(g, L, M, in), ma && mb) << name;
            ASSERT_EQ(in_union(g, L, M, out), ma && !mb) << name;
          }
      }
  }
}

TEST(Cylinders, DisjointizeCoversAndSeparates) {
  for (const auto& [name, g] : oracle::graphs()) {
    auto bs = bisections(g, 1);
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<size_t> pick(0, bs.size() - 1);
    for (int trial = 0; trial < 30; ++trial) {
      std::vector<Bisection> in;
      for (int i = 0; i < 4; ++i) in.push_back(bs[pick(rng)]);
      BisectionUnion u = disjointize(g, in);
      for (size_t i = 0; i < u.items.size(); ++i)
        for (size_t j = i + 1; j < u.items.size(); ++j)
          EXPECT_TRUE(intersect(g, u.items[i], u.items[j]).items.empty()) << name;
      Degree D = depth_of(u.items, g.rank());
      D = join(D, depth_of(in, g.rank()));
      for (const Witness& w : witnesses(g, 2))
        for (const auto& [L, M] : oracle::refine_witness(g, w, D)) {
          bool any = false;
          for (const auto& b : in) any = any || oracle::decided_member(g, L, M, b);
          int hits = 0;
          for (const auto& b : u.items) hits += oracle::decided_member(g, L, M, b);
          EXPECT_EQ(any, hits > 0) << name;
          EXPECT_LE(hits, 1) << name;
        }
    }
  }
}

TEST(Cylinders, RefinementPartitions) {
  for (const auto& [name, g] : oracle::graphs())
    for (const Bisection& b : bisections(g, 1)) {
      Degree p = Degree::unit(g.rank(), 0);
      BisectionUnion u = refine(g, b, p);
      for (const Witness& w : witnesses(g, 2))
        for (const auto& [L, M] : oracle::refine_witness(g, w, b.lambda.degree + p))
          EXPECT_EQ(oracle::decided_member(g, L, M, b), in_union(g, L, M, u)) << name;
    }
}

TEST(Cylinders, TorusBisectionsDependOnlyOnDegrees) {
  // on T_k every infinite path is the same, so Z(lambda, mu) is decided by d(lambda) - d(mu)
  KGraph g = torus_graph(2);
  auto bs = bisections(g, 2);
  for (const Witness& w : witnesses(g, 2))
    for (const Bisection& b : bs)
      EXPECT_EQ(member(g, w, b), signed_diff(w.lambda.degree, w.mu.degree) == b.cocycle());
}
