#pragma once
// Brute-force reference implementations and extra test graphs.

#include <map>
#include <random>
#include <set>
#include <utility>
#include <vector>

#include "lsys/cylsets.hpp"
#include "lsys/gallery.hpp"

namespace oracle {

using namespace lsys;

/// Every color-sorted composable word of degree n with range v, by exhaustive choice of edges.
inline std::vector<Path> all_paths(const KGraph& g, int v, const Degree& n) {
  std::vector<int> colors;
  for (int c = 0; c < g.rank(); ++c)
    for (int i = 0; i < n[c]; ++i) colors.push_back(c);
  if (colors.empty()) return {g.vertex(v)};
  std::vector<std::vector<int>> choices(colors.size());
  for (size_t p = 0; p < colors.size(); ++p)
    for (int e = 0; e < g.num_edges(); ++e)
      if (g.color(e) == colors[p]) choices[p].push_back(e);
  std::vector<Path> out;
  std::vector<size_t> idx(colors.size(), 0);
  for (const auto& c : choices)
    if (c.empty()) return out;
  while (true) {
    std::vector<int> w;
    for (size_t p = 0; p < colors.size(); ++p) w.push_back(choices[p][idx[p]]);
    bool ok = g.edge(w[0]).range == v;
    for (size_t p = 0; ok && p + 1 < w.size(); ++p) ok = g.edge(w[p]).source == g.edge(w[p + 1]).range;
    if (ok) out.push_back(g.from_word(w));
    size_t p = 0;
    while (p < idx.size() && ++idx[p] == choices[p].size()) idx[p++] = 0;
    if (p == idx.size()) break;
  }
  return out;
}

inline std::vector<Path> all_paths_total(const KGraph& g, int t) {
  std::vector<Path> out;
  for (const Degree& d : degrees_with_total_at_most(g.rank(), t))
    for (int v = 0; v < g.num_vertices(); ++v) {
      auto ps = all_paths(g, v, d);
      out.insert(out.end(), ps.begin(), ps.end());
    }
  return out;
}

/// Lambda^min by searching all pairs of extensions of the join degree.
inline std::set<std::pair<Path, Path>> lambda_min(const KGraph& g, const Path& mu, const Path& nu) {
  std::set<std::pair<Path, Path>> out;
  if (mu.range != nu.range) return out;
  Degree d = join(mu.degree, nu.degree);
  auto as = all_paths(g, mu.source, d - mu.degree);
  auto bs = all_paths(g, nu.source, d - nu.degree);
  for (const Path& a : as)
    for (const Path& b : bs)
      if (g.compose(mu, a) == g.compose(nu, b)) out.emplace(a, b);
  return out;
}

/// The witness family lies in Z(lambda, mu) iff, at a depth deciding it, both ends start correctly.
inline bool decided_member(const KGraph& g, const Path& L, const Path& M, const Bisection& a) {
  if (signed_diff(L.degree, M.degree) != a.cocycle()) return false;
  if (!a.lambda.degree.leq(L.degree)) throw Error("oracle: witness not deep enough");
  auto [head, tail] = g.factorize(L, a.lambda.degree, L.degree - a.lambda.degree);
  if (head != a.lambda) return false;
  if (!a.mu.degree.leq(M.degree)) return false;
  auto [mh, mt] = g.factorize(M, a.mu.degree, M.degree - a.mu.degree);
  return mh == a.mu && mt == tail;
}

/// Witness families (lambda nu, mu nu) refined to depth D on the lambda side.
inline std::vector<std::pair<Path, Path>> refine_witness(const KGraph& g, const Witness& w, const Degree& D) {
  Path L = g.compose(w.lambda, w.nu), M = g.compose(w.mu, w.nu);
  Degree need = join(L.degree, D) - L.degree;
  std::vector<std::pair<Path, Path>> out;
  for (const Path& e : all_paths(g, L.source, need)) out.emplace_back(g.compose(L, e), g.compose(M, e));
  return out;
}

/// 2-graph on one vertex with blue b1,b2, red r1,r2 and squares b_i r_j = r_i b_j.
inline KGraph flip_square_graph() {
  KGraph g(2);
  g.add_vertex("v");
  g.add_edge("b1", 1, "v", "v");
  g.add_edge("b2", 1, "v", "v");
  g.add_edge("r1", 2, "v", "v");
  g.add_edge("r2", 2, "v", "v");
  for (int i = 1; i <= 2; ++i)
    for (int j = 1; j <= 2; ++j)
      g.add_square("b" + std::to_string(i), "r" + std::to_string(j), "r" + std::to_string(i), "b" + std::to_string(j));
  return g;
}

/// 2-graph on vertices u, w: blue u->w, w->u and red u->w, w->u, squares forced by endpoints.
inline KGraph two_vertex_2graph() {
  KGraph g(2);
  g.add_vertex("u");
  g.add_vertex("w");
  g.add_edge("b1", 1, "u", "w");
  g.add_edge("b2", 1, "w", "u");
  g.add_edge("r1", 2, "u", "w");
  g.add_edge("r2", 2, "w", "u");
  g.add_square("b1", "r2", "r1", "b2");
  g.add_square("b2", "r1", "r2", "b1");
  return g;
}

/// One-vertex 3-colored graph with two edges per color and square bijections given by
/// permutations of the four pairs; perm[p] for color pairs (1,2), (1,3), (2,3).
inline KGraph cube_graph(const std::vector<std::vector<int>>& perm) {
  KGraph g(3);
  g.add_vertex("v");
  const char* names = "abc";
  for (int c = 0; c < 3; ++c)
    for (int i = 0; i < 2; ++i) g.add_edge(std::string(1, names[c]) + std::to_string(i), c + 1, "v", "v");
  int p = 0;
  for (int c1 = 0; c1 < 3; ++c1)
    for (int c2 = c1 + 1; c2 < 3; ++c2, ++p)
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
          int target = perm[p][i * 2 + j];
          std::string f = std::string(1, names[c1]) + std::to_string(i), gg = std::string(1, names[c2]) + std::to_string(j);
          std::string gp = std::string(1, names[c2]) + std::to_string(target / 2);
          std::string fp = std::string(1, names[c1]) + std::to_string(target % 2);
          g.add_square(f, gg, gp, fp);
        }
  return g;
}

/// Cube condition read straight off the square table: an ascending three-color word must reach
/// the same descending word along both reduced swap sequences.
inline bool cube_coherent(const KGraph& g) {
  std::map<std::pair<int, int>, std::pair<int, int>> up, down;
  for (const Square& q : g.squares()) {
    up[{q.f, q.g}] = {q.gp, q.fp};
    down[{q.gp, q.fp}] = {q.f, q.g};
  }
  auto swap = [&](std::vector<int>& w, size_t p) {
    auto key = std::make_pair(w[p], w[p + 1]);
    auto r = g.color(w[p]) < g.color(w[p + 1]) ? up.at(key) : down.at(key);
    w[p] = r.first;
    w[p + 1] = r.second;
  };
  for (int f = 0; f < g.num_edges(); ++f)
    for (int h = 0; h < g.num_edges(); ++h)
      for (int l = 0; l < g.num_edges(); ++l) {
        if (g.color(f) != 0 || g.color(h) != 1 || g.color(l) != 2) continue;
        if (g.edge(f).source != g.edge(h).range || g.edge(h).source != g.edge(l).range) continue;
        std::vector<int> a{f, h, l}, b{f, h, l};
        for (size_t p : {0u, 1u, 0u}) swap(a, p);
        for (size_t p : {1u, 0u, 1u}) swap(b, p);
        if (a != b) return false;
      }
  return true;
}

/// The gallery systems by name.
inline std::vector<std::pair<std::string, SystemPresentation>> systems() {
  std::vector<std::pair<std::string, SystemPresentation>> out;
  for (const auto& n : gallery_names()) out.emplace_back(n, gallery(n));
  return out;
}

/// Gallery graphs plus a few extra 2- and 3-graphs.
inline std::vector<std::pair<std::string, KGraph>> graphs() {
  std::vector<std::pair<std::string, KGraph>> out;
  for (const auto& [n, p] : systems()) out.emplace_back(n, p.graph);
  out.emplace_back("T2", torus_graph(2));
  out.emplace_back("T3", torus_graph(3));
  out.emplace_back("flip-square", flip_square_graph());
  out.emplace_back("two-vertex", two_vertex_2graph());
  return out;
}

}  // namespace oracle
