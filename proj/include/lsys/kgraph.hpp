#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "report.hpp"

namespace lsys {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Element of N^k.
struct Degree {
  std::vector<int> c;

  Degree() = default;
  explicit Degree(std::vector<int> v) : c(std::move(v)) {}
  static Degree zero(int k) { return Degree(std::vector<int>(k, 0)); }
  static Degree unit(int k, int i) {
    Degree d = zero(k);
    d.c.at(i) = 1;
    return d;
  }

  int rank() const { return static_cast<int>(c.size()); }
  int operator[](int i) const { return c[i]; }
  int total() const {
    int s = 0;
    for (int x : c) s += x;
    return s;
  }
  bool is_zero() const { return std::all_of(c.begin(), c.end(), [](int x) { return x == 0; }); }

  friend bool operator==(const Degree& a, const Degree& b) { return a.c == b.c; }
  friend bool operator!=(const Degree& a, const Degree& b) { return a.c != b.c; }
  friend bool operator<(const Degree& a, const Degree& b) { return a.c < b.c; }

  // componentwise order
  bool leq(const Degree& o) const {
    for (size_t i = 0; i < c.size(); ++i)
      if (c[i] > o.c[i]) return false;
    return true;
  }

  friend Degree operator+(const Degree& a, const Degree& b) {
    Degree r = a;
    for (size_t i = 0; i < r.c.size(); ++i) r.c[i] += b.c[i];
    return r;
  }
  friend Degree operator-(const Degree& a, const Degree& b) {
    if (!b.leq(a)) throw Error("degree subtraction below zero");
    Degree r = a;
    for (size_t i = 0; i < r.c.size(); ++i) r.c[i] -= b.c[i];
    return r;
  }
  Degree operator*(int m) const {
    Degree r = *this;
    for (int& x : r.c) x *= m;
    return r;
  }

  std::string str() const {
    if (c.size() == 1) return std::to_string(c[0]);
    std::string s = "(";
    for (size_t i = 0; i < c.size(); ++i) s += (i ? "," : "") + std::to_string(c[i]);
    return s + ")";
  }
};

inline Degree join(const Degree& a, const Degree& b) {
  Degree r = a;
  for (size_t i = 0; i < r.c.size(); ++i) r.c[i] = std::max(a.c[i], b.c[i]);
  return r;
}

// Signed difference d(lambda) - d(mu), the cocycle value of Z(lambda, mu).
inline std::vector<int> signed_diff(const Degree& a, const Degree& b) {
  std::vector<int> r(a.c.size());
  for (size_t i = 0; i < r.size(); ++i) r[i] = a.c[i] - b.c[i];
  return r;
}

/// All degrees n with 0 <= n <= top componentwise, lexicographic.
inline std::vector<Degree> degrees_below(const Degree& top) {
  std::vector<Degree> out;
  Degree cur = Degree::zero(top.rank());
  if (top.rank() == 0) return {cur};
  while (true) {
    out.push_back(cur);
    int i = top.rank() - 1;
    while (i >= 0 && cur.c[i] == top.c[i]) cur.c[i--] = 0;
    if (i < 0) break;
    ++cur.c[i];
  }
  return out;
}

/// All degrees with total |n| <= t.
inline std::vector<Degree> degrees_with_total_at_most(int k, int t) {
  std::vector<Degree> out;
  for (const auto& d : degrees_below(Degree(std::vector<int>(k, t))))
    if (d.total() <= t) out.push_back(d);
  return out;
}

/// A morphism in color-ordered normal form. A vertex path has no edges and range == source.
struct Path {
  int range = -1;
  int source = -1;
  std::vector<int> edges;
  Degree degree;

  bool is_vertex() const { return edges.empty(); }
  int length() const { return static_cast<int>(edges.size()); }

  friend bool operator==(const Path& a, const Path& b) {
    return a.range == b.range && a.source == b.source && a.edges == b.edges;
  }
  friend bool operator!=(const Path& a, const Path& b) { return !(a == b); }
  friend bool operator<(const Path& a, const Path& b) {
    return std::tie(a.range, a.edges, a.source) < std::tie(b.range, b.edges, b.source);
  }
};

struct Edge {
  std::string id;
  int color = 0;  // 0-based
  int source = -1;
  int range = -1;
};

/// Factorization square f g = g' f' with color(f) < color(g).
struct Square {
  int f, g, gp, fp;
};

class KGraph {
 public:
  explicit KGraph(int k = 1) : k_(k) {
    if (k < 0) throw Error("negative rank");
  }

  int rank() const { return k_; }
  int num_vertices() const { return static_cast<int>(vertices_.size()); }
  int num_edges() const { return static_cast<int>(edges_.size()); }
  const std::string& vertex_id(int v) const { return vertices_.at(v); }
  const Edge& edge(int e) const { return edges_.at(e); }
  const std::vector<Square>& squares() const { return squares_; }

  int add_vertex(const std::string& id) {
    if (id.empty()) throw Error("empty vertex id");
    if (vindex_.count(id) || eindex_.count(id)) throw Error("duplicate id '" + id + "'");
    vindex_[id] = num_vertices();
    vertices_.push_back(id);
    out_.emplace_back(k_);
    return num_vertices() - 1;
  }

  // color is 1-based, as in input files
  int add_edge(const std::string& id, int color, const std::string& src, const std::string& rng) {
    if (id.empty()) throw Error("empty edge id");
    if (vindex_.count(id) || eindex_.count(id)) throw Error("duplicate id '" + id + "'");
    if (color < 1 || color > k_) throw Error("edge '" + id + "': color " + std::to_string(color) + " out of range");
    Edge e{id, color - 1, vertex_index(src), vertex_index(rng)};
    eindex_[id] = num_edges();
    edges_.push_back(e);
    out_[e.range][e.color].push_back(num_edges() - 1);
    return num_edges() - 1;
  }

  void add_square(const std::string& f, const std::string& g, const std::string& gp, const std::string& fp) {
    Square s{edge_index(f), edge_index(g), edge_index(gp), edge_index(fp)};
    squares_.push_back(s);
    fwd_.emplace(std::make_pair(s.f, s.g), std::make_pair(s.gp, s.fp));
    bwd_.emplace(std::make_pair(s.gp, s.fp), std::make_pair(s.f, s.g));
  }

  int vertex_index(const std::string& id) const {
    auto it = vindex_.find(id);
    if (it == vindex_.end()) throw Error("unknown vertex '" + id + "'");
    return it->second;
  }
  int edge_index(const std::string& id) const {
    auto it = eindex_.find(id);
    if (it == eindex_.end()) throw Error("unknown edge '" + id + "'");
    return it->second;
  }
  bool has_vertex(const std::string& id) const { return vindex_.count(id) > 0; }
  bool has_edge(const std::string& id) const { return eindex_.count(id) > 0; }

  int color(int e) const { return edges_[e].color; }

  Path vertex(int v) const {
    if (v < 0 || v >= num_vertices()) throw Error("vertex index out of range");
    return Path{v, v, {}, Degree::zero(k_)};
  }
  Path edge_path(int e) const {
    const Edge& ed = edges_.at(e);
    return Path{ed.range, ed.source, {e}, Degree::unit(k_, ed.color)};
  }
  Path range_of(const Path& p) const { return vertex(p.range); }
  Path source_of(const Path& p) const { return vertex(p.source); }

  /// Edges e with r(e) = v and the given color.
  const std::vector<int>& edges_into(int v, int color) const { return out_.at(v).at(color); }

  // Image of (f,g) under the square bijection, or nullptr.
  const std::pair<int, int>* square_forward(int f, int g) const {
    auto it = fwd_.find({f, g});
    return it == fwd_.end() ? nullptr : &it->second;
  }
  const std::pair<int, int>* square_backward(int gp, int fp) const {
    auto it = bwd_.find({gp, fp});
    return it == bwd_.end() ? nullptr : &it->second;
  }

  /// Apply a single adjacent transposition at position p (colors must differ).
  void swap_at(std::vector<int>& w, size_t p) const {
    int a = w[p], b = w[p + 1];
    const std::pair<int, int>* r = nullptr;
    if (color(a) < color(b)) r = square_forward(a, b);
    else if (color(a) > color(b)) r = square_backward(a, b);
    else throw Error("swap of equally colored edges");
    if (!r) throw Error("no square for pair (" + edges_[a].id + "," + edges_[b].id + ")");
    w[p] = r->first;
    w[p + 1] = r->second;
  }

  /// Sort a composable edge word into normal form; records swap positions when asked.
  std::vector<int> sort_word(std::vector<int> w, std::vector<int>* swaps = nullptr) const {
    bool changed = true;
    while (changed) {
      changed = false;
      for (size_t p = 0; p + 1 < w.size(); ++p) {
        if (color(w[p]) > color(w[p + 1])) {
          swap_at(w, p);
          if (swaps) swaps->push_back(static_cast<int>(p));
          changed = true;
        }
      }
    }
    return w;
  }

  Path from_word(const std::vector<int>& w) const {
    if (w.empty()) throw Error("empty word");
    Degree d = Degree::zero(k_);
    for (size_t i = 0; i < w.size(); ++i) {
      ++d.c[color(w[i])];
      if (i + 1 < w.size() && edges_[w[i]].source != edges_[w[i + 1]].range)
        throw Error("edges '" + edges_[w[i]].id + "' and '" + edges_[w[i + 1]].id + "' do not compose");
    }
    return Path{edges_[w.front()].range, edges_[w.back()].source, sort_word(w), d};
  }

  Path compose(const Path& a, const Path& b) const {
    if (a.source != b.range) throw Error("non-composable pair");
    if (a.is_vertex()) return b;
    if (b.is_vertex()) return a;
    std::vector<int> w = a.edges;
    w.insert(w.end(), b.edges.begin(), b.edges.end());
    return Path{a.range, b.source, sort_word(std::move(w)), a.degree + b.degree};
  }

  /// Unique (mu, nu) with lambda = mu nu, d(mu) = m, d(nu) = n.
  std::pair<Path, Path> factorize(const Path& lambda, const Degree& m, const Degree& n) const {
    if (m + n != lambda.degree) throw Error("degree mismatch in factorize");
    std::vector<int> target;
    for (int c = 0; c < k_; ++c) target.insert(target.end(), m.c[c], c);
    for (int c = 0; c < k_; ++c) target.insert(target.end(), n.c[c], c);
    std::vector<int> w = lambda.edges;
    for (size_t p = 0; p < w.size(); ++p) {
      size_t q = p;
      while (color(w[q]) != target[p]) ++q;
      for (; q > p; --q) swap_at(w, q - 1);
    }
    size_t cut = static_cast<size_t>(m.total());
    Path mu, nu;
    if (cut == 0) mu = vertex(lambda.range);
    else mu = Path{lambda.range, edges_[w[cut - 1]].source, {w.begin(), w.begin() + cut}, m};
    if (cut == w.size()) nu = vertex(lambda.source);
    else nu = Path{edges_[w[cut]].range, lambda.source, {w.begin() + cut, w.end()}, n};
    return {mu, nu};
  }

  /// v Lambda^n, enumerated in normal form.
  std::vector<Path> paths(int v, const Degree& n) const {
    std::vector<int> colors;
    for (int c = 0; c < k_; ++c) colors.insert(colors.end(), n.c[c], c);
    std::vector<Path> out;
    if (colors.empty()) {
      out.push_back(vertex(v));
      return out;
    }
    std::vector<int> w;
    enumerate(v, colors, w, out, n, v);
    return out;
  }

  std::vector<Path> paths_of_degree(const Degree& n) const {
    std::vector<Path> out;
    for (int v = 0; v < num_vertices(); ++v) {
      auto p = paths(v, n);
      out.insert(out.end(), p.begin(), p.end());
    }
    return out;
  }

  /// Lambda^min(mu, nu): pairs (alpha, beta) with mu alpha = nu beta of degree d(mu) v d(nu).
  std::vector<std::pair<Path, Path>> lambda_min(const Path& mu, const Path& nu) const {
    if (mu.range != nu.range) throw Error("lambda_min: range mismatch");
    Degree d = join(mu.degree, nu.degree);
    std::vector<std::pair<Path, Path>> out;
    for (const Path& alpha : paths(mu.source, d - mu.degree)) {
      Path ext = compose(mu, alpha);
      auto [head, beta] = factorize(ext, nu.degree, d - nu.degree);
      if (head == nu) out.emplace_back(alpha, beta);
    }
    return out;
  }

  bool no_sources() const {
    for (int v = 0; v < num_vertices(); ++v)
      for (int c = 0; c < k_; ++c)
        if (out_[v][c].empty()) return false;
    return true;
  }

  std::string str(const Path& p) const {
    if (p.is_vertex()) return vertices_[p.range];
    std::string s;
    for (size_t i = 0; i < p.edges.size(); ++i) s += (i ? "," : "") + edges_[p.edges[i]].id;
    return s;
  }

  /// Parse "v" (vertex) or "e1,e2,..." (edge word, any composable order).
  Path parse_path(const std::string& text) const {
    if (has_vertex(text)) return vertex(vertex_index(text));
    std::vector<int> w;
    size_t pos = 0;
    while (pos <= text.size()) {
      size_t next = text.find(',', pos);
      if (next == std::string::npos) next = text.size();
      w.push_back(edge_index(text.substr(pos, next - pos)));
      pos = next + 1;
    }
    return from_word(w);
  }

 private:
  void enumerate(int cur, const std::vector<int>& colors, std::vector<int>& w, std::vector<Path>& out,
                 const Degree& n, int v) const {
    if (w.size() == colors.size()) {
      out.push_back(Path{v, cur, w, n});
      return;
    }
    for (int e : out_[cur][colors[w.size()]]) {
      w.push_back(e);
      enumerate(edges_[e].source, colors, w, out, n, v);
      w.pop_back();
    }
  }

  int k_;
  std::vector<std::string> vertices_;
  std::vector<Edge> edges_;
  std::vector<Square> squares_;
  std::map<std::string, int> vindex_, eindex_;
  std::vector<std::vector<std::vector<int>>> out_;
  std::map<std::pair<int, int>, std::pair<int, int>> fwd_, bwd_;
};

/// Checks square bijectivity, endpoint preservation and, for k >= 3, coherence.
inline Report verify_kgraph(const KGraph& g) {
  Report rep("kgraph");
  auto eid = [&](int e) { return g.edge(e).id; };
  for (size_t i = 0; i < g.squares().size(); ++i) {
    const Square& s = g.squares()[i];
    const Edge &f = g.edge(s.f), &gg = g.edge(s.g), &gp = g.edge(s.gp), &fp = g.edge(s.fp);
    std::string tag = "square (" + f.id + "," + gg.id + ")->(" + gp.id + "," + fp.id + ")";
    if (!(f.color < gg.color && gp.color == gg.color && fp.color == f.color))
      rep.add("square.colors", false, tag + ": color pattern must be fg=g'f' with color(f)<color(g)");
    if (f.source != gg.range) rep.add("square.composable", false, tag + ": f,g not composable");
    if (gp.source != fp.range) rep.add("square.composable", false, tag + ": g',f' not composable");
    if (f.range != gp.range) rep.add("square.range", false, tag + ": r(f) != r(g')");
    if (gg.source != fp.source) rep.add("square.source", false, tag + ": s(g) != s(f')");
  }
  // totality and injectivity per color pair
  std::map<std::pair<int, int>, int> dom_count, cod_count;
  for (const Square& s : g.squares()) {
    ++dom_count[{s.f, s.g}];
    ++cod_count[{s.gp, s.fp}];
  }
  for (int f = 0; f < g.num_edges(); ++f) {
    for (int h = 0; h < g.num_edges(); ++h) {
      if (g.color(f) >= g.color(h) || g.edge(f).source != g.edge(h).range) continue;
      int n = dom_count.count({f, h}) ? dom_count[{f, h}] : 0;
      if (n == 0) rep.add("square.total", false, "missing pair (" + eid(f) + "," + eid(h) + ")");
      if (n > 1) rep.add("square.function", false, "pair (" + eid(f) + "," + eid(h) + ") has " + std::to_string(n) + " images");
    }
  }
  for (int gp = 0; gp < g.num_edges(); ++gp) {
    for (int fp = 0; fp < g.num_edges(); ++fp) {
      if (g.color(gp) <= g.color(fp) || g.edge(gp).source != g.edge(fp).range) continue;
      int n = cod_count.count({gp, fp}) ? cod_count[{gp, fp}] : 0;
      if (n == 0) rep.add("square.surjective", false, "pair (" + eid(gp) + "," + eid(fp) + ") not hit");
      if (n > 1) rep.add("square.injective", false, "pair (" + eid(gp) + "," + eid(fp) + ") hit " + std::to_string(n) + " times");
    }
  }
  bool squares_ok = rep.ok();
  rep.add("squares", squares_ok, std::to_string(g.squares().size()) + " squares");

  // Coherence: move a word of colors (i<j<l) to (l,j,i) along both reduced sequences.
  if (g.rank() >= 3 && squares_ok) {
    int bad = 0;
    for (int f = 0; f < g.num_edges(); ++f)
      for (int h = 0; h < g.num_edges(); ++h) {
        if (g.edge(f).source != g.edge(h).range || g.color(f) >= g.color(h)) continue;
        for (int l = 0; l < g.num_edges(); ++l) {
          if (g.edge(h).source != g.edge(l).range || g.color(h) >= g.color(l)) continue;
          std::vector<int> a{f, h, l}, b{f, h, l};
          g.swap_at(a, 1), g.swap_at(a, 0), g.swap_at(a, 1);
          g.swap_at(b, 0), g.swap_at(b, 1), g.swap_at(b, 0);
          if (a != b) {
            ++bad;
            rep.add("coherence", false, "triple (" + eid(f) + "," + eid(h) + "," + eid(l) + ") resolves to (" + eid(a[0]) + "," +
                                            eid(a[1]) + "," + eid(a[2]) + ") and (" + eid(b[0]) + "," + eid(b[1]) + "," + eid(b[2]) + ")");
          }
        }
      }
    if (bad == 0) rep.add("coherence", true);
  }
  rep.add("no_sources", g.no_sources(), g.no_sources() ? "" : "some vertex receives no edge of some color");
  return rep;
}

/// Eventually periodic infinite path prefix . cycle^infinity.
struct InfinitePathEP {
  Path prefix;
  Path cycle;
};

inline InfinitePathEP make_ep(const KGraph& g, const Path& prefix, const Path& cycle) {
  if (cycle.range != cycle.source || cycle.range != prefix.source) throw Error("cycle must be a loop at s(prefix)");
  for (int c : cycle.degree.c)
    if (c <= 0) throw Error("cycle degree must be positive in every coordinate");
  (void)g;
  return {prefix, cycle};
}

/// x(m, n).
inline Path ep_segment(const KGraph& g, const InfinitePathEP& x, const Degree& m, const Degree& n) {
  if (!m.leq(n)) throw Error("ep_segment: m must be <= n");
  Path p = x.prefix;
  while (!n.leq(p.degree)) p = g.compose(p, x.cycle);
  Path head = g.factorize(p, n, p.degree - n).first;
  return g.factorize(head, m, n - m).second;
}

/// sigma^p(x)
inline InfinitePathEP ep_shift(const KGraph& g, const InfinitePathEP& x, const Degree& p) {
  Path q = x.prefix;
  while (!p.leq(q.degree)) q = g.compose(q, x.cycle);
  return {ep_segment(g, x, p, q.degree), x.cycle};
}

/// Deterministic eventually periodic path starting at v; requires no sources.
inline InfinitePathEP some_infinite_path(const KGraph& g, int v, unsigned choice = 0) {
  Degree step(std::vector<int>(g.rank(), 1));
  std::vector<Path> steps;
  std::vector<int> seen{v};
  int cur = v;
  for (int iter = 0; iter <= g.num_vertices(); ++iter) {
    auto ps = g.paths(cur, step);
    if (ps.empty()) throw Error("vertex has no infinite paths");
    const Path& s = ps[(choice + iter) % ps.size()];
    steps.push_back(s);
    cur = s.source;
    auto it = std::find(seen.begin(), seen.end(), cur);
    if (it != seen.end()) {
      size_t start = static_cast<size_t>(it - seen.begin());
      Path prefix = g.vertex(v);
      for (size_t i = 0; i < start; ++i) prefix = g.compose(prefix, steps[i]);
      Path cycle = steps[start];
      for (size_t i = start + 1; i < steps.size(); ++i) cycle = g.compose(cycle, steps[i]);
      return make_ep(g, prefix, cycle);
    }
    seen.push_back(cur);
  }
  throw Error("unreachable");
}

}  // namespace lsys
