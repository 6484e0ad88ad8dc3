#pragma once

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "lsystem.hpp"
#include "sections.hpp"

namespace lsys {

class ParseError : public Error {
 public:
  ParseError(const std::string& where, int line, const std::string& msg)
      : Error(where + ":" + std::to_string(line) + ": " + msg), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

struct Options {
  double tol = 1e-9;
  int depth = 2;
  std::uint64_t seed = 7;
};

struct SpecFile {
  SystemPresentation system;
  Options options;
  bool has_system = false;
};

inline std::string format_real(double x) {
  if (x == 0.0) return "0";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

/// Shorter form for human-facing listings.
inline std::string format_display(double x) {
  if (x == 0.0) return "0";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

inline std::string format_cplx(cplx z) {
  if (z.imag() == 0.0) return format_real(z.real());
  return "(" + format_real(z.real()) + "," + format_real(z.imag()) + ")";
}

/// "R C e00 e01 ..." row-major.
inline std::string format_matrix(const Matrix& m) {
  std::string s = std::to_string(m.rows()) + " " + std::to_string(m.cols());
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) s += " " + format_cplx(m(i, j));
  return s;
}

namespace detail {

struct Token {
  std::string text;
  int line;
};

class Lexer {
 public:
  Lexer(std::istream& in, std::string where) : where_(std::move(where)) {
    std::string line;
    int n = 0;
    while (std::getline(in, line)) {
      ++n;
      if (auto h = line.find('#'); h != std::string::npos) line.resize(h);
      std::istringstream ls(line);
      std::string t;
      while (ls >> t) toks_.push_back({t, n});
    }
    last_line_ = n;
  }

  bool done() const { return pos_ >= toks_.size(); }
  int line() const { return done() ? last_line_ : toks_[pos_].line; }
  const std::string& where() const { return where_; }

  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(where_, line(), msg); }
  [[noreturn]] void fail_at(int at, const std::string& msg) const { throw ParseError(where_, at, msg); }

  const std::string& peek() const {
    if (done()) fail("unexpected end of file");
    return toks_[pos_].text;
  }
  std::string next() {
    std::string t = peek();
    ++pos_;
    return t;
  }
  void expect(const std::string& t) {
    if (peek() != t) fail("expected '" + t + "', found '" + peek() + "'");
    ++pos_;
  }
  int integer() {
    std::string t = next();
    try {
      size_t used = 0;
      int v = std::stoi(t, &used);
      if (used == t.size()) return v;
    } catch (const std::exception&) {
    }
    --pos_;
    fail("expected an integer, found '" + t + "'");
  }
  double real() {
    std::string t = next();
    try {
      size_t used = 0;
      double v = std::stod(t, &used);
      if (used == t.size()) return v;
    } catch (const std::exception&) {
    }
    --pos_;
    fail("expected a number, found '" + t + "'");
  }
  cplx complex() {
    std::string t = next();
    try {
      if (!t.empty() && t.front() == '(') {
        if (t.back() != ')' || t.find(',') == std::string::npos) throw std::invalid_argument("bad");
        size_t c = t.find(',');
        return {std::stod(t.substr(1, c - 1)), std::stod(t.substr(c + 1, t.size() - c - 2))};
      }
      size_t used = 0;
      double v = std::stod(t, &used);
      if (used == t.size()) return v;
    } catch (const std::exception&) {
    }
    --pos_;
    fail("expected a complex literal such as (1,0) or 0.5, found '" + t + "'");
  }
  Matrix matrix() {
    int r = integer(), c = integer();
    if (r < 0 || c < 0) fail("negative matrix dimension");
    Matrix m(r, c);
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < c; ++j) m(i, j) = complex();
    return m;
  }

 private:
  std::string where_;
  std::vector<Token> toks_;
  size_t pos_ = 0;
  int last_line_ = 0;
};

inline KGraph parse_graph_body(Lexer& lx) {
  lx.expect("rank");
  int k = lx.integer();
  if (k < 1) lx.fail("rank must be positive");
  KGraph g(k);
  while (lx.peek() != "end") {
    const int at = lx.line();
    std::string kw = lx.next();
    try {
      if (kw == "vertex") {
        g.add_vertex(lx.next());
      } else if (kw == "edge") {
        std::string id = lx.next();
        int color = lx.integer();
        std::string src = lx.next(), rng = lx.next();
        g.add_edge(id, color, src, rng);
      } else if (kw == "square") {
        std::string f = lx.next(), gg = lx.next(), gp = lx.next(), fp = lx.next();
        g.add_square(f, gg, gp, fp);
      } else {
        lx.fail_at(at, "unknown graph entry '" + kw + "'");
      }
    } catch (const ParseError&) {
      throw;
    } catch (const Error& e) {
      lx.fail_at(at, e.what());
    }
  }
  lx.expect("end");
  return g;
}

inline Bimodule parse_module_body(Lexer& lx, const FDAlgebra& A, const FDAlgebra& B, const std::string& id) {
  lx.expect("dim");
  int d = lx.integer();
  if (d <= 0) lx.fail("module dimension must be positive");
  const int start = lx.line();
  std::vector<Matrix> left(A.dim()), right(B.dim()), inner(B.dim());
  std::vector<bool> hl(A.dim()), hr(B.dim()), hi(B.dim());
  while (lx.peek() != "end") {
    const int at = lx.line();
    std::string kw = lx.next();
    if (kw != "left" && kw != "right" && kw != "inner") lx.fail("unknown module entry '" + kw + "'");
    int k = lx.integer();
    int bound = kw == "left" ? A.dim() : B.dim();
    if (k < 0 || k >= bound) lx.fail_at(at, kw + " index " + std::to_string(k) + " out of range");
    Matrix m = lx.matrix();
    if (m.rows() != d || m.cols() != d) lx.fail_at(at, kw + " matrix must be " + std::to_string(d) + "x" + std::to_string(d));
    if (kw == "left") left[k] = m, hl[k] = true;
    if (kw == "right") right[k] = m, hr[k] = true;
    if (kw == "inner") inner[k] = m, hi[k] = true;
  }
  lx.expect("end");
  for (int k = 0; k < A.dim(); ++k)
    if (!hl[k]) throw ParseError(lx.where(), start, "module '" + id + "' lacks left " + std::to_string(k));
  for (int k = 0; k < B.dim(); ++k)
    if (!hr[k] || !hi[k]) throw ParseError(lx.where(), start, "module '" + id + "' lacks right/inner " + std::to_string(k));
  Bimodule X;
  X.left_alg = A;
  X.right_alg = B;
  X.dim = d;
  X.left = std::move(left);
  X.right = std::move(right);
  X.inner = std::move(inner);
  return X;
}

inline void parse_system_body(Lexer& lx, SystemPresentation& p) {
  const KGraph& g = p.graph;
  std::vector<bool> has_alg(g.num_vertices()), has_mod(g.num_edges()), has_sq(g.squares().size());
  p.vertex_alg.assign(g.num_vertices(), FDAlgebra({1}));
  p.edge_mod.assign(g.num_edges(), Bimodule{});
  p.square_iso.assign(g.squares().size(), Matrix());
  while (lx.peek() != "end") {
    const int at = lx.line();
    std::string kw = lx.next();
    if (kw == "algebra") {
      std::string v = lx.next();
      if (!g.has_vertex(v)) lx.fail_at(at, "unknown vertex '" + v + "'");
      std::vector<int> blocks;
      while (!lx.done() && std::isdigit(static_cast<unsigned char>(lx.peek()[0]))) {
        int b = lx.integer();
        if (b <= 0) lx.fail_at(at, "block sizes must be positive");
        blocks.push_back(b);
      }
      if (blocks.empty()) lx.fail_at(at, "algebra '" + v + "' needs at least one block size");
      p.vertex_alg[g.vertex_index(v)] = FDAlgebra(blocks);
      has_alg[g.vertex_index(v)] = true;
    } else if (kw == "module") {
      std::string e = lx.next();
      if (!g.has_edge(e)) lx.fail_at(at, "unknown edge '" + e + "'");
      int ei = g.edge_index(e);
      const Edge& ed = g.edge(ei);
      if (!has_alg[ed.range] || !has_alg[ed.source]) lx.fail_at(at, "module '" + e + "' appears before the algebras of its endpoints");
      p.edge_mod[ei] = parse_module_body(lx, p.vertex_alg[ed.range], p.vertex_alg[ed.source], e);
      has_mod[ei] = true;
    } else if (kw == "squareiso") {
      std::string f = lx.next(), gg = lx.next();
      if (!g.has_edge(f) || !g.has_edge(gg)) lx.fail_at(at, "squareiso refers to an unknown edge");
      int fi = g.edge_index(f), gi = g.edge_index(gg);
      size_t idx = g.squares().size();
      for (size_t i = 0; i < g.squares().size(); ++i)
        if (g.squares()[i].f == fi && g.squares()[i].g == gi) idx = i;
      if (idx == g.squares().size()) lx.fail_at(at, "squareiso (" + f + "," + gg + ") has no matching square");
      p.square_iso[idx] = lx.matrix();
      has_sq[idx] = true;
    } else {
      lx.fail("unknown system entry '" + kw + "'");
    }
  }
  lx.expect("end");
  for (int v = 0; v < g.num_vertices(); ++v)
    if (!has_alg[v]) lx.fail("vertex '" + g.vertex_id(v) + "' has no algebra");
  for (int e = 0; e < g.num_edges(); ++e)
    if (!has_mod[e]) lx.fail("edge '" + g.edge(e).id + "' has no module");
  for (size_t i = 0; i < has_sq.size(); ++i)
    if (!has_sq[i]) {
      const Square& s = g.squares()[i];
      lx.fail("square (" + g.edge(s.f).id + "," + g.edge(s.g).id + ") has no squareiso");
    }
}

inline SpecFile parse_spec(Lexer& lx, const std::filesystem::path& base) {
  SpecFile sf;
  bool has_graph = false;
  while (!lx.done()) {
    std::string kw = lx.next();
    if (kw == "graph") {
      if (has_graph) lx.fail("duplicate graph section");
      sf.system.graph = parse_graph_body(lx);
      has_graph = true;
    } else if (kw == "graph-file") {
      if (has_graph) lx.fail("duplicate graph section");
      std::filesystem::path path = base / lx.next();
      std::ifstream in(path);
      if (!in) lx.fail("cannot open graph file '" + path.string() + "'");
      Lexer sub(in, path.string());
      sub.expect("graph");
      sf.system.graph = parse_graph_body(sub);
      has_graph = true;
    } else if (kw == "system") {
      if (!has_graph) lx.fail("system section before graph section");
      if (sf.has_system) lx.fail("duplicate system section");
      parse_system_body(lx, sf.system);
      sf.has_system = true;
    } else if (kw == "options") {
      while (lx.peek() != "end") {
        std::string o = lx.next();
        if (o == "tol") sf.options.tol = lx.real();
        else if (o == "depth") sf.options.depth = lx.integer();
        else if (o == "seed") sf.options.seed = static_cast<std::uint64_t>(lx.integer());
        else lx.fail("unknown option '" + o + "'");
      }
      lx.expect("end");
    } else {
      lx.fail("unknown section '" + kw + "'");
    }
  }
  if (!has_graph) lx.fail("missing graph section");
  return sf;
}

}  // namespace detail

inline SpecFile parse_spec(std::istream& in, const std::string& where = "<input>",
                           const std::filesystem::path& base = ".") {
  detail::Lexer lx(in, where);
  return detail::parse_spec(lx, base);
}

inline SpecFile parse_spec_string(const std::string& text) {
  std::istringstream in(text);
  return parse_spec(in);
}

inline SpecFile read_spec(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path.string() + "'");
  return parse_spec(in, path.string(), path.parent_path());
}

inline std::string write_graph(const KGraph& g) {
  std::ostringstream o;
  o << "graph\n  rank " << g.rank() << "\n";
  for (int v = 0; v < g.num_vertices(); ++v) o << "  vertex " << g.vertex_id(v) << "\n";
  for (int e = 0; e < g.num_edges(); ++e) {
    const Edge& ed = g.edge(e);
    o << "  edge " << ed.id << " " << ed.color + 1 << " " << g.vertex_id(ed.source) << " " << g.vertex_id(ed.range) << "\n";
  }
  for (const Square& s : g.squares())
    o << "  square " << g.edge(s.f).id << " " << g.edge(s.g).id << " " << g.edge(s.gp).id << " " << g.edge(s.fp).id << "\n";
  o << "end\n";
  return o.str();
}

inline std::string write_spec(const SystemPresentation& p, const Options& opt = {}) {
  const KGraph& g = p.graph;
  std::ostringstream o;
  o << write_graph(g) << "system\n";
  for (int v = 0; v < g.num_vertices(); ++v) {
    o << "  algebra " << g.vertex_id(v);
    for (int b : p.vertex_alg[v].blocks()) o << " " << b;
    o << "\n";
  }
  for (int e = 0; e < g.num_edges(); ++e) {
    const Bimodule& X = p.edge_mod[e];
    o << "  module " << g.edge(e).id << " dim " << X.dim << "\n";
    for (size_t k = 0; k < X.left.size(); ++k) o << "    left " << k << " " << format_matrix(X.left[k]) << "\n";
    for (size_t k = 0; k < X.right.size(); ++k) o << "    right " << k << " " << format_matrix(X.right[k]) << "\n";
    for (size_t k = 0; k < X.inner.size(); ++k) o << "    inner " << k << " " << format_matrix(X.inner[k]) << "\n";
    o << "  end\n";
  }
  for (size_t i = 0; i < g.squares().size(); ++i) {
    const Square& s = g.squares()[i];
    o << "  squareiso " << g.edge(s.f).id << " " << g.edge(s.g).id << " " << format_matrix(p.square_iso[i]) << "\n";
  }
  o << "end\noptions\n  tol " << format_real(opt.tol) << "\n  depth " << opt.depth << "\n  seed " << opt.seed << "\nend\n";
  return o.str();
}

/// Section literal: terms "LAMBDA|MU|RxC|z z ..." separated by ';', entries "re" or "re,im";
/// operators are in the system's internal orthonormal coordinates.
inline Section parse_section(const LambdaSystem& s, const std::string& text) {
  const KGraph& g = s.graph();
  Section out;
  std::stringstream terms(text);
  std::string term;
  while (std::getline(terms, term, ';')) {
    if (term.find_first_not_of(" \t") == std::string::npos) continue;
    std::vector<std::string> parts;
    std::stringstream ps(term);
    std::string part;
    while (std::getline(ps, part, '|')) parts.push_back(part);
    if (parts.size() != 4) throw Error("section term '" + term + "' must have the form LAMBDA|MU|RxC|entries");
    auto trim = [](std::string x) {
      x.erase(0, x.find_first_not_of(" \t"));
      x.erase(x.find_last_not_of(" \t") + 1);
      return x;
    };
    Path lambda = g.parse_path(trim(parts[0])), mu = g.parse_path(trim(parts[1]));
    std::string shape = trim(parts[2]);
    size_t x = shape.find('x');
    if (x == std::string::npos) throw Error("bad shape '" + shape + "', expected RxC");
    int r = std::stoi(shape.substr(0, x)), c = std::stoi(shape.substr(x + 1));
    std::istringstream es(parts[3]);
    std::vector<cplx> entries;
    std::string tok;
    while (es >> tok) {
      size_t comma = tok.find(',');
      if (comma == std::string::npos) entries.emplace_back(std::stod(tok), 0.0);
      else entries.emplace_back(std::stod(tok.substr(0, comma)), std::stod(tok.substr(comma + 1)));
    }
    if (static_cast<int>(entries.size()) != r * c)
      throw Error("section term '" + trim(parts[0]) + "|" + trim(parts[1]) + "' has " + std::to_string(entries.size()) +
                  " entries, expected " + std::to_string(r * c));
    Matrix T(r, c);
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < c; ++j) T(i, j) = entries[i * c + j];
    out = out + basic(s, lambda, mu, T);
  }
  return out;
}

inline std::string format_section(const LambdaSystem& s, const Section& a) {
  const KGraph& g = s.graph();
  std::string out;
  for (const auto& t : a.terms) {
    if (!out.empty()) out += "; ";
    out += g.str(t.lambda) + "|" + g.str(t.mu) + "|" + std::to_string(t.T.rows()) + "x" + std::to_string(t.T.cols()) + "|";
    for (Eigen::Index i = 0; i < t.T.rows(); ++i)
      for (Eigen::Index j = 0; j < t.T.cols(); ++j) {
        cplx z = t.T(i, j);
        if (std::abs(z.real()) < 1e-15) z.real(0.0);
        if (std::abs(z.imag()) < 1e-15) z.imag(0.0);
        out += (i || j ? " " : "") + format_display(z.real());
        if (z.imag() != 0.0) out += "," + format_display(z.imag());
      }
  }
  return out.empty() ? "0" : out;
}

}  // namespace lsys
