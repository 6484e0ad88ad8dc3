// Command-line front end: verify, min, cyl, check, conv, gallery, report.

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "lsys/cprep.hpp"
#include "lsys/cylsets.hpp"
#include "lsys/gallery.hpp"
#include "lsys/io.hpp"

using namespace lsys;
using json = nlohmann::ordered_json;

namespace {

enum Exit { ok = 0, failed = 1, input_error = 2 };

struct Global {
  std::optional<double> tol;
  std::optional<int> depth;
  std::optional<std::uint64_t> seed;
  std::string format = "text";
};

/// "gallery:NAME[:k]" or a spec file path.
SpecFile load(const std::string& input) {
  const std::string prefix = "gallery:";
  if (input.compare(0, prefix.size(), prefix) == 0) {
    std::string name = input.substr(prefix.size());
    int k = 2;
    if (auto c = name.find(':'); c != std::string::npos) {
      k = std::stoi(name.substr(c + 1));
      name.resize(c);
    }
    return {gallery(name, k), {}, true};
  }
  return read_spec(input);
}

Options effective(const SpecFile& sf, const Global& g) {
  Options o = sf.options;
  if (g.tol) o.tol = *g.tol;
  if (g.depth) o.depth = *g.depth;
  if (g.seed) o.seed = *g.seed;
  return o;
}

void print_report(const Report& r, const Global& g) {
  if (g.format == "json") {
    for (const Check& c : r.checks()) {
      json j{{"report", r.title()}, {"check", c.name}, {"pass", c.pass}};
      if (c.numeric) {
        j["residual"] = c.residual;
        j["bound"] = c.bound;
      }
      if (!c.detail.empty()) j["detail"] = c.detail;
      std::cout << j.dump() << "\n";
    }
    std::cout << json{{"report", r.title()}, {"ok", r.ok()}, {"max_residual", r.max_residual()}}.dump() << "\n";
    return;
  }
  std::cout << "== " << r.title() << "\n";
  for (const Check& c : r.checks()) {
    std::cout << (c.pass ? "  PASS " : "  FAIL ") << c.name;
    if (c.numeric) std::cout << "  residual=" << format_double(c.residual) << " bound=" << format_double(c.bound);
    if (!c.detail.empty()) std::cout << "  (" << c.detail << ")";
    std::cout << "\n";
  }
  std::cout << (r.ok() ? "ok" : "FAILED") << "  max residual " << format_double(r.max_residual()) << "\n";
}

void print_lines(const std::string& title, const std::vector<std::string>& lines, const Global& g) {
  if (g.format == "json") {
    std::cout << json{{"result", title}, {"items", lines}}.dump() << "\n";
    return;
  }
  std::cout << "== " << title << " (" << lines.size() << ")\n";
  for (const auto& l : lines) std::cout << "  " << l << "\n";
}

Report verify_all(const SpecFile& sf, const Options& o, std::unique_ptr<LambdaSystem>& out) {
  Report rep("verify");
  Report graph = verify_kgraph(sf.system.graph);
  rep.merge(graph, "graph");
  if (!graph.ok() || !sf.has_system) return rep;
  Tolerance tol;
  tol.eq = o.tol;
  out = std::make_unique<LambdaSystem>(sf.system, tol);
  Report reg = check_regular(*out, std::max(1, std::min(o.depth, 2)));
  // the graph part was already reported above
  for (Check c : reg.checks())
    if (c.name.compare(0, 6, "graph.") != 0) {
      c.name = "system." + c.name;
      rep.add_check(std::move(c));
    }
  return rep;
}

LambdaSystem build(const SpecFile& sf, const Options& o) {
  Report graph = verify_kgraph(sf.system.graph);
  if (!graph.ok()) {
    std::string why;
    for (const Check& c : graph.checks())
      if (!c.pass) why += (why.empty() ? "" : "; ") + c.name + (c.detail.empty() ? "" : " " + c.detail);
    throw Error("graph is not a valid k-graph: " + why);
  }
  if (!sf.has_system) throw Error("input has no system section");
  Tolerance tol;
  tol.eq = o.tol;
  return LambdaSystem(sf.system, tol);
}

Bisection parse_bisection(const KGraph& g, const std::string& text) {
  auto slash = text.find('/');
  if (slash == std::string::npos) throw Error("bisection '" + text + "' must be LAMBDA/MU");
  return make_bisection(g.parse_path(text.substr(0, slash)), g.parse_path(text.substr(slash + 1)));
}

Degree parse_degree(int k, const std::string& text) {
  Degree d = Degree::zero(k);
  std::stringstream ss(text);
  std::string part;
  int i = 0;
  while (std::getline(ss, part, ',')) {
    if (i >= k) throw Error("degree '" + text + "' has more than " + std::to_string(k) + " entries");
    d.c[i++] = std::stoi(part);
    if (d.c[i - 1] < 0) throw Error("degrees are nonnegative");
  }
  if (i != k) throw Error("degree '" + text + "' needs " + std::to_string(k) + " entries");
  return d;
}

std::string show(const KGraph& g, const Bisection& b) { return "Z(" + g.str(b.lambda) + ", " + g.str(b.mu) + ")"; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lambda-systems of C*-correspondences: k-graphs, cylinder sets, sections and representations"};
  app.require_subcommand(1);
  Global G;
  app.add_option("--tol", G.tol, "equality tolerance");
  app.add_option("--depth", G.depth, "path depth for checks");
  app.add_option("--seed", G.seed, "random seed");
  app.add_option("--format", G.format, "output format")->check(CLI::IsMember({"text", "json"}));

  std::string input, mu, nu, op, a, b, rep_kind = "canonical", gal_name, out_file;
  std::vector<std::string> args;
  int gal_k = 2;

  auto* verify = app.add_subcommand("verify", "check the k-graph, the correspondences and coherence");
  verify->add_option("input", input, "spec file or gallery:NAME")->required();

  auto* minc = app.add_subcommand("min", "list minimal common extensions");
  minc->add_option("input", input)->required();
  minc->add_option("mu", mu)->required();
  minc->add_option("nu", nu)->required();

  auto* cyl = app.add_subcommand("cyl", "cylinder-set operations: intersect, complement, refine, disjointize, member");
  cyl->add_option("input", input)->required();
  cyl->add_option("op", op)->required()->check(CLI::IsMember({"intersect", "complement", "refine", "disjointize", "member"}));
  cyl->add_option("args", args, "LAMBDA/MU bisections, a degree like 1,0 or a witness LAMBDA/MU/NU")->required();

  auto* check = app.add_subcommand("check", "representation, covariance and gauge hypotheses");
  check->add_option("input", input)->required();
  check->add_option("--rep", rep_kind)->check(CLI::IsMember({"canonical", "fock"}));

  auto* conv = app.add_subcommand("conv", "convolve two section literals");
  conv->add_option("input", input)->required();
  conv->add_option("a", a)->required();
  conv->add_option("b", b)->required();

  auto* gal = app.add_subcommand("gallery", "write a built-in system as a spec file");
  gal->add_option("name", gal_name)->required()->check(CLI::IsMember(gallery_names()));
  gal->add_option("-k", gal_k, "rank for zk-crossed");
  gal->add_option("-o,--output", out_file);

  auto* report = app.add_subcommand("report", "verification plus canonical checks and fibre dimensions");
  report->add_option("input", input)->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (gal->parsed()) {
      std::string text = write_spec(gallery(gal_name, gal_k), {});
      if (out_file.empty()) {
        std::cout << text;
      } else {
        std::ofstream f(out_file);
        if (!f) throw Error("cannot write '" + out_file + "'");
        f << text;
      }
      return ok;
    }

    SpecFile sf = load(input);
    Options o = effective(sf, G);

    if (verify->parsed()) {
      std::unique_ptr<LambdaSystem> s;
      Report r = verify_all(sf, o, s);
      print_report(r, G);
      return r.ok() ? ok : failed;
    }

    const KGraph& g = sf.system.graph;
    if (minc->parsed()) {
      Path m = g.parse_path(mu), n = g.parse_path(nu);
      std::vector<std::string> lines;
      for (const auto& [alpha, beta] : g.lambda_min(m, n))
        lines.push_back(g.str(alpha) + " " + g.str(beta) + "  ->  " + g.str(g.compose(m, alpha)));
      print_lines("Lambda^min(" + mu + ", " + nu + ")", lines, G);
      return ok;
    }

    if (cyl->parsed()) {
      std::vector<std::string> lines;
      auto need = [&](size_t n) {
        if (args.size() != n) throw Error(op + " takes " + std::to_string(n) + " arguments");
      };
      if (op == "member") {
        need(2);
        auto p1 = args[0].find('/'), p2 = args[0].rfind('/');
        if (p1 == std::string::npos || p1 == p2) throw Error("witness must be LAMBDA/MU/NU");
        Witness w{g.parse_path(args[0].substr(0, p1)), g.parse_path(args[0].substr(p1 + 1, p2 - p1 - 1)),
                  g.parse_path(args[0].substr(p2 + 1))};
        bool in = member(g, w, parse_bisection(g, args[1]));
        print_lines("member", {in ? "yes" : "no"}, G);
        return ok;
      }
      BisectionUnion u;
      if (op == "intersect") {
        need(2);
        u = intersect(g, parse_bisection(g, args[0]), parse_bisection(g, args[1]));
      } else if (op == "complement") {
        need(2);
        u = complement(g, parse_bisection(g, args[0]), parse_bisection(g, args[1]));
      } else if (op == "refine") {
        need(2);
        u = refine(g, parse_bisection(g, args[0]), parse_degree(g.rank(), args[1]));
      } else {
        std::vector<Bisection> in;
        for (const auto& x : args) in.push_back(parse_bisection(g, x));
        u = disjointize(g, in);
      }
      for (const auto& x : u.items) lines.push_back(show(g, x));
      print_lines(op, lines, G);
      return ok;
    }

    LambdaSystem s = build(sf, o);
    const int depth = std::max(1, o.depth);

    if (check->parsed()) {
      Report all("check " + rep_kind);
      if (rep_kind == "canonical") {
        auto r = canonical_representation(s);
        all.merge(check_representation(s, r, {depth, -1, o.tol}), "relations");
        for (const Degree& n : degrees_with_total_at_most(g.rank(), depth))
          if (!n.is_zero()) all.merge(check_covariance(s, r, n, 1e-8, o.seed), "covariance " + n.str());
        all.merge(check_giut_hypotheses(s, r), "gauge");
      } else {
        Degree top(std::vector<int>(g.rank(), 2 * depth + 1));
        auto r = fock_truncation(s, top, 2 * depth);
        all.merge(check_representation(s, r, {depth, -1, o.tol}), "relations");
        for (const Degree& n : degrees_with_total_at_most(g.rank(), depth))
          if (!n.is_zero()) all.merge(check_covariance(s, r, n, 1e-8, o.seed), "covariance " + n.str());
        all.merge(check_giut_hypotheses(s, r), "gauge");
      }
      print_report(all, G);
      return all.ok() ? ok : failed;
    }

    if (conv->parsed()) {
      Section x = parse_section(s, a), y = parse_section(s, b);
      Section z = convolve(s, x, y, true);
      NormBounds nb = norm_bounds(s, z);
      if (G.format == "json") {
        std::cout << json{{"product", format_section(s, z)}, {"terms", z.terms.size()}, {"lower", nb.lower}, {"upper", nb.upper}}.dump()
                  << "\n";
      } else {
        std::cout << "product: " << format_section(s, z) << "\n";
        std::cout << "terms: " << z.terms.size() << "\n";
        std::cout << "norm bounds: [" << format_display(nb.lower) << ", " << format_display(nb.upper) << "]\n";
      }
      return ok;
    }

    if (report->parsed()) {
      std::unique_ptr<LambdaSystem> sp;
      Report r = verify_all(sf, o, sp);
      auto canon = canonical_representation(s);
      r.merge(check_representation(s, canon, {1, -1, o.tol}), "relations");
      for (const Degree& n : degrees_with_total_at_most(g.rank(), std::min(depth, 2)))
        if (!n.is_zero()) r.merge(check_covariance(s, canon, n, 1e-8, o.seed), "covariance " + n.str());
      for (const Degree& n : degrees_with_total_at_most(g.rank(), std::min(depth, 2))) {
        ProductSystemFibre Y = product_fibre(s, n);
        int expect = 0;
        for (const Path& p : Y.paths) expect += s.module(p)->dim;
        r.add("product_fibre_dim " + n.str(), Y.module->dim == expect, "dim " + std::to_string(Y.module->dim));
      }
      for (int v = 0; v < g.num_vertices(); ++v) {
        TruncatedFibre F = fibre_E(s, some_infinite_path(g, v), 2);
        std::string dims;
        bool sat = true;
        for (const auto& st : F.stages) {
          dims += (dims.empty() ? "" : ",") + std::to_string(st.dim_LM);
          sat = sat && st.span_rank_M == st.dim_MM && st.span_rank_L == st.dim_LL;
        }
        r.add("diagonal_fibre " + g.vertex_id(v), sat, "stage dims " + dims);
      }
      print_report(r, G);
      return r.ok() ? ok : failed;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return input_error;
  }
  return ok;
}
