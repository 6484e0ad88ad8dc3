#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "lsys/io.hpp"
#include "oracles.hpp"

using namespace lsys;

namespace {

int error_line(const std::string& text) {
  try {
    parse_spec_string(text);
  } catch (const ParseError& e) {
    return e.line();
  }
  return -1;
}

std::string error_text(const std::string& text) {
  try {
    parse_spec_string(text);
  } catch (const Error& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST(SpecFiles, GalleryRoundTripsByteForByte) {
  for (const auto& [name, p] : oracle::systems()) {
    Options opt{1e-10, 3, 99};
    std::string a = write_spec(p, opt);
    SpecFile f = parse_spec_string(a);
    ASSERT_TRUE(f.has_system) << name;
    EXPECT_EQ(write_spec(f.system, f.options), a) << name;
    EXPECT_EQ(f.options.depth, 3);
    EXPECT_EQ(f.options.seed, 99u);
    EXPECT_DOUBLE_EQ(f.options.tol, 1e-10);
    LambdaSystem s(f.system);
    EXPECT_TRUE(check_regular(s).ok()) << name;
  }
}

TEST(SpecFiles, CommentsAndGraphFiles) {
  auto dir = std::filesystem::temp_directory_path() / "lsys_io_test";
  std::filesystem::create_directories(dir);
  {
    std::ofstream g(dir / "b2.graph");
    g << "# bouquet on two loops\n" << write_graph(bouquet(2));
    std::ofstream f(dir / "b2.spec");
    f << "graph-file b2.graph   # relative to this file\noptions\n  depth 4\nend\n";
  }
  SpecFile f = read_spec(dir / "b2.spec");
  EXPECT_FALSE(f.has_system);
  EXPECT_EQ(f.options.depth, 4);
  EXPECT_EQ(write_graph(f.system.graph), write_graph(bouquet(2)));
  EXPECT_THROW(read_spec(dir / "missing.spec"), Error);
  std::filesystem::remove_all(dir);
}

TEST(SpecFiles, ErrorsCarryLineNumbers) {
  EXPECT_EQ(error_line("graph\n  rank 1\n  vertex v\nend\nbogus\n"), 5);
  EXPECT_EQ(error_line("graph\n  rank x\nend\n"), 2);
  EXPECT_EQ(error_line("# comment\n\ngraph\n  rank 1\n  vertex v\n  vertex v\nend\n"), 6);
  EXPECT_EQ(error_line("graph\n  rank 1\n  vertex v\n  edge e 1 v w\nend\n"), 4);
  EXPECT_EQ(error_line("graph\n  rank 1\n  vertex v\n  edge e 3 v v\nend\n"), 4);
  EXPECT_EQ(error_line("graph\n  rank 1\n  vertex v\n"), 3);
  EXPECT_NE(error_text("options\n  tol 1e-9\nend\n").find("missing graph section"), std::string::npos);
  EXPECT_NE(error_text("graph\n  rank 1\n  vertex v\n  edge e 1 v v\nend\nsystem\n  algebra v 1\nend\n").find("has no module"),
            std::string::npos);
  std::string msg = error_text("graph\n  rank 1\n  vertex v\nend\nsystem\n  algebra v 0\nend\n");
  EXPECT_EQ(msg.rfind("<input>:6:", 0), 0u) << msg;
}

TEST(SpecFiles, MissingSquareIsomorphismIsReported) {
  std::string text = write_spec(zk_crossed(2));
  size_t at = text.find("  squareiso");
  ASSERT_NE(at, std::string::npos);
  text.erase(at, text.find('\n', at) - at + 1);
  EXPECT_NE(error_text(text).find("has no squareiso"), std::string::npos);
}

TEST(SpecFiles, BrokenSquaresParseButFailVerification) {
  KGraph g(2);
  g.add_vertex("v");
  g.add_edge("b", 1, "v", "v");
  g.add_edge("r", 2, "v", "v");
  SpecFile f = parse_spec_string(write_spec(trivial_system(g)));
  EXPECT_FALSE(verify_kgraph(f.system.graph).ok());
}

TEST(SpecFiles, NonInvertibleSquareIsomorphismIsRejected) {
  SystemPresentation p = zk_crossed(2);
  p.square_iso[0].setZero();
  SpecFile f = parse_spec_string(write_spec(p));
  EXPECT_THROW(LambdaSystem{f.system}, Error);
}

TEST(SectionLiterals, RoundTrip) {
  LambdaSystem s(gallery("trivial-b2"));
  Section a = parse_section(s, "e1|v|1x1|1; v|v|1x1|0.5,-1 ; e1,e2|e2|1x1|-2");
  ASSERT_EQ(a.terms.size(), 3u);
  EXPECT_EQ(a.terms[1].T(0, 0), cplx(0.5, -1));
  Section b = parse_section(s, format_section(s, a));
  EXPECT_LT(distance(s, a, b), 1e-12);
  EXPECT_EQ(format_section(s, Section{}), "0");

  LambdaSystem t(gallery("twisted-o2"));
  std::mt19937_64 rng(5);
  for (int i = 0; i < 10; ++i) {
    Section r = random_section(t, rng);
    EXPECT_LT(distance(t, parse_section(t, format_section(t, r)), r), 1e-10);
  }
  EXPECT_THROW(parse_section(s, "e1|v|1x1"), Error);
  EXPECT_THROW(parse_section(s, "e1|v|2x1|1"), Error);
  EXPECT_THROW(parse_section(s, "e3|v|1x1|1"), Error);
  EXPECT_THROW(parse_section(s, "e1|v|1y1|1"), Error);
}

TEST(Formatting, RealsRoundTripExactly) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> n;
  for (int i = 0; i < 100; ++i) {
    double x = n(rng) * std::pow(10.0, i % 7 - 3);
    EXPECT_EQ(std::stod(format_real(x)), x);
  }
  EXPECT_EQ(format_cplx(cplx(2, 0)), "2");
}
