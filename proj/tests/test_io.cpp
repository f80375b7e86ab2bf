#include <doctest.h>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "reconet/construct.hpp"
#include "reconet/io.hpp"
#include "reconet/unfold.hpp"

using namespace reconet;
using oracle::Rng;

namespace {

std::size_t count_lines(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

std::size_t count_of(const std::string& s, const std::string& needle) {
  std::size_t n = 0;
  for (auto p = s.find(needle); p != std::string::npos; p = s.find(needle, p + 1)) ++n;
  return n;
}

}  // namespace

TEST_CASE("gene tree dialect") {
  auto t = parse_gene_tree("((a@A,b@B)S);");
  CHECK(t.leaves().size() == 2);
  CHECK(t.is_speciation(t.root()));
  CHECK(t.sigma(t.at("a")) == "A");

  auto d = parse_gene_tree("((a@A,a2@A)D,b@B)S;");
  CHECK(d.is_speciation(d.root()));
  CHECK(d.is_duplication(*d.parent(d.at("a"))));
  CHECK(d.sigma(d.at("a2")) == "A");

  auto lower = parse_gene_tree("((a@A,a2@A)d,b@B)s;");
  CHECK(same_gene_tree(lower, d));

  auto named = parse_gene_tree("((a@A,b@B)S[top]);");
  CHECK(named.name(named.root()) == "top");

  SigmaTable sigma = parse_sigma("a\tA\nb\tB\n");
  auto bare = parse_gene_tree("(a,b)S;", &sigma);
  CHECK(bare.sigma(bare.at("b")) == "B");
}

TEST_CASE("gene tree parse errors carry positions") {
  auto bad = [](const std::string& text) {
    try {
      parse_gene_tree(text);
    } catch (const ParseError& e) {
      return std::make_pair(e.line(), e.column());
    } catch (const ValidationError&) {
      return std::make_pair(std::size_t{0}, std::size_t{0});
    }
    return std::make_pair(std::size_t{99}, std::size_t{99});
  };
  CHECK(bad("((a@A,b@B)X);").first == 1);
  CHECK(bad("((a@A,b@B)S").first == 1);
  CHECK(bad("((a@A,\n b@B)S;\n)").first >= 1);
  CHECK(bad("(a,b)S;").first == 1);  // no species and no table
  CHECK(bad("((a@A,b@B));").first == 1);
  auto pos = bad("(a@A,\n  b@B)Q;");
  CHECK(pos.first == 2);
  CHECK(pos.second == 7);
  // Semantically invalid: a single species.
  CHECK(bad("((a@A,b@A)S);") == std::make_pair(std::size_t{0}, std::size_t{0}));
  CHECK_THROWS_AS(parse_sigma("a\tA\na\tB\n"), ParseError);
  CHECK_THROWS_AS(parse_sigma("just-one-field\n"), ParseError);
}

TEST_CASE("network dialect") {
  auto two = parse_network("((A,B));");
  CHECK(two.is_tree());
  CHECK(two.graph().outdegree(two.root()) == 1);
  CHECK(two.species() == std::vector<std::string>{"A", "B"});

  auto hyb = parse_network("(((A,(B)#H1),(#H1,C)));");
  std::size_t hybrids = 0;
  for (auto v : hyb.graph().vertices())
    if (hyb.is_hybrid(v)) {
      ++hybrids;
      CHECK(hyb.graph().children(v).front() == hyb.leaf("B"));
    }
  CHECK(hybrids == 1);

  std::vector<std::string> warnings;
  auto rootless = parse_network("(A,B);", &warnings);
  CHECK(warnings.size() == 1);
  CHECK(rootless.graph().outdegree(rootless.root()) == 1);

  auto multi = parse_network("((A,(B)h#H1,h#H1)p)r;");
  CHECK(multi.graph().multiplicity(multi.at("p"), multi.at("h")) == 2);

  CHECK_THROWS_AS(parse_network("((A,#H7));"), ParseError);
  CHECK_THROWS_AS(parse_network("((A,(B)#H1));"), ParseError);
  CHECK_THROWS_AS(parse_network("((A,(B,C)#H1,(#H1,D)));"), ValidationError);
  CHECK_THROWS_AS(parse_network("((A,A));"), ParseError);
}

TEST_CASE("MUL dialect") {
  auto m = parse_mul(fixtures::kSiblingMul);
  CHECK(m.chi("B").size() == 3);
  CHECK(m.chi("C").size() == 2);
  auto g = parse_mul("((x@A,y@A,z@B));");
  CHECK(g.chi("A").size() == 2);
  CHECK(g.find("x"));
  auto again = parse_mul(write_mul(m));
  CHECK(same_mul(again, m));
  auto sub = simple_subdivision(m).tree;
  CHECK(same_mul(parse_mul(write_mul(sub), true), sub));
}

TEST_CASE("quoted names survive a round trip") {
  auto n = parse_network("(('spe cies',B,'it''s')'top node')r;");
  CHECK(n.find("spe cies"));
  CHECK(n.find("it's"));
  CHECK(same_network(parse_network(write_network(n)), n));
}

TEST_CASE("map records") {
  auto t = parse_gene_tree("((a@A,b@B)S);");
  auto n = parse_network("((A,B)p)r;");
  ReconMap mu;
  mu.set(t.at("a"), n.leaf("A"));
  mu.set(t.at("b"), n.leaf("B"));
  mu.set(t.root(), n.top());
  auto text = write_map(t, n, mu);
  CHECK(count_lines(text) == 3);
  CHECK(parse_map(text, t, n, TargetKind::network) == mu);

  CHECK_THROWS_AS(parse_map("zz\tvertex\tA\n", t, n, TargetKind::network), ParseError);
  CHECK_THROWS_AS(parse_map("a\tvertex\tQ\n", t, n, TargetKind::network), ParseError);
  CHECK_THROWS_AS(parse_map("a\tarc\tp>A#3\n", t, n, TargetKind::network), ParseError);
  CHECK_THROWS_AS(parse_map("a\tedge\tA\n", t, n, TargetKind::network), ParseError);

  auto named = parse_gene_tree(fixtures::kNamedInnerTree);
  auto p = pipeline(named);
  const auto& ns = p.final_network();
  auto reread_net = parse_network(write_network(ns));
  auto reread = parse_map(write_map(named, ns, p.final_map()), named, reread_net, TargetKind::network);
  CHECK(check_treenet(named, reread_net, reread).ok());
}

TEST_CASE("triple files") {
  auto r = parse_triples("# example\nAB|C\nb,c|a\n@labels E\n\n");
  CHECK(r.size() == 2);
  CHECK(r.contains(make_triple("A", "B", "C")));
  CHECK(r.contains(make_triple("b", "c", "a")));
  CHECK(r.labels.count("E"));
  CHECK(parse_triples(write_triples(r)) == r);
  CHECK_THROWS_AS(parse_triples("ABC|D\n"), ParseError);
  CHECK_THROWS_AS(parse_triples("A,A|B\n"), ParseError);
  CHECK_THROWS_AS(parse_triples("nothing here\n"), ParseError);
}

TEST_CASE("DOT export") {
  auto n = parse_network("((A,B)p)r;");
  auto dot = export_dot(n);
  CHECK(dot.rfind("digraph G {", 0) == 0);
  CHECK(count_of(dot, "label=") == 4);
  CHECK(count_of(dot, "->") == 3);
  CHECK(dot == export_dot(n));

  auto t = parse_gene_tree("((a@A,a2@A)D,b@B)S;");
  auto gd = export_dot(t);
  CHECK(gd == export_dot(t));
  CHECK(count_of(gd, "->") == 4);

  auto p = pipeline(t);
  DotAnnotation ann{&t, &p.final_map()};
  auto annotated = export_dot(p.final_network(), ann);
  CHECK(annotated.find("{a,a2}") != std::string::npos);
  CHECK(annotated.find("{b}") != std::string::npos);
  CHECK(annotated == export_dot(p.final_network(), ann));

  auto m = parse_mul(fixtures::kSiblingMul);
  CHECK(count_of(export_dot(m), "shape=box") == 7);
}

TEST_CASE("round trips over random documents") {
  Rng rng(809);
  for (int it = 0; it < 300; ++it) {
    auto t = oracle::random_gene_tree(rng, 14, 6, it % 2 == 0);
    auto text = write_gene_tree(t);
    auto back = parse_gene_tree(text);
    REQUIRE(same_gene_tree(back, t));
    REQUIRE(write_gene_tree(back) == text);

    auto p = pipeline(t);
    const auto& n = p.final_network();
    auto nt = write_network(n);
    auto nb = parse_network(nt);
    REQUIRE(same_network(nb, n));
    REQUIRE(write_network(nb) == nt);
    REQUIRE(same_network(parse_network(write_network(p.fold.network)), p.fold.network));

    auto mt = write_map(t, n, p.final_map());
    REQUIRE(parse_map(mt, t, n, TargetKind::network) == p.final_map());
    REQUIRE(check_treenet(t, nb, parse_map(mt, t, nb, TargetKind::network)).ok());

    REQUIRE(same_mul(parse_mul(write_mul(p.fold.mul)), p.fold.mul));
    REQUIRE(same_mul(parse_mul(write_mul(p.fold.subdivided.tree), true), p.fold.subdivided.tree));

    auto r = informative_triples(t);
    REQUIRE(parse_triples(write_triples(r)) == r);
  }
}
