#include <doctest.h>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "reconet/construct.hpp"
#include "reconet/io.hpp"
#include "reconet/triples.hpp"
#include "reconet/unfold.hpp"

using namespace reconet;
using oracle::Rng;

namespace {

std::vector<std::string> names_of(const Labeled& g, const std::vector<VertexId>& vs) {
  std::vector<std::string> out;
  for (auto v : vs) out.push_back(g.name(v));
  std::sort(out.begin(), out.end());
  return out;
}

// W_x straight from its definition: proper ancestors of x whose leaf set is {x}.
std::vector<VertexId> w_brute(const Network& n, const oracle::Closure& c, VertexId x) {
  std::vector<VertexId> out;
  for (auto v : n.graph().vertices())
    if (v != x && c[v.value][x.value] &&
        oracle::brute_leaves_below(n.graph(), c, v) == std::vector<VertexId>{x})
      out.push_back(v);
  return out;
}

// Random subdivision of a MUL-tree, fresh vertices named s<k>.
std::pair<MULTree, std::map<ArcId, Path>> random_subdivision(Rng& rng, const MULTree& m) {
  std::map<ArcId, std::uint32_t> plan;
  for (const auto& a : m.graph().arcs())
    if (oracle::coin(rng, 0.4)) plan[a] = static_cast<std::uint32_t>(oracle::pick(rng, 2, 3));
  auto s = subdivide(m.graph(), plan);
  Names names = m.names();
  auto species = m.leaf_species();
  names.resize(s.graph.id_bound());
  species.resize(s.graph.id_bound());
  for (std::size_t i = 0; i < s.fresh_vertices.size(); ++i) names[s.fresh_vertices[i].value] = "s" + std::to_string(i);
  return {MULTree::validate(s.graph, names, species, true), s.arc_paths};
}

GeneTree wb_tree(Rng& rng, std::size_t leaves = 12, std::size_t species = 5) {
  return oracle::random_gene_tree(rng, leaves, species, true);
}

}  // namespace

TEST_CASE("associated MUL-tree of the cherry") {
  auto t = parse_gene_tree("((a@A,b@B)S);");
  auto a = associate_mul(t);
  const auto& g = a.mul.graph();
  CHECK(g.vertex_count() == 4);
  CHECK(g.outdegree(a.mul.root()) == 1);
  CHECK(g.children(a.mul.root()).front() == t.root());
  CHECK(a.kappa.at(t.root()) == Element(t.root()));
  CHECK(a.mul.species_of(t.at("a")) == "A");
  CHECK(check_mul(t, a.mul, a.kappa).ok());
}

TEST_CASE("associated MUL-tree maps duplications to arcs") {
  auto t = parse_gene_tree(fixtures::kRepeatTree);
  auto a = associate_mul(t);
  CHECK(a.mul.chi("A").size() == 2);
  CHECK(a.mul.chi("C").size() == 1);
  auto d = parse_gene_tree("((a@A,a2@A)D,b@B)S;");
  auto ad = associate_mul(d);
  auto dup = *d.parent(d.at("a"));
  CHECK(ad.kappa.at(dup) == Element(ad.mul.graph().in_arc(dup)));
  CHECK(check_mul(d, ad.mul, ad.kappa).ok());
}

TEST_CASE("kappa lifts onto subdivisions") {
  auto d = parse_gene_tree("((a@A,a2@A)D,b@B)S;");
  auto a = associate_mul(d);
  auto same = lift_kappa_to_subdivision(a.kappa, a.mul, a.mul, {});
  CHECK(same == a.kappa);

  auto dup = *d.parent(d.at("a"));
  auto in = a.mul.graph().in_arc(dup);
  auto s = subdivide(a.mul.graph(), {{in, 2}});
  Names names = a.mul.names();
  names.resize(s.graph.id_bound());
  names[s.fresh_vertices.front().value] = "mid";
  auto species = a.mul.leaf_species();
  species.resize(s.graph.id_bound());
  auto sub = MULTree::validate(s.graph, names, species, true);
  auto lifted = lift_kappa_to_subdivision(a.kappa, a.mul, sub, s.arc_paths);
  CHECK(lifted.at(dup) == Element(s.arc_paths.at(in).arcs.back()));
  CHECK(check_mul(d, sub, lifted).ok());

  Rng rng(503);
  for (int it = 0; it < 200; ++it) {
    auto t = oracle::random_gene_tree(rng, 10, 4);
    auto am = associate_mul(t);
    auto [msub, paths] = random_subdivision(rng, am.mul);
    REQUIRE(check_mul(t, msub, lift_kappa_to_subdivision(am.kappa, am.mul, msub, paths)).ok());
  }
}

TEST_CASE("folding singly labeled MUL-trees changes nothing") {
  auto m = parse_mul("((A,(B,C)x)y)root;");
  auto f = fold_mul_to_network(m);
  CHECK(f.network.is_tree());
  CHECK(f.network.graph().vertex_count() == m.graph().vertex_count());
  CHECK(f.par.empty());
  CHECK(check_folding(f.subdivided.tree, f.network, f.folding).ok());
}

TEST_CASE("folding the four-leaf B example gives two double arcs") {
  auto m = parse_mul(fixtures::kSiblingMul);
  auto f = fold_mul_to_network(m);
  const auto& n = f.network;
  CHECK(check_folding(f.subdivided.tree, n, f.folding).ok());
  CHECK(n.graph().multiplicity(n.at("a"), n.at("p_B")) == 2);
  CHECK(n.graph().multiplicity(n.at("b"), n.at("p_C")) == 2);
  CHECK(n.graph().multiplicity(n.at("r"), n.at("p_B")) == 1);
  CHECK(n.is_hybrid(n.at("p_B")));
  std::size_t multi_pairs = 0;
  for (auto u : n.graph().vertices()) {
    std::set<VertexId> heads(n.graph().children(u).begin(), n.graph().children(u).end());
    for (auto h : heads) multi_pairs += n.graph().multiplicity(u, h) > 1;
  }
  CHECK(multi_pairs == 2);
}

TEST_CASE("random folds are valid, order preserving, and multi-arcs come from sibling leaves") {
  Rng rng(509);
  for (int it = 0; it < 200; ++it) {
    auto m = oracle::random_mul(rng, oracle::pick(rng, 2, 10), 4);
    auto f = fold_mul_to_network(m);
    REQUIRE(Network::check(f.network.graph(), f.network.names()).ok());
    REQUIRE(check_folding(f.subdivided.tree, f.network, f.folding).ok());
    REQUIRE(oracle::folding_preserves_order(f.subdivided.tree.graph(), f.network.graph(), f.folding));
    bool siblings = false;
    for (auto v : m.graph().vertices()) {
      std::map<std::string, int> count;
      for (auto c : m.graph().children(v))
        if (m.is_leaf(c)) siblings = siblings || ++count[m.species_of(c)] >= 2;
    }
    REQUIRE(siblings == !f.network.is_multi_arc_free());
  }
}

TEST_CASE("composition gives TreeNet maps") {
  Rng rng(521);
  for (int it = 0; it < 200; ++it) {
    auto t = oracle::random_gene_tree(rng, 14, 5);
    auto p = pipeline(t);
    REQUIRE(check_mul(t, p.fold.subdivided.tree, p.kappa_sub).ok());
    REQUIRE(compose_reconciliation(p.kappa_sub, p.fold.folding) == p.mu);
    REQUIRE(check_treenet(t, p.fold.network, p.mu).ok());
  }
}

TEST_CASE("star sets of a tree with distinct species are empty") {
  auto n = parse_network("((A,B,C)p)r;");
  auto s = star_sets(n);
  CHECK(s.W.empty());
  CHECK(s.V.empty());
  CHECK(s.w_of("A").empty());
  auto e = eliminate_multiarcs(n);
  CHECK(same_network(e.network, n));
  CHECK(e.fresh.empty());
  CHECK(e.removed.empty());
}

TEST_CASE("star sets and elimination on the five-species example") {
  auto t = parse_gene_tree(fixtures::kNamedInnerTree);
  auto p = pipeline(t);
  const auto& n = p.fold.network;
  auto s = star_sets(n);
  CHECK(s.w_of("A").empty());
  CHECK(names_of(n, s.v_of("B")) == std::vector<std::string>{"2", "3"});
  CHECK(names_of(n, s.v_of("C")) == std::vector<std::string>{"3"});
  CHECK(names_of(n, s.v_of("D")) == std::vector<std::string>{"3", "4"});
  CHECK(names_of(n, s.v_of("E")) == std::vector<std::string>{"4"});
  std::vector<VertexId> inner_w1;
  for (auto v : s.W1)
    if (!n.is_leaf(v) && v != n.root()) inner_w1.push_back(v);
  CHECK(names_of(n, inner_w1) == std::vector<std::string>{"1", "2", "3", "4"});

  REQUIRE(p.star);
  const auto& ns = p.star->network;
  CHECK(ns.is_multi_arc_free());
  CHECK(ns.find("w_B"));
  CHECK(ns.find("w_D"));
  CHECK_FALSE(ns.find("w_C"));
  CHECK(ns.graph().multiplicity(ns.at("3"), ns.at("C")) == 1);
  CHECK(ns.graph().multiplicity(ns.at("4"), ns.at("E")) == 1);
  CHECK(ns.graph().multiplicity(ns.at("w_B"), ns.at("B")) == 1);
  CHECK(check_treenet(t, ns, p.mu_star).ok());
  CHECK(check_folding(universal_folding(ns).unfolding.tree, ns, universal_folding(ns).folding).ok());
}

TEST_CASE("star set lemmas on pipeline networks") {
  Rng rng(523);
  for (int it = 0; it < 150; ++it) {
    auto t = oracle::random_gene_tree(rng, 14, 5);
    const auto& n = pipeline(t).fold.network;
    auto c = oracle::closure(n.graph());
    auto s = star_sets(n);
    std::set<VertexId> w2;
    for (const auto& x : n.species()) {
      auto lx = n.leaf(x);
      auto w = w_brute(n, c, lx);
      REQUIRE(s.w_of(x) == w);
      REQUIRE(std::find(w.begin(), w.end(), lx) == w.end());
      std::set<VertexId> vx;
      for (const auto& a : n.graph().arcs())
        if (std::count(w.begin(), w.end(), a.head) && !std::count(w.begin(), w.end(), a.tail)) vx.insert(a.tail);
      REQUIRE(s.v_of(x) == std::vector<VertexId>(vx.begin(), vx.end()));
      if (!w.empty()) REQUIRE_FALSE(vx.empty());
      for (auto v : w) REQUIRE(w2.insert(v).second);
      if (!w.empty()) w2.insert(lx);
      // Everything between a W_x vertex and x stays in W_x.
      for (auto v : w)
        for (auto ch : n.graph().children(v)) REQUIRE((ch == lx || std::count(w.begin(), w.end(), ch)));
    }
    std::vector<VertexId> w1;
    for (auto v : n.graph().vertices())
      if (!w2.count(v)) w1.push_back(v);
    REQUIRE(s.W1 == w1);
    REQUIRE(s.W2 == std::vector<VertexId>(w2.begin(), w2.end()));
  }
}

TEST_CASE("elimination removes multi-arcs and keeps the W1 part") {
  Rng rng(541);
  for (int it = 0; it < 200; ++it) {
    auto t = oracle::random_gene_tree(rng, 14, 5, it % 2 == 0);
    auto p = pipeline(t);
    const auto& n = p.fold.network;
    auto e = eliminate_multiarcs(n);
    const auto& ns = e.network;
    REQUIRE(ns.is_multi_arc_free());
    REQUIRE(Network::check(ns.graph(), ns.names()).ok());
    auto stars = star_sets(n);
    std::set<VertexId> w1(stars.W1.begin(), stars.W1.end());
    for (auto v : stars.W1) {
      REQUIRE(ns.graph().contains(v));
      REQUIRE(ns.name(v) == n.name(v));
    }
    for (const auto& a : n.graph().arcs())
      if (w1.count(a.tail) && w1.count(a.head)) REQUIRE(ns.graph().contains(a));
    for (const auto& a : ns.graph().arcs())
      if (w1.count(a.tail) && w1.count(a.head)) REQUIRE(n.graph().contains(a));
    auto after = star_sets(ns);
    for (const auto& x : ns.species()) {
      const auto& w = after.w_of(x);
      if (w.empty()) continue;
      REQUIRE(w.size() == 1);
      REQUIRE(e.fresh.count(x));
      REQUIRE(w.front() == e.fresh.at(x));
    }
  }
}

TEST_CASE("mu star") {
  auto bad = parse_gene_tree("((a@A,b@B)S,(a2@A,b2@B)S)S;");
  auto p = pipeline(bad);
  CHECK_FALSE(p.well_behaved);
  CHECK_FALSE(p.star.has_value());
  auto e = eliminate_multiarcs(p.fold.network);
  CHECK_THROWS_AS(build_mu_star(bad, p.mu, p.fold.network, e), PreconditionError);

  Rng rng(547);
  for (int it = 0; it < 200; ++it) {
    auto t = wb_tree(rng);
    auto q = pipeline(t);
    REQUIRE(q.well_behaved);
    REQUIRE(check_treenet(t, q.star->network, q.mu_star).ok());
    for (auto v : t.preorder())
      if (t.is_leaf(v) || t.is_speciation(v)) REQUIRE(q.mu_star.at(v) == q.mu.at(v));
  }
}

TEST_CASE("pipeline on the cherry and determinism") {
  auto t = parse_gene_tree("((a@A,b@B)S);");
  auto p = pipeline(t);
  const auto& n = p.final_network();
  CHECK(n.is_tree());
  CHECK(n.graph().vertex_count() == 4);
  CHECK(p.final_map().at(t.root()) == Element(n.top()));

  Rng rng(557);
  for (int it = 0; it < 50; ++it) {
    auto g = oracle::random_gene_tree(rng, 14, 5);
    auto a = pipeline(g);
    auto b = pipeline(g);
    REQUIRE(write_network(a.final_network()) == write_network(b.final_network()));
    REQUIRE(write_map(g, a.final_network(), a.final_map()) == write_map(g, b.final_network(), b.final_map()));
  }
}

TEST_CASE("the two-copies-of-three example folds onto three hybrids") {
  auto t = parse_gene_tree(fixtures::kRepeatTree);
  auto p = pipeline(t);
  const auto& n = p.fold.network;
  CHECK(p.fold.subdivided.tree.d1().size() == 6);
  std::vector<std::string> hybrids;
  for (auto v : n.graph().vertices())
    if (n.is_hybrid(v)) hybrids.push_back(n.name(v));
  std::sort(hybrids.begin(), hybrids.end());
  CHECK(hybrids == std::vector<std::string>{"p_A", "p_B", "p_D"});
  CHECK(check_treenet(t, n, p.mu).ok());
}

TEST_CASE("network from triples") {
  CHECK_FALSE(network_from_triples({}).has_value());
  auto one = network_from_triples({make_triple("A", "B", "C")});
  REQUIRE(one);
  CHECK(one->is_tree());
  CHECK(displays(*one, make_triple("A", "B", "C")));

  std::vector<Triple> clash{make_triple("A", "B", "C"), make_triple("B", "C", "A")};
  auto both = network_from_triples(clash);
  REQUIRE(both);
  CHECK(both->is_multi_arc_free());
  for (const auto& r : clash) CHECK(displays(*both, r));
  auto gt = triples_gene_tree(clash);
  REQUIRE(gt);
  CHECK(is_well_behaved(*gt));
  CHECK(gt->is_duplication(gt->root()));
}

TEST_CASE("generator") {
  GenParams p;
  p.max_leaves = 2;
  p.species_count = 2;
  auto t = gen_gene_tree(1, p);
  CHECK(t.leaves().size() == 2);
  CHECK(t.inner().size() == 1);
  CHECK(t.species() == std::vector<std::string>{"A", "B"});

  for (std::uint64_t seed : {0ull, 7ull, 99ull}) {
    GenParams q;
    q.max_leaves = 12;
    CHECK(write_gene_tree(gen_gene_tree(seed, q)) == write_gene_tree(gen_gene_tree(seed, q)));
  }
  CHECK(species_name(0) == "A");
  CHECK(species_name(25) == "Z");
  CHECK(species_name(26) == "S26");
}
