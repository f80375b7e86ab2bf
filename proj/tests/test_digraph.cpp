#include <doctest.h>

#include <set>

#include "oracles.hpp"
#include "reconet/digraph.hpp"

using namespace reconet;
using oracle::Rng;

namespace {

struct Chain {
  Digraph g;
  VertexId r, u, v;
};

Chain chain() {
  DigraphBuilder b;
  Chain c;
  c.r = b.add_vertex();
  c.u = b.add_vertex();
  c.v = b.add_vertex();
  b.add_arc(c.r, c.u);
  b.add_arc(c.u, c.v);
  c.g = b.build();
  return c;
}

// r -> p, p -> a, p -> b
Digraph cherry() {
  DigraphBuilder b;
  for (int i = 0; i < 4; ++i) b.add_vertex();
  b.add_arc(VertexId{0}, VertexId{1});
  b.add_arc(VertexId{1}, VertexId{2});
  b.add_arc(VertexId{1}, VertexId{3});
  return b.build();
}

}  // namespace

TEST_CASE("builder assigns stable ids and indexes parallel arcs") {
  DigraphBuilder b;
  auto x = b.add_vertex();
  auto y = b.add_vertex();
  auto a0 = b.add_arc(x, y);
  auto a1 = b.add_arc(x, y);
  CHECK(a0.index == 0);
  CHECK(a1.index == 1);
  auto g = b.build();
  CHECK(g.root() == x);
  CHECK(g.multiplicity(x, y) == 2);
  CHECK(g.has_multi_arcs());
  CHECK(g.arc_count() == 2);

  DigraphBuilder c(g);
  c.remove_arc(a0);
  auto z = c.add_vertex();
  CHECK(z.value == 2);
  c.add_arc(y, z);
  auto h = c.build();
  CHECK(h.multiplicity(x, y) == 1);
  CHECK(h.out_arcs(x).front().index == 0);
  CHECK_FALSE(h.has_multi_arcs());
}

TEST_CASE("builder rejects cycles, unreachable vertices and a root with parents") {
  DigraphBuilder b;
  auto x = b.add_vertex();
  auto y = b.add_vertex();
  b.add_arc(x, y);
  b.add_arc(y, x);
  CHECK_THROWS_AS(b.build(), StructureError);

  DigraphBuilder c;
  auto r = c.add_vertex();
  auto s = c.add_vertex();
  auto t = c.add_vertex();
  c.add_arc(r, s);
  c.set_root(r);
  c.add_vertex();
  (void)t;
  CHECK_THROWS_AS(c.build(), StructureError);

  DigraphBuilder d;
  auto p = d.add_vertex();
  auto q = d.add_vertex();
  d.add_arc(p, q);
  d.set_root(q);
  CHECK_THROWS_AS(d.build(), StructureError);
}

TEST_CASE("removed vertex ids are not reused") {
  DigraphBuilder b;
  auto r = b.add_vertex();
  auto x = b.add_vertex();
  b.add_arc(r, x);
  b.remove_vertex(x);
  auto y = b.add_vertex();
  CHECK(y.value == 2);
  b.add_arc(r, y);
  auto g = b.build();
  CHECK_FALSE(g.contains(x));
  CHECK(g.vertex_count() == 2);
  CHECK(g.id_bound() == 3);
}

TEST_CASE("is_ancestor on vertices and arcs") {
  auto c = chain();
  ArcId ru{c.r, c.u, 0};
  ArcId uv{c.u, c.v, 0};
  CHECK(is_ancestor(c.g, c.v, c.v));
  CHECK(is_ancestor(c.g, c.v, ru));
  CHECK_FALSE(is_ancestor(c.g, ru, c.v));
  CHECK(is_ancestor(c.g, uv, ru));
  CHECK_FALSE(is_ancestor(c.g, ru, uv));
  CHECK(is_ancestor(c.g, ru, ru));
  CHECK(is_ancestor(c.g, c.u, ru));
  CHECK(is_ancestor(c.g, ru, c.r));
  CHECK_FALSE(is_ancestor(c.g, c.r, ru));
  CHECK_THROWS_AS(is_ancestor(c.g, VertexId{9}, c.v), IdentifierError);
  CHECK_THROWS_AS(is_ancestor(c.g, ArcId{c.r, c.v, 0}, c.v), IdentifierError);
}

TEST_CASE("is_ancestor matches the transitive closure on random DAGs") {
  Rng rng(11);
  for (int it = 0; it < 150; ++it) {
    auto n = oracle::pick(rng, 1, 12);
    auto g = oracle::random_dag(rng, n, 0.25, it % 3 == 0);
    auto cl = oracle::closure(g);
    auto els = oracle::elements(g);
    for (const auto& a : els)
      for (const auto& b : els) REQUIRE(is_ancestor(g, a, b) == oracle::brute_below(cl, a, b));
    // Partial order on vertices.
    for (auto x : g.vertices())
      for (auto y : g.vertices())
        if (x != y && is_ancestor(g, x, y)) REQUIRE_FALSE(is_ancestor(g, y, x));
  }
}

TEST_CASE("leaves_below") {
  auto g = cherry();
  CHECK(leaves_below(g, VertexId{2}) == std::vector<VertexId>{VertexId{2}});
  CHECK(leaves_below(g, VertexId{0}) == g.sinks());
  CHECK_THROWS_AS(leaves_below(g, VertexId{7}), IdentifierError);
  Rng rng(5);
  for (int it = 0; it < 100; ++it) {
    auto d = oracle::random_dag(rng, oracle::pick(rng, 1, 12), 0.2);
    auto cl = oracle::closure(d);
    for (auto v : d.vertices()) REQUIRE(leaves_below(d, v) == oracle::brute_leaves_below(d, cl, v));
  }
}

TEST_CASE("lca") {
  auto g = cherry();
  std::vector<VertexId> one{VertexId{2}};
  CHECK(lca(g, one) == VertexId{2});
  std::vector<VertexId> ab{VertexId{2}, VertexId{3}};
  CHECK(lca(g, ab) == VertexId{1});
  std::vector<Element> mixed{VertexId{2}, ArcId{VertexId{1}, VertexId{3}, 0}};
  CHECK(lca_elements(g, mixed) == VertexId{1});

  DigraphBuilder b;
  for (int i = 0; i < 4; ++i) b.add_vertex();
  b.add_arc(VertexId{0}, VertexId{1});
  b.add_arc(VertexId{0}, VertexId{2});
  b.add_arc(VertexId{1}, VertexId{3});
  b.add_arc(VertexId{2}, VertexId{3});
  auto dag = b.build();
  std::vector<VertexId> h{VertexId{3}};
  CHECK_THROWS_AS(lca(dag, h), StructureError);

  Rng rng(17);
  for (int it = 0; it < 200; ++it) {
    auto t = oracle::random_tree(rng, oracle::pick(rng, 1, 12));
    auto vs = t.vertices();
    std::vector<VertexId> subset;
    for (auto v : vs)
      if (oracle::coin(rng, 0.4)) subset.push_back(v);
    if (subset.empty()) subset.push_back(vs.back());
    REQUIRE(lca(t, subset) == oracle::brute_lca(t, subset));
  }
}

TEST_CASE("separation set in trees is empty or the lca") {
  Rng rng(23);
  for (int it = 0; it < 200; ++it) {
    auto t = oracle::random_tree(rng, oracle::pick(rng, 1, 12));
    for (auto v : t.vertices())
      for (auto w : t.vertices()) {
        auto q = separation_set(t, v, w);
        if (comparable(t, v, w)) {
          REQUIRE(q.empty());
        } else {
          std::vector<VertexId> pair{v, w};
          REQUIRE(q == std::vector<VertexId>{lca(t, pair)});
        }
      }
  }
}

TEST_CASE("hybrid below a tree vertex separates a leaf from itself") {
  // z -> p, z -> q, p -> h, q -> h, h -> x, plus a root arc.
  DigraphBuilder b;
  auto r = b.add_vertex();
  auto z = b.add_vertex();
  auto p = b.add_vertex();
  auto q = b.add_vertex();
  auto h = b.add_vertex();
  auto x = b.add_vertex();
  b.add_arc(r, z);
  b.add_arc(z, p);
  b.add_arc(z, q);
  b.add_arc(p, h);
  b.add_arc(q, h);
  b.add_arc(h, x);
  auto g = b.build();
  auto q2 = separation_set(g, x, x);
  CHECK(q2 == std::vector<VertexId>{z});
  CHECK(q2 == oracle::brute_separation_set(g, x, x));
  std::vector<Element> xs{x};
  CHECK(separation_set_multi(g, xs) == q2);
}

TEST_CASE("separation set agrees with path enumeration on random DAGs") {
  Rng rng(31);
  for (int it = 0; it < 150; ++it) {
    auto g = oracle::random_dag(rng, oracle::pick(rng, 2, 10), 0.25, it % 4 == 0);
    auto els = oracle::elements(g);
    for (std::size_t i = 0; i < els.size(); ++i)
      for (std::size_t j = i; j < els.size(); ++j) {
        auto q = separation_set(g, els[i], els[j]);
        REQUIRE(q == oracle::brute_separation_set(g, els[i], els[j]));
        REQUIRE(q == separation_set(g, els[j], els[i]));
      }
  }
}

TEST_CASE("separation_set_multi is the pairwise union") {
  Rng rng(37);
  for (int it = 0; it < 100; ++it) {
    auto g = oracle::random_dag(rng, oracle::pick(rng, 2, 10), 0.3);
    auto els = oracle::elements(g);
    std::vector<Element> xs;
    auto k = oracle::pick(rng, 1, 4);
    for (std::size_t i = 0; i < k; ++i) xs.push_back(els[oracle::pick(rng, 0, els.size() - 1)]);
    std::set<VertexId> expect;
    for (std::size_t i = 0; i < xs.size(); ++i)
      for (std::size_t j = i; j < xs.size(); ++j)
        for (auto z : oracle::brute_separation_set(g, xs[i], xs[j])) expect.insert(z);
    auto got = separation_set_multi(g, xs);
    REQUIRE(got == std::vector<VertexId>(expect.begin(), expect.end()));
    for (auto z : g.vertices()) REQUIRE(in_separation_set_multi(g, z, xs) == expect.count(z) > 0);
  }
}

TEST_CASE("subdivide") {
  auto c = chain();
  auto same = subdivide(c.g, {});
  CHECK(same.graph.vertex_count() == 3);
  CHECK(same.fresh_vertices.empty());
  CHECK(same.arc_paths.at(ArcId{c.r, c.u, 0}).arcs.size() == 1);

  auto two = subdivide(c.g, {{ArcId{c.u, c.v, 0}, 2}});
  CHECK(two.graph.vertex_count() == 4);
  const auto& p = two.arc_paths.at(ArcId{c.u, c.v, 0});
  CHECK(p.arcs.size() == 2);
  CHECK(p.vertices.front() == c.u);
  CHECK(p.vertices.back() == c.v);
  CHECK_THROWS_AS(subdivide(c.g, {{ArcId{c.u, c.v, 0}, 0}}), ArgumentError);

  Rng rng(41);
  for (int it = 0; it < 100; ++it) {
    auto g = oracle::random_dag(rng, oracle::pick(rng, 2, 10), 0.3, true);
    std::map<ArcId, std::uint32_t> plan;
    std::size_t extra = 0;
    for (const auto& a : g.arcs())
      if (oracle::coin(rng, 0.4)) {
        auto k = static_cast<std::uint32_t>(oracle::pick(rng, 1, 3));
        plan[a] = k;
        extra += k - 1;
      }
    auto s = subdivide(g, plan);
    REQUIRE(s.graph.vertex_count() == g.vertex_count() + extra);
    REQUIRE(s.graph.arc_count() == g.arc_count() + extra);
    for (auto a : g.vertices())
      for (auto b : g.vertices()) REQUIRE(g.reaches(a, b) == s.graph.reaches(a, b));
  }
}

TEST_CASE("in_arc requires indegree one") {
  auto c = chain();
  CHECK(c.g.in_arc(c.v) == ArcId{c.u, c.v, 0});
  CHECK_THROWS_AS(c.g.in_arc(c.r), StructureError);
}
