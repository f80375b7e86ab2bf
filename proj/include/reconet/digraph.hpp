#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace reconet {

struct VertexId {
  std::uint32_t value = 0;

  friend constexpr auto operator<=>(VertexId, VertexId) = default;
};

// An arc is addressed by its endpoints plus an index that tells parallel arcs apart.
// Index k means "the k-th arc from tail to head in insertion order".
struct ArcId {
  VertexId tail;
  VertexId head;
  std::uint32_t index = 0;

  friend constexpr auto operator<=>(const ArcId&, const ArcId&) = default;
};

// Either a vertex or an arc; reconciliation and folding maps take values here.
using Element = std::variant<VertexId, ArcId>;

inline bool is_vertex(const Element& e) { return std::holds_alternative<VertexId>(e); }
inline bool is_arc(const Element& e) { return std::holds_alternative<ArcId>(e); }
inline VertexId as_vertex(const Element& e) { return std::get<VertexId>(e); }
inline const ArcId& as_arc(const Element& e) { return std::get<ArcId>(e); }

// The vertex an element "points at" when paths are extended to it: an arc's head.
inline VertexId head_of(const Element& e) {
  return is_vertex(e) ? as_vertex(e) : as_arc(e).head;
}

struct Path {
  std::vector<VertexId> vertices;
  std::vector<ArcId> arcs;

  friend bool operator==(const Path&, const Path&) = default;
};

class DigraphBuilder;

// Immutable rooted directed acyclic multigraph. Vertex ids may be sparse when the
// graph was derived from another one by deleting vertices; ids are never reused.
class Digraph {
 public:
  Digraph() = default;

  std::size_t id_bound() const { return alive_.size(); }
  std::size_t vertex_count() const { return vertex_count_; }
  std::size_t arc_count() const { return arc_count_; }

  bool contains(VertexId v) const { return v.value < alive_.size() && alive_[v.value]; }
  bool contains(const ArcId& a) const;
  bool contains(const Element& e) const;

  // Sorted by id.
  std::vector<VertexId> vertices() const;
  // Ordered by tail id, then by insertion order among the tail's out-arcs.
  std::vector<ArcId> arcs() const;

  // Children/parents with repetition for parallel arcs, in insertion order.
  std::span<const VertexId> children(VertexId v) const;
  std::span<const VertexId> parents(VertexId v) const;
  std::vector<ArcId> out_arcs(VertexId v) const;
  std::vector<ArcId> in_arcs(VertexId v) const;

  std::size_t outdegree(VertexId v) const { return children(v).size(); }
  std::size_t indegree(VertexId v) const { return parents(v).size(); }
  std::size_t multiplicity(VertexId tail, VertexId head) const;
  bool has_multi_arcs() const;

  std::optional<VertexId> root() const { return root_; }
  // Outdegree-0 vertices, sorted.
  std::vector<VertexId> sinks() const;
  // Parents before children; ties broken by id.
  const std::vector<VertexId>& topological_order() const { return topo_; }

  // True iff `to` is a descendant of `from` (a directed path, possibly trivial).
  bool reaches(VertexId from, VertexId to) const;

  // Unique incoming arc e^v. Throws StructureError when v has indegree != 1.
  ArcId in_arc(VertexId v) const;

 private:
  friend class DigraphBuilder;

  void check(VertexId v) const;

  std::vector<char> alive_;
  std::vector<std::vector<VertexId>> out_;
  std::vector<std::vector<VertexId>> in_;
  std::optional<VertexId> root_;
  std::size_t vertex_count_ = 0;
  std::size_t arc_count_ = 0;
  std::vector<VertexId> topo_;
  // desc_[v] is a bitset over vertex ids of all descendants of v (v included).
  std::vector<std::vector<std::uint64_t>> desc_;
  std::size_t words_ = 0;
};

// Single-owner builder. `build` validates acyclicity and the root conditions.
class DigraphBuilder {
 public:
  DigraphBuilder() = default;
  // Starts from a copy of an existing graph, keeping all vertex ids.
  explicit DigraphBuilder(const Digraph& g);

  VertexId add_vertex();
  ArcId add_arc(VertexId tail, VertexId head);
  void remove_arc(const ArcId& arc);
  // Removes the vertex and every incident arc.
  void remove_vertex(VertexId v);
  void set_root(VertexId v);

  bool contains(VertexId v) const { return v.value < alive_.size() && alive_[v.value]; }
  std::span<const VertexId> children(VertexId v) const { return out_.at(v.value); }
  std::span<const VertexId> parents(VertexId v) const { return in_.at(v.value); }

  // When no root was set and exactly one indegree-0 vertex exists, it becomes the root.
  Digraph build() const;

 private:
  void check(VertexId v) const;

  std::vector<char> alive_;
  std::vector<std::vector<VertexId>> out_;
  std::vector<std::vector<VertexId>> in_;
  std::optional<VertexId> root_;
};

// a ⪯ b on vertices and arcs. For an arc e=(u,v): x ≺ e iff x ⪯ v, e ≺ x iff u ⪯ x,
// and e ⪯ f=(a,b) iff e == f or u ⪯ b.
bool is_ancestor(const Digraph& g, const Element& a, const Element& b);
inline bool is_strict_ancestor(const Digraph& g, const Element& a, const Element& b) {
  return a != b && is_ancestor(g, a, b);
}
inline bool comparable(const Digraph& g, const Element& a, const Element& b) {
  return is_ancestor(g, a, b) || is_ancestor(g, b, a);
}

// L(x): outdegree-0 vertices below or equal to x, sorted.
std::vector<VertexId> leaves_below(const Digraph& g, VertexId x);

// Least common ancestor in a tree (every non-root vertex has indegree 1).
VertexId lca(const Digraph& g, std::span<const VertexId> vertices);
// Arcs are replaced by their tails, as lca(x, e) := lca(x, t(e)).
VertexId lca_elements(const Digraph& g, std::span<const Element> elements);

// True iff z separates x and y: z has two distinct out-arcs, one starting a path to x
// and the other a path to y. Arcs stand for their heads.
bool separates(const Digraph& g, VertexId z, const Element& x, const Element& y);
// Q(x, y), sorted.
std::vector<VertexId> separation_set(const Digraph& g, const Element& x, const Element& y);
// Q²(x1..xk): union of Q(xi, xj) over all i <= j, sorted.
std::vector<VertexId> separation_set_multi(const Digraph& g, std::span<const Element> xs);
// z ∈ Q²(xs) without materializing the set.
bool in_separation_set_multi(const Digraph& g, VertexId z, std::span<const Element> xs);

struct Subdivision {
  Digraph graph;
  // Original vertex ids are kept; this maps every original id to itself.
  std::map<VertexId, VertexId> vertex_map;
  // Every original arc maps to the path that replaces it (a single arc if untouched).
  std::map<ArcId, Path> arc_paths;
  // Fresh interior vertices, in creation order.
  std::vector<VertexId> fresh_vertices;
};

// Replaces each arc `a` in the plan by a path of plan[a] arcs.
Subdivision subdivide(const Digraph& g, const std::map<ArcId, std::uint32_t>& plan);

std::string to_string(VertexId v);
std::string to_string(const ArcId& a);
std::string to_string(const Element& e);

}  // namespace reconet

template <>
struct std::hash<reconet::VertexId> {
  std::size_t operator()(reconet::VertexId v) const noexcept { return v.value; }
};
