#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "reconet/digraph.hpp"
#include "reconet/report.hpp"

namespace reconet {

// Vertex names indexed by VertexId::value. Dead ids carry an empty name.
using Names = std::vector<std::string>;

// Returns `base`, or `base` with primes appended until it is not in `taken`.
std::string unique_name(const std::string& base, const std::map<std::string, VertexId>& taken);

// Shared name lookup for the labeled graph types below.
class Labeled {
 public:
  const Digraph& graph() const { return g_; }
  const Names& names() const { return names_; }
  const std::string& name(VertexId v) const;
  std::optional<VertexId> find(const std::string& name) const;
  // Like find, but throws IdentifierError.
  VertexId at(const std::string& name) const;
  VertexId root() const { return *g_.root(); }
  bool is_leaf(VertexId v) const { return g_.outdegree(v) == 0; }

 protected:
  Labeled() = default;
  Labeled(Digraph g, Names names);

  Digraph g_;
  Names names_;
  std::map<std::string, VertexId> by_name_;
};

// Species network. Leaves are named by their species.
class Network : public Labeled {
 public:
  Network() = default;

  // N1-N3, |S| >= 2 and name sanity; every violation is reported.
  static Report check(const Digraph& g, const Names& names);
  // Throws ValidationError with the report when check fails.
  static Network validate(Digraph g, Names names);

  // Sorted species names.
  std::vector<std::string> species() const;
  VertexId leaf(const std::string& species) const;
  const std::string& species_of(VertexId leaf) const { return name(leaf); }

  bool is_tree_vertex(VertexId v) const { return g_.indegree(v) == 1 && g_.outdegree(v) > 1; }
  bool is_hybrid(VertexId v) const { return g_.indegree(v) > 1; }
  bool is_multi_arc_free() const { return !g_.has_multi_arcs(); }
  // Multi-arc free and without hybrid vertices.
  bool is_tree() const;
  // The unique child of the root.
  VertexId top() const { return g_.children(root()).front(); }

 private:
  Network(Digraph g, Names names) : Labeled(std::move(g), std::move(names)) {}
};

enum class Event { speciation, duplication };

const char* to_string(Event e);

// Event-labeled gene tree (T; t, sigma). Leaves are named by gene.
class GeneTree : public Labeled {
 public:
  GeneTree() = default;

  // `events` and `sigma` are indexed by vertex id; events are set on inner
  // vertices only and sigma on leaves only.
  static Report check(const Digraph& g, const Names& names,
                      const std::vector<std::optional<Event>>& events,
                      const std::vector<std::string>& sigma);
  static GeneTree validate(Digraph g, Names names, std::vector<std::optional<Event>> events,
                           std::vector<std::string> sigma);

  std::optional<Event> event(VertexId v) const { return events_.at(v.value); }
  bool is_speciation(VertexId v) const { return event(v) == Event::speciation; }
  bool is_duplication(VertexId v) const { return event(v) == Event::duplication; }
  const std::string& sigma(VertexId leaf) const { return sigma_.at(leaf.value); }
  const std::vector<std::optional<Event>>& events() const { return events_; }
  const std::vector<std::string>& sigma_map() const { return sigma_; }

  // sigma(L(v)), sorted and unique.
  const std::vector<std::string>& sigma_set(VertexId v) const { return sigma_sets_.at(v.value); }
  // Sorted species names.
  std::vector<std::string> species() const { return sigma_sets_.at(root().value); }

  std::optional<VertexId> parent(VertexId v) const;
  std::span<const VertexId> children(VertexId v) const { return g_.children(v); }
  // Parents before children; children in insertion order.
  const std::vector<VertexId>& preorder() const { return preorder_; }
  std::vector<VertexId> leaves() const { return g_.sinks(); }
  // Inner vertices in preorder.
  std::vector<VertexId> inner() const;

 private:
  GeneTree(Digraph g, Names names) : Labeled(std::move(g), std::move(names)) {}

  std::vector<std::optional<Event>> events_;
  std::vector<std::string> sigma_;
  std::vector<std::vector<std::string>> sigma_sets_;
  std::vector<VertexId> preorder_;
};

// Structural equality up to vertex ids: same names, shape, child order, events and sigma.
bool same_gene_tree(const GeneTree& a, const GeneTree& b);

// Rooted tree with an outdegree-1 root whose leaves carry species labels, possibly
// several leaves per species. Pseudo MUL-trees may contain indegree-1 outdegree-1
// vertices (the set D1).
class MULTree : public Labeled {
 public:
  MULTree() = default;

  // `leaf_species` is indexed by vertex id and set on leaves only.
  static Report check(const Digraph& g, const Names& names,
                      const std::vector<std::string>& leaf_species, bool pseudo);
  static MULTree validate(Digraph g, Names names, std::vector<std::string> leaf_species,
                          bool pseudo);

  bool pseudo() const { return pseudo_; }
  const std::string& species_of(VertexId leaf) const { return leaf_species_.at(leaf.value); }
  const std::vector<std::string>& leaf_species() const { return leaf_species_; }
  // chi(x), sorted. Throws IdentifierError for an unknown species.
  const std::vector<VertexId>& chi(const std::string& species) const;
  const std::map<std::string, std::vector<VertexId>>& chi_map() const { return chi_; }
  std::vector<std::string> species() const;
  // Sorted D1 vertices.
  const std::vector<VertexId>& d1() const { return d1_; }
  bool is_d1(VertexId v) const;

 private:
  MULTree(Digraph g, Names names) : Labeled(std::move(g), std::move(names)) {}

  std::vector<std::string> leaf_species_;
  std::map<std::string, std::vector<VertexId>> chi_;
  std::vector<VertexId> d1_;
  bool pseudo_ = false;
};

// Vertex name, or `tail>head#index` with vertex names for an arc.
std::string element_label(const Labeled& g, const Element& e);

// Label-respecting rooted isomorphism; names of inner vertices are ignored.
bool mul_isomorphic(const MULTree& a, const MULTree& b);
// Canonical form used by mul_isomorphic.
std::string canonical_form(const MULTree& m);

struct SimpleSubdivision {
  MULTree tree;
  // Fresh vertex v_e -> the original leaf arc e it subdivides.
  std::map<VertexId, ArcId> origin;
  // Every original arc -> its image path in the subdivision.
  std::map<ArcId, Path> arc_paths;
};

// Subdivides once every arc into a leaf whose species labels at least two leaves.
SimpleSubdivision simple_subdivision(const MULTree& m);

// No speciation vertex whose children all have the same sigma(L(.)).
bool is_well_behaved(const GeneTree& t);

// Rooted triple ab|c with a < b.
struct Triple {
  std::string a, b, c;

  friend auto operator<=>(const Triple&, const Triple&) = default;
};

// Canonicalizes ab|c; throws ArgumentError unless the three labels are distinct.
Triple make_triple(std::string a, std::string b, std::string c);
std::string to_string(const Triple& t);

}  // namespace reconet
