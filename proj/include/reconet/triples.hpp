#pragma once

#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "reconet/axioms.hpp"
#include "reconet/phylo.hpp"

namespace reconet {

struct TripleSet {
  std::set<Triple> triples;
  // Always contains every label mentioned by a triple.
  std::set<std::string> labels;

  void insert(const Triple& t);
  bool contains(const Triple& t) const { return triples.count(t) > 0; }
  std::size_t size() const { return triples.size(); }
  bool empty() const { return triples.empty(); }
  std::vector<Triple> to_vector() const { return {triples.begin(), triples.end()}; }

  friend bool operator==(const TripleSet&, const TripleSet&) = default;
};

TripleSet make_triple_set(const std::vector<Triple>& r);

// R(T) over leaf names. Throws StructureError for a network that is not a tree.
TripleSet displayed_triples(const Network& tree);
TripleSet displayed_triples(const GeneTree& t);

// S(T;t,sigma) over species names.
TripleSet informative_triples(const GeneTree& t);

// BUILD. The witness tree has leaves named after the labels and inner vertices "i1",
// "i2", ... in preorder. Throws ArgumentError for fewer than two labels.
std::optional<Network> is_compatible(const TripleSet& r);

struct TreeReconciliation {
  Network species_tree;
  ReconMap mu;
};

// lca-based map into the BUILD tree of S(T;t,sigma), verified before it is returned.
std::optional<TreeReconciliation> reconcile_to_tree(const GeneTree& t);

// True when every speciation has children with pairwise disjoint species sets.
bool has_disjoint_speciations(const GeneTree& t);

constexpr std::size_t kDefaultDisplayLimit = 200;

// Throws ResourceError above `max_vertices` vertices and ArgumentError when a label is
// not a leaf of n.
bool displays(const Network& n, const Triple& r, std::size_t max_vertices = kDefaultDisplayLimit);

}  // namespace reconet
