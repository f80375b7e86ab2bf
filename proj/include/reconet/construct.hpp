#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "reconet/axioms.hpp"
#include "reconet/phylo.hpp"

namespace reconet {

// M(T;t,sigma) and its trivial MUL-reconciliation. Gene vertex ids are reused as
// MUL-tree vertex ids; the extra root gets the next free id.
struct AssociatedMUL {
  MULTree mul;
  ReconMap kappa;
};

AssociatedMUL associate_mul(const GeneTree& t);

// Moves kappa onto a subdivision that kept all vertex ids: arc images become the
// last arc of the path that replaced them. Arcs missing from arc_paths are kept as they are.
ReconMap lift_kappa_to_subdivision(const ReconMap& kappa, const MULTree& m, const MULTree& sub,
                                   const std::map<ArcId, Path>& arc_paths);

struct FoldArtifacts {
  MULTree mul;
  SimpleSubdivision subdivided;
  Network network;
  // Folding of subdivided.tree onto network.
  FoldingMap folding;
  // par(x) for species with at least two leaves in the MUL-tree.
  std::map<std::string, VertexId> par;
};

FoldArtifacts fold_mul_to_network(const MULTree& m);

// mu(v) = fV(kappa(v)) for vertex images and fE(kappa(v)) for arc images.
ReconMap compose_reconciliation(const ReconMap& kappa, const FoldingMap& f);

struct StarSets {
  // Only species with a non-empty W are listed.
  std::map<std::string, std::vector<VertexId>> W;
  std::map<std::string, std::vector<VertexId>> V;
  std::vector<VertexId> W1;
  std::vector<VertexId> W2;
  std::vector<ArcId> F1;

  const std::vector<VertexId>& w_of(const std::string& x) const;
  const std::vector<VertexId>& v_of(const std::string& x) const;
};

StarSets star_sets(const Network& n);

struct Elimination {
  Network network;
  StarSets stars;
  // Fresh hybrids w_x.
  std::map<std::string, VertexId> fresh;
  // Sorted ids removed from the input network.
  std::vector<VertexId> removed;
};

// N*. Vertices of W1 keep their ids, and arcs of F1 keep their ArcIds.
Elimination eliminate_multiarcs(const Network& n);

// Throws PreconditionError when t is not well-behaved.
ReconMap build_mu_star(const GeneTree& t, const ReconMap& mu, const Network& n,
                       const Elimination& star);

struct PipelineResult {
  FoldArtifacts fold;
  ReconMap kappa;      // into fold.mul
  ReconMap kappa_sub;  // into fold.subdivided.tree
  ReconMap mu;         // into fold.network
  bool well_behaved = false;
  // Present only for well-behaved trees.
  std::optional<Elimination> star;
  ReconMap mu_star;

  // N* and mu* when available, otherwise N and mu.
  const Network& final_network() const { return star ? star->network : fold.network; }
  const ReconMap& final_map() const { return star ? mu_star : mu; }
};

PipelineResult pipeline(const GeneTree& t);

// Multi-arc free network displaying every triple in r; nullopt for an empty set.
std::optional<Network> network_from_triples(const std::vector<Triple>& r);
// The gene tree network_from_triples reconciles.
std::optional<GeneTree> triples_gene_tree(const std::vector<Triple>& r);

struct GenParams {
  std::size_t max_leaves = 8;
  std::size_t species_count = 3;
  double dup_prob = 0.3;
  bool force_well_behaved = false;
  // Probability that an inner vertex gets three children instead of two.
  double multifurcation_prob = 0.15;
};

// Deterministic for a fixed seed and params.
GeneTree gen_gene_tree(std::uint64_t seed, const GenParams& params = {});

// Species names used by the generator: A, B, ..., Z, S26, S27, ...
std::string species_name(std::size_t i);

}  // namespace reconet
