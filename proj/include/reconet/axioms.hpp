#pragma once

#include <map>
#include <optional>
#include <vector>

#include "reconet/digraph.hpp"
#include "reconet/phylo.hpp"
#include "reconet/report.hpp"

namespace reconet {

enum class TargetKind { network, multree };

// mu (into a network) or kappa (into a pseudo MUL-tree), indexed by gene vertex id.
struct ReconMap {
  TargetKind kind = TargetKind::network;
  std::vector<std::optional<Element>> image;

  // Throws ArgumentError when v has no image.
  const Element& at(VertexId v) const;
  void set(VertexId v, Element e);
  bool has(VertexId v) const { return v.value < image.size() && image[v.value].has_value(); }

  friend bool operator==(const ReconMap&, const ReconMap&) = default;
};

enum class AlphaLabel { s, d, c };

struct BiTreeNetMap {
  std::vector<std::optional<VertexId>> alpha1;
  std::vector<std::optional<AlphaLabel>> alpha2;
};

// f = (fV, fE) from a pseudo MUL-tree onto a network.
struct FoldingMap {
  std::vector<std::optional<VertexId>> fv;
  std::map<ArcId, ArcId> fe;

  // Image of a vertex or an arc. Throws ArgumentError when undefined.
  Element apply(const Element& e) const;

  friend bool operator==(const FoldingMap&, const FoldingMap&) = default;
};

// R1, R2.i, R2.ii, R3. Throws ArgumentError when mu is not total.
Report check_treenet(const GeneTree& t, const Network& n, const ReconMap& mu);

// R1, R2.i*, R2.ii, R3, plus R2.iii when `strict`. Throws StructureError unless s is a tree.
Report check_relaxed_tree(const GeneTree& t, const Network& s, const ReconMap& mu, bool strict);

// M1, M2.i, M2.ii, M3, plus the domain restriction to non-D1 vertices and arcs.
Report check_mul(const GeneTree& t, const MULTree& m, const ReconMap& kappa);

// Totality, surjectivity, F1, F2, F3.
Report check_folding(const MULTree& m, const Network& n, const FoldingMap& f);

// A1-A3, plus agreement of alpha2 with the event labels of t.
Report check_bitreenet(const GeneTree& t, const Network& n, const BiTreeNetMap& alpha);

// Converts a biTreeNet map into a TreeNet map. Throws ArgumentError for non-binary
// input and ValidationError when alpha violates A1-A3.
ReconMap alpha_to_mu(const GeneTree& t, const Network& n, const BiTreeNetMap& alpha);

bool is_binary(const GeneTree& t);
// Tree vertices have outdegree 2 and hybrids indegree 2.
bool is_binary(const Network& n);

struct SearchLimits {
  std::size_t max_internal = 8;
  std::size_t max_target = 40;
};

// Exact search for a TreeNet map. Throws ResourceError when the instance exceeds limits.
std::optional<ReconMap> exists_treenet_map(const GeneTree& t, const Network& n,
                                           const SearchLimits& limits = {});

// Exact search for a MUL-reconciliation map into m.
std::optional<ReconMap> exists_mul_map(const GeneTree& t, const MULTree& m,
                                       const SearchLimits& limits = {});

}  // namespace reconet
