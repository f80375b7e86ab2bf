#pragma once

#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "reconet/axioms.hpp"
#include "reconet/phylo.hpp"

namespace reconet {

// U*(N): one vertex per directed path from the root of N, identified by its arc sequence.
struct UnfoldStar {
  MULTree tree;
  // Per U* vertex id: the network vertex the path ends in, the network arc it ends with
  // (none for the root path) and the parent path.
  std::vector<VertexId> last;
  std::vector<std::optional<ArcId>> last_arc;
  std::vector<std::optional<VertexId>> parent;
  // (path, network arc leaving its last vertex) -> extended path.
  std::map<std::pair<VertexId, ArcId>, VertexId> step;

  // The network path a U* vertex stands for.
  Path path(VertexId p) const;
};

constexpr std::size_t kDefaultPathLimit = 100000;

// Throws ResourceError when more than `limit` paths exist.
UnfoldStar unfold_star(const Network& n, std::size_t limit = kDefaultPathLimit);

// Suppresses every indegree-1 outdegree-1 vertex of a pseudo MUL-tree.
MULTree suppress_d1(const MULTree& m);

// U(N).
MULTree unfold(const Network& n, std::size_t limit = kDefaultPathLimit);

struct UniversalFolding {
  UnfoldStar unfolding;
  FoldingMap folding;
};

// f*: last vertex and last arc of each path. Throws PreconditionError for multi-arcs.
UniversalFolding universal_folding(const Network& n, std::size_t limit = kDefaultPathLimit);

// Lifts a TreeNet map on a multi-arc free network to a MUL-reconciliation into U*(N)
// whose composition with f* is mu again. Throws PreconditionError when mu is not a
// TreeNet map or n has multi-arcs.
ReconMap lift_mu(const GeneTree& t, const Network& n, const ReconMap& mu, const UnfoldStar& u);

struct RoundTrip {
  bool agree = false;
  bool network_side = false;
  bool mul_side = false;
};

// Decides both sides of the network / unfolding equivalence on one instance.
RoundTrip roundtrip_check(const GeneTree& t, const Network& n,
                          std::size_t limit = kDefaultPathLimit, const SearchLimits& search = {});

}  // namespace reconet
