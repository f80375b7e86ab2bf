#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "reconet/axioms.hpp"
#include "reconet/phylo.hpp"
#include "reconet/triples.hpp"

namespace reconet {

using SigmaTable = std::map<std::string, std::string>;

// Gene-tree dialect: leaves `gene@species` (or bare `gene` resolved through sigma),
// inner labels S or D with an optional vertex name in brackets, e.g. `(a@A,b@B)S[n1];`.
// A label-free outer wrapper with a single child is dropped.
GeneTree parse_gene_tree(std::string_view text, const SigmaTable* sigma = nullptr);
std::string write_gene_tree(const GeneTree& t);

// `gene<TAB>species` per line.
SigmaTable parse_sigma(std::string_view text);

// Extended Newick with `name#H<k>` hybrid tags; repeated references under one parent
// are parallel arcs. The outermost vertex is the root when it has a single child;
// otherwise a root is added and a warning recorded.
Network parse_network(std::string_view text, std::vector<std::string>* warnings = nullptr);
std::string write_network(const Network& n);

// Leaves `name@species` or a bare species label; inner labels are optional names.
MULTree parse_mul(std::string_view text, bool pseudo = false,
                  std::vector<std::string>* warnings = nullptr);
std::string write_mul(const MULTree& m);

// One triple per line as `a,b|c` (or `AB|C` for one-character labels); `@labels x y ...`
// extends the label set; `#` starts a comment.
TripleSet parse_triples(std::string_view text);
std::string write_triples(const TripleSet& r);

// `<gene vertex> TAB vertex|arc TAB <target>` with arcs written `tail>head#index`.
std::string write_map(const GeneTree& t, const Labeled& target, const ReconMap& mu);
ReconMap parse_map(std::string_view text, const GeneTree& t, const Labeled& target,
                   TargetKind kind);

// Preimage annotations for export_dot.
struct DotAnnotation {
  const GeneTree* tree = nullptr;
  const ReconMap* map = nullptr;
};

std::string export_dot(const GeneTree& t);
std::string export_dot(const Network& n, const DotAnnotation& ann = {});
std::string export_dot(const MULTree& m, const DotAnnotation& ann = {});

// Structural equality by vertex names.
bool same_network(const Network& a, const Network& b);
bool same_mul(const MULTree& a, const MULTree& b);

}  // namespace reconet
