#pragma once
// Hand-built instances for the worked examples. The exact shapes are reconstructions
// that reproduce the stated properties.

#include <string>

namespace fixtures {

// All-speciation caterpillar with injective sigma.
inline const std::string kCaterpillar = "(((a@A,b@B)S,c@C)S,d@D)S;";

// rho -> u; u -> v, h, D; v -> A, B, h; h -> C.
inline const std::string kNoMapNetwork = "(((A,B,(C)h#H1)v,h#H1,D)u)root;";

// Network displaying BC|A but not AB|C.
inline const std::string kOneHybridNetwork = "(((A,((B,C)w)h#H1)u,(D,h#H1)v)x)root;";

// Binary gene tree whose informative triples contain AB|C, BC|A, AB|D and BD|A.
inline const std::string kDupRootTree =
    "((((a@A,b@B)S,d@D)S,((b2@B,d2@D)S,a2@A)S)D,((a3@A,b3@B)S,c@C)S)D;";

// Binary gene tree with AB|C and BC|A among its informative triples.
inline const std::string kConflictBinary =
    "((((a@A,b@B)S,c@C)S,((b2@B,(c2@C,c3@C)D)S,a2@A)S)D,d@D)S;";

// Non-binary gene tree with a relaxed but no strict tree reconciliation.
inline const std::string kConflictMiddle =
    "(((a@A,b@B)S,c@C)S,((b2@B,c2@C,c3@C)D,a2@A,d@D)S)D;";

// MUL-tree with three B leaves and two C leaves; two leaves of each share a parent.
inline const std::string kSiblingMul = "(((B,B,A)a,(C,C,D)b,B)r)root;";

// A, B and D occur twice, C once.
inline const std::string kRepeatTree = "(((a@A,b@B)S,d@D)S,((a2@A,c@C)S,(b2@B,d2@D)S)S)S;";

// Inner vertices named 1..4 through bracket comments.
inline const std::string kNamedInnerTree =
    "((a@A,(b@B,b2@B)D)S[2],(b3@B,(c@C,c2@C)D,d@D)S[3],((d2@D,d3@D)D,(e@E,e2@E)D)S[4])S[1];";

}  // namespace fixtures
