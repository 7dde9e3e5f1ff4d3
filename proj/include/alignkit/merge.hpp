#pragma once

#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "alignkit/alignment.hpp"
#include "alignkit/ontology.hpp"

namespace alignkit {

class MergeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A cell with no bridging axiom, kept for the sidecar report.
struct SkippedCell {
  Correspondence cell;
  std::string reason;
};

struct Bridges {
  std::set<Triple> triples;
  std::vector<SkippedCell> skipped;
};

/// Translates cells into bridging axioms:
///   =  on classes        -> e1 owl:equivalentClass e2
///   =  on properties     -> e1 owl:equivalentProperty e2
///   =  on individuals    -> e1 owl:sameAs e2
///   ⊒ / ⊑ on classes     -> child rdfs:subClassOf parent
///   ⊒ / ⊑ on properties  -> child rdfs:subPropertyOf parent
/// Subsumptions between individuals and Disjoint, InstanceOf and Overlap
/// cells are skipped. Throws MergeError for an entity missing from its
/// ontology or for two entities of different kinds.
Bridges bridge_axioms(const Alignment& a, const Ontology& o1, const Ontology& o2);

struct MergeResult {
  Ontology merged;
  std::set<Triple> bridges;
  std::vector<SkippedCell> skipped;
};

/// o1 ∪ o2 ∪ bridges, with o1's base IRI. Throws MergeError when the union is
/// not a well-formed ontology (an IRI with two kinds).
MergeResult merge(const Ontology& o1, const Ontology& o2, const Alignment& a);

/// {"skipped": [{entity1, entity2, relation, confidence, reason}]}
std::string skipped_cells_json(const std::vector<SkippedCell>& skipped);

}  // namespace alignkit
