#include "alignkit/merge.hpp"

#include <json.hpp>

namespace alignkit {

namespace {

bool is_property(EntityKind k) {
  return k == EntityKind::ObjectProperty || k == EntityKind::DatatypeProperty;
}

EntityKind resolve(const Ontology& o, const Iri& entity, const char* side) {
  auto kind = o.kind_of(entity);
  if (!kind) throw MergeError(std::string(side) + " <" + entity.str() + "> is not in its ontology");
  return *kind;
}

}  // namespace

Bridges bridge_axioms(const Alignment& a, const Ontology& o1, const Ontology& o2) {
  Bridges out;
  for (const auto& c : a.sorted_cells()) {
    EntityKind k1 = resolve(o1, c.entity1, "entity1");
    EntityKind k2 = resolve(o2, c.entity2, "entity2");
    if (k1 != k2) {
      throw MergeError("cell <" + c.entity1.str() + "> " + std::string(glyph(c.relation)) + " <" +
                       c.entity2.str() + "> relates a " + std::string(to_string(k1)) + " to a " +
                       std::string(to_string(k2)));
    }
    switch (c.relation) {
      case Relation::Equivalence: {
        const Iri& p = k1 == EntityKind::OntologyClass ? vocab::owl_equivalent_class()
                       : is_property(k1)               ? vocab::owl_equivalent_property()
                                                       : vocab::owl_same_as();
        out.triples.insert(Triple{c.entity1, p, c.entity2});
        break;
      }
      case Relation::Subsumes:
      case Relation::SubsumedBy: {
        if (k1 == EntityKind::Individual) {
          out.skipped.push_back({c, "subsumption between individuals"});
          break;
        }
        const Iri& p = k1 == EntityKind::OntologyClass ? vocab::rdfs_sub_class_of()
                                                       : vocab::rdfs_sub_property_of();
        if (c.relation == Relation::Subsumes) {
          out.triples.insert(Triple{c.entity2, p, c.entity1});
        } else {
          out.triples.insert(Triple{c.entity1, p, c.entity2});
        }
        break;
      }
      case Relation::Disjoint:
      case Relation::InstanceOf:
      case Relation::Overlap:
        out.skipped.push_back({c, "relation " + std::string(glyph(c.relation)) + " has no bridging axiom"});
        break;
    }
  }
  return out;
}

MergeResult merge(const Ontology& o1, const Ontology& o2, const Alignment& a) {
  auto bridges = bridge_axioms(a, o1, o2);
  OntologyBuilder b(o1);
  for (const auto& t : o2.triples()) b.add(t);
  for (const auto& t : bridges.triples) b.add(t);
  try {
    return {b.build(), std::move(bridges.triples), std::move(bridges.skipped)};
  } catch (const OntologyError& e) {
    throw MergeError(std::string("merged graph is not well formed: ") + e.what());
  }
}

std::string skipped_cells_json(const std::vector<SkippedCell>& skipped) {
  nlohmann::ordered_json doc;
  doc["skipped"] = nlohmann::ordered_json::array();
  for (const auto& s : skipped) {
    nlohmann::ordered_json o;
    o["entity1"] = s.cell.entity1.str();
    o["entity2"] = s.cell.entity2.str();
    o["relation"] = std::string(glyph(s.cell.relation));
    o["confidence"] = s.cell.confidence;
    o["reason"] = s.reason;
    doc["skipped"].push_back(std::move(o));
  }
  return doc.dump(2) + "\n";
}

}  // namespace alignkit
