#pragma once

#include <compare>
#include <cstddef>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "alignkit/ontology.hpp"

namespace alignkit {

/// ≡, ⊑, ⊒, ⊥, ∈, ≬ in that order.
enum class Relation { Equivalence, SubsumedBy, Subsumes, Disjoint, InstanceOf, Overlap };

inline constexpr Relation kAllRelations[] = {Relation::Equivalence, Relation::SubsumedBy,
                                             Relation::Subsumes,    Relation::Disjoint,
                                             Relation::InstanceOf,  Relation::Overlap};

/// Exchange-format glyph: "=", "<", ">", "%", "InstanceOf", "Overlaps".
std::string_view glyph(Relation relation);
std::optional<Relation> relation_from_glyph(std::string_view glyph);
/// Relation seen from the other side (⊑ <-> ⊒); symmetric relations map to themselves.
Relation converse(Relation relation);

using CellId = std::string;

/// Identity of a correspondence for set algebra; confidence is not part of it.
struct CellKey {
  Iri entity1;
  Iri entity2;
  Relation relation;

  auto operator<=>(const CellKey&) const = default;
};

/// Stable 16-hex-digit content hash (FNV-1a 64) of the identity triple.
CellId cell_id(const CellKey& key);

struct Correspondence {
  Iri entity1;
  Iri entity2;
  Relation relation = Relation::Equivalence;
  double confidence = 1.0;

  CellKey key() const { return {entity1, entity2, relation}; }
  CellId id() const { return cell_id(key()); }

  bool operator==(const Correspondence&) const = default;
};

class AlignmentError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Set of correspondences between two ontologies. Cells keep insertion order;
/// no two cells share an identity triple and every confidence is in [0, 1].
class Alignment {
 public:
  Alignment() = default;
  Alignment(std::string onto1, std::string onto2, std::vector<Correspondence> cells = {},
            std::string type = "**");

  const std::string& onto1() const { return onto1_; }
  const std::string& onto2() const { return onto2_; }
  const std::string& type() const { return type_; }
  const std::vector<Correspondence>& cells() const { return cells_; }
  std::size_t size() const { return cells_.size(); }
  bool empty() const { return cells_.empty(); }

  /// Throws AlignmentError on a duplicate identity or out-of-range confidence.
  void add(Correspondence cell);
  bool contains(const CellKey& key) const { return keys_.count(key) > 0; }
  const Correspondence* find(const CellId& id) const;

  /// Same metadata, different cells.
  Alignment with_cells(std::vector<Correspondence> cells) const;
  /// Cells sorted by (entity1, entity2, relation).
  std::vector<Correspondence> sorted_cells() const;
  /// Swaps the two sides: entities exchange places and relations are conversed.
  Alignment flipped() const;

  /// Throws AlignmentError unless every entity1 is in `o1` and every entity2 in `o2`.
  void check_against(const Ontology& o1, const Ontology& o2) const;

  /// Order-insensitive: alignments are sets.
  bool operator==(const Alignment& other) const;

 private:
  std::string onto1_;
  std::string onto2_;
  std::string type_ = "**";
  std::vector<Correspondence> cells_;
  std::set<CellKey> keys_;
};

/// Ids of cells whose entity1 or entity2 occurs in at least two cells.
std::set<CellId> ambiguous_cells(const Alignment& a);
/// Same predicate as ambiguous_cells, by position in a.cells().
std::vector<bool> ambiguity_mask(const Alignment& a);

/// RDF Alignment format (the Alignment API XML dialect).
Alignment parse_alignment_xml(std::string_view text);
std::string serialize_alignment_xml(const Alignment& a);

/// JSON mirror: {onto1, onto2, type, cells: [{entity1, entity2, relation, confidence}]}.
Alignment parse_alignment_json(std::string_view text);
std::string serialize_alignment_json(const Alignment& a);

/// Formats a confidence with at most six fraction digits and at least one ("1.0").
std::string format_measure(double value);

}  // namespace alignkit
