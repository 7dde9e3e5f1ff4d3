#pragma once

#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace alignkit {

/// Absolute IRI. Compared by exact codepoint equality, never normalized.
class Iri {
 public:
  Iri() = default;
  explicit Iri(std::string value);

  const std::string& str() const { return value_; }
  bool empty() const { return value_.empty(); }

  /// Fragment after the last '#', or after the last '/' when there is no '#'.
  std::string_view local_name() const;

  auto operator<=>(const Iri&) const = default;

  static bool is_valid(std::string_view value);

 private:
  std::string value_;
};

namespace vocab {
inline constexpr std::string_view kRdf = "http://www.w3.org/1999/02/22-rdf-syntax-ns#";
inline constexpr std::string_view kRdfs = "http://www.w3.org/2000/01/rdf-schema#";
inline constexpr std::string_view kOwl = "http://www.w3.org/2002/07/owl#";
inline constexpr std::string_view kXsd = "http://www.w3.org/2001/XMLSchema#";

const Iri& rdf_type();
const Iri& rdfs_label();
const Iri& rdfs_sub_class_of();
const Iri& rdfs_sub_property_of();
const Iri& owl_class();
const Iri& owl_object_property();
const Iri& owl_datatype_property();
const Iri& owl_named_individual();
const Iri& owl_equivalent_class();
const Iri& owl_equivalent_property();
const Iri& owl_same_as();
}  // namespace vocab

enum class EntityKind { OntologyClass, ObjectProperty, DatatypeProperty, Individual };

inline constexpr EntityKind kAllEntityKinds[] = {
    EntityKind::OntologyClass, EntityKind::ObjectProperty,
    EntityKind::DatatypeProperty, EntityKind::Individual};

std::string_view to_string(EntityKind kind);
std::optional<EntityKind> entity_kind_from_string(std::string_view text);

enum class Datatype { Integer, Decimal, Boolean, String };

std::string_view to_string(Datatype datatype);
/// Full xsd IRI of the datatype.
std::string xsd_iri(Datatype datatype);

/// Typed literal. Construction checks the lexical form against the datatype.
class Literal {
 public:
  Literal() = default;
  Literal(std::string lexical, Datatype datatype);

  const std::string& lexical() const { return lexical_; }
  Datatype datatype() const { return datatype_; }

  auto operator<=>(const Literal&) const = default;

  static bool lexical_matches(std::string_view lexical, Datatype datatype);

 private:
  std::string lexical_;
  Datatype datatype_ = Datatype::String;
};

using Term = std::variant<Iri, Literal>;

struct Triple {
  Iri subject;
  Iri predicate;
  Term object;

  auto operator<=>(const Triple&) const = default;
};

bool is_iri(const Term& term);
const Iri& as_iri(const Term& term);

/// Thrown when a set of triples cannot form a well-formed ontology
/// (conflicting kinds, class assertions to non-classes, etc.).
class OntologyError : public std::runtime_error {
 public:
  explicit OntologyError(const std::string& what, std::optional<Triple> culprit = {})
      : std::runtime_error(what), culprit_(std::move(culprit)) {}

  const std::optional<Triple>& culprit() const { return culprit_; }

 private:
  std::optional<Triple> culprit_;
};

struct Neighborhood {
  std::set<Iri> parents;
  std::set<Iri> children;
  std::set<Iri> siblings;
};

class OntologyBuilder;

/// Ontology as typed entity sets plus a triple store. Entity kinds and labels
/// are derived from the triples; instances are immutable once built.
class Ontology {
 public:
  Ontology() = default;

  const std::optional<Iri>& base_iri() const { return base_iri_; }
  const std::map<Iri, EntityKind>& entities() const { return entities_; }
  const std::map<Iri, std::vector<std::string>>& labels() const { return labels_; }
  const std::set<Triple>& triples() const { return triples_; }

  std::optional<EntityKind> kind_of(const Iri& iri) const;
  bool contains(const Iri& iri) const { return entities_.count(iri) > 0; }
  std::set<Iri> entities_of_kind(EntityKind kind) const;
  const std::vector<std::string>& labels_of(const Iri& iri) const;

  /// Direct super/sub entities through rdfs:subClassOf / rdfs:subPropertyOf.
  /// Throws OntologyError for an unknown entity.
  Neighborhood neighbors(const Iri& entity) const;

  /// Triples whose subject is `entity`, in sorted order, at most `limit`.
  std::vector<Triple> assertions_about(const Iri& entity, std::size_t limit) const;

  /// Re-checks every structural invariant; throws OntologyError on violation.
  void validate() const;

  /// Like operator== but ignores base_iri, which is metadata.
  bool same_content(const Ontology& other) const;
  bool operator==(const Ontology& other) const = default;

 private:
  friend class OntologyBuilder;

  std::optional<Iri> base_iri_;
  std::map<Iri, EntityKind> entities_;
  std::map<Iri, std::vector<std::string>> labels_;
  std::set<Triple> triples_;
};

/// Accumulates triples, then derives and checks entity kinds in build().
class OntologyBuilder {
 public:
  OntologyBuilder() = default;
  explicit OntologyBuilder(std::optional<Iri> base_iri) : base_iri_(std::move(base_iri)) {}
  /// Seeds the builder with every triple of an existing ontology.
  explicit OntologyBuilder(const Ontology& seed);

  void set_base_iri(std::optional<Iri> base_iri) { base_iri_ = std::move(base_iri); }

  bool add(Triple triple);
  void declare(const Iri& entity, EntityKind kind);
  void assert_type(const Iri& individual, const Iri& cls);
  void add_label(const Iri& entity, std::string text);

  std::size_t triple_count() const { return triples_.size(); }

  Ontology build() const;

 private:
  std::optional<Iri> base_iri_;
  std::set<Triple> triples_;
};

}  // namespace alignkit
