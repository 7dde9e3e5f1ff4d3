#include "alignkit/ontology.hpp"

#include <algorithm>
#include <cctype>

namespace alignkit {

namespace {

bool is_scheme_char(char c, bool first) {
  if (std::isalpha(static_cast<unsigned char>(c))) return true;
  if (first) return false;
  return std::isdigit(static_cast<unsigned char>(c)) || c == '+' || c == '-' || c == '.';
}

std::string describe(const Triple& t) {
  std::string object = is_iri(t.object) ? as_iri(t.object).str()
                                        : "\"" + std::get<Literal>(t.object).lexical() + "\"";
  return "<" + t.subject.str() + "> <" + t.predicate.str() + "> " + object;
}

Iri vocab_iri(std::string_view ns, std::string_view local) {
  return Iri(std::string(ns) + std::string(local));
}

struct Derived {
  std::map<Iri, EntityKind> entities;
  std::map<Iri, std::vector<std::string>> labels;
};

class KindAssigner {
 public:
  explicit KindAssigner(std::map<Iri, EntityKind>& entities) : entities_(entities) {}

  void assign(const Iri& iri, EntityKind kind, const Triple& culprit) {
    auto [it, inserted] = entities_.emplace(iri, kind);
    if (!inserted && it->second != kind) {
      throw OntologyError("entity <" + iri.str() + "> used as both " +
                              std::string(to_string(it->second)) + " and " +
                              std::string(to_string(kind)) + " in " + describe(culprit),
                          culprit);
    }
  }

  std::optional<EntityKind> kind(const Iri& iri) const {
    auto it = entities_.find(iri);
    if (it == entities_.end()) return std::nullopt;
    return it->second;
  }

 private:
  std::map<Iri, EntityKind>& entities_;
};

const Iri& require_iri_object(const Triple& t) {
  if (!is_iri(t.object)) {
    throw OntologyError("expected an IRI object in " + describe(t), t);
  }
  return as_iri(t.object);
}

bool is_property(EntityKind k) {
  return k == EntityKind::ObjectProperty || k == EntityKind::DatatypeProperty;
}

// Entity kinds follow from declarations first, then from how each IRI is used.
Derived derive(const std::set<Triple>& triples) {
  Derived out;
  KindAssigner kinds(out.entities);

  for (const auto& t : triples) {
    if (t.predicate != vocab::rdf_type() || !is_iri(t.object)) continue;
    const Iri& type = as_iri(t.object);
    if (type == vocab::owl_class()) {
      kinds.assign(t.subject, EntityKind::OntologyClass, t);
    } else if (type == vocab::owl_object_property()) {
      kinds.assign(t.subject, EntityKind::ObjectProperty, t);
    } else if (type == vocab::owl_datatype_property()) {
      kinds.assign(t.subject, EntityKind::DatatypeProperty, t);
    } else if (type == vocab::owl_named_individual()) {
      kinds.assign(t.subject, EntityKind::Individual, t);
    }
  }

  for (const auto& t : triples) {
    if (t.predicate == vocab::rdfs_sub_class_of() ||
        t.predicate == vocab::owl_equivalent_class()) {
      kinds.assign(t.subject, EntityKind::OntologyClass, t);
      kinds.assign(require_iri_object(t), EntityKind::OntologyClass, t);
    }
  }

  for (const auto& t : triples) {
    if (t.predicate != vocab::rdf_type()) continue;
    const Iri& type = require_iri_object(t);
    if (type == vocab::owl_class() || type == vocab::owl_object_property() ||
        type == vocab::owl_datatype_property() || type == vocab::owl_named_individual()) {
      continue;
    }
    if (kinds.kind(type) != EntityKind::OntologyClass) {
      throw OntologyError("class assertion to <" + type.str() + ">, which is not a class", t);
    }
    kinds.assign(t.subject, EntityKind::Individual, t);
  }

  for (const auto& t : triples) {
    if (t.predicate == vocab::owl_same_as()) {
      kinds.assign(t.subject, EntityKind::Individual, t);
      kinds.assign(require_iri_object(t), EntityKind::Individual, t);
    } else if (t.predicate == vocab::rdfs_sub_property_of() ||
               t.predicate == vocab::owl_equivalent_property()) {
      const Iri& object = require_iri_object(t);
      auto k = kinds.kind(t.subject);
      if (!k) k = kinds.kind(object);
      if (!k || !is_property(*k)) {
        throw OntologyError("property axiom between entities that are not declared properties",
                            t);
      }
      kinds.assign(t.subject, *k, t);
      kinds.assign(object, *k, t);
    } else if (t.predicate == vocab::rdfs_label()) {
      if (is_iri(t.object)) throw OntologyError("rdfs:label needs a literal object", t);
      out.labels[t.subject].push_back(std::get<Literal>(t.object).lexical());
    } else if (auto pk = kinds.kind(t.predicate)) {
      if (*pk == EntityKind::ObjectProperty) {
        kinds.assign(t.subject, EntityKind::Individual, t);
        kinds.assign(require_iri_object(t), EntityKind::Individual, t);
      } else if (*pk == EntityKind::DatatypeProperty) {
        if (is_iri(t.object)) {
          throw OntologyError("datatype property assertion needs a literal object", t);
        }
        kinds.assign(t.subject, EntityKind::Individual, t);
      }
    }
  }
  return out;
}

}  // namespace

Iri::Iri(std::string value) : value_(std::move(value)) {
  if (!is_valid(value_)) throw std::invalid_argument("invalid IRI: '" + value_ + "'");
}

bool Iri::is_valid(std::string_view value) {
  auto colon = value.find(':');
  if (colon == std::string_view::npos || colon == 0) return false;
  for (std::size_t i = 0; i < colon; ++i) {
    if (!is_scheme_char(value[i], i == 0)) return false;
  }
  return std::none_of(value.begin(), value.end(), [](char c) {
    return c == ' ' || c == '<' || c == '>' || c == '"' || c == '\n' || c == '\t' ||
           c == '\r' || c == '{' || c == '}' || c == '|' || c == '\\' || c == '^' || c == '`';
  });
}

std::string_view Iri::local_name() const {
  std::string_view v = value_;
  auto pos = v.rfind('#');
  if (pos == std::string_view::npos) pos = v.rfind('/');
  if (pos == std::string_view::npos) pos = v.find(':');
  return v.substr(pos + 1);
}

namespace vocab {
#define ALIGNKIT_VOCAB(fn, ns, local)           \
  const Iri& fn() {                             \
    static const Iri iri = vocab_iri(ns, local); \
    return iri;                                 \
  }
ALIGNKIT_VOCAB(rdf_type, kRdf, "type")
ALIGNKIT_VOCAB(rdfs_label, kRdfs, "label")
ALIGNKIT_VOCAB(rdfs_sub_class_of, kRdfs, "subClassOf")
ALIGNKIT_VOCAB(rdfs_sub_property_of, kRdfs, "subPropertyOf")
ALIGNKIT_VOCAB(owl_class, kOwl, "Class")
ALIGNKIT_VOCAB(owl_object_property, kOwl, "ObjectProperty")
ALIGNKIT_VOCAB(owl_datatype_property, kOwl, "DatatypeProperty")
ALIGNKIT_VOCAB(owl_named_individual, kOwl, "NamedIndividual")
ALIGNKIT_VOCAB(owl_equivalent_class, kOwl, "equivalentClass")
ALIGNKIT_VOCAB(owl_equivalent_property, kOwl, "equivalentProperty")
ALIGNKIT_VOCAB(owl_same_as, kOwl, "sameAs")
#undef ALIGNKIT_VOCAB
}  // namespace vocab

std::string_view to_string(EntityKind kind) {
  switch (kind) {
    case EntityKind::OntologyClass: return "OntologyClass";
    case EntityKind::ObjectProperty: return "ObjectProperty";
    case EntityKind::DatatypeProperty: return "DatatypeProperty";
    case EntityKind::Individual: return "Individual";
  }
  return "?";
}

std::optional<EntityKind> entity_kind_from_string(std::string_view text) {
  for (auto k : kAllEntityKinds) {
    if (to_string(k) == text) return k;
  }
  return std::nullopt;
}

std::string_view to_string(Datatype datatype) {
  switch (datatype) {
    case Datatype::Integer: return "integer";
    case Datatype::Decimal: return "decimal";
    case Datatype::Boolean: return "boolean";
    case Datatype::String: return "string";
  }
  return "?";
}

std::string xsd_iri(Datatype datatype) {
  return std::string(vocab::kXsd) + std::string(to_string(datatype));
}

Literal::Literal(std::string lexical, Datatype datatype)
    : lexical_(std::move(lexical)), datatype_(datatype) {
  if (!lexical_matches(lexical_, datatype_)) {
    throw std::invalid_argument("'" + lexical_ + "' is not a valid xsd:" +
                                std::string(to_string(datatype_)) + " lexical form");
  }
}

bool Literal::lexical_matches(std::string_view lex, Datatype datatype) {
  auto digits = [](std::string_view s) {
    return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) {
      return std::isdigit(static_cast<unsigned char>(c));
    });
  };
  auto unsigned_part = [&](std::string_view s) {
    if (!s.empty() && (s.front() == '+' || s.front() == '-')) s.remove_prefix(1);
    return s;
  };
  switch (datatype) {
    case Datatype::Integer:
      return digits(unsigned_part(lex));
    case Datatype::Decimal: {
      auto s = unsigned_part(lex);
      auto dot = s.find('.');
      if (dot == std::string_view::npos) return digits(s);
      auto whole = s.substr(0, dot);
      auto frac = s.substr(dot + 1);
      if (whole.empty() && frac.empty()) return false;
      return (whole.empty() || digits(whole)) && (frac.empty() || digits(frac));
    }
    case Datatype::Boolean:
      return lex == "true" || lex == "false";
    case Datatype::String:
      return true;
  }
  return false;
}

bool is_iri(const Term& term) { return std::holds_alternative<Iri>(term); }

const Iri& as_iri(const Term& term) { return std::get<Iri>(term); }

std::optional<EntityKind> Ontology::kind_of(const Iri& iri) const {
  auto it = entities_.find(iri);
  if (it == entities_.end()) return std::nullopt;
  return it->second;
}

std::set<Iri> Ontology::entities_of_kind(EntityKind kind) const {
  std::set<Iri> out;
  for (const auto& [iri, k] : entities_) {
    if (k == kind) out.insert(iri);
  }
  return out;
}

const std::vector<std::string>& Ontology::labels_of(const Iri& iri) const {
  static const std::vector<std::string> kNone;
  auto it = labels_.find(iri);
  return it == labels_.end() ? kNone : it->second;
}

Neighborhood Ontology::neighbors(const Iri& entity) const {
  if (!contains(entity)) throw OntologyError("unknown entity <" + entity.str() + ">");
  auto is_subsumption = [](const Triple& t) {
    return (t.predicate == vocab::rdfs_sub_class_of() ||
            t.predicate == vocab::rdfs_sub_property_of()) &&
           is_iri(t.object);
  };
  Neighborhood n;
  for (const auto& t : triples_) {
    if (!is_subsumption(t)) continue;
    if (t.subject == entity) n.parents.insert(as_iri(t.object));
    if (as_iri(t.object) == entity) n.children.insert(t.subject);
  }
  for (const auto& t : triples_) {
    if (!is_subsumption(t)) continue;
    if (n.parents.count(as_iri(t.object)) && t.subject != entity) n.siblings.insert(t.subject);
  }
  return n;
}

std::vector<Triple> Ontology::assertions_about(const Iri& entity, std::size_t limit) const {
  std::vector<Triple> out;
  for (auto it = triples_.lower_bound(Triple{entity, Iri(), Iri()});
       it != triples_.end() && it->subject == entity && out.size() < limit; ++it) {
    out.push_back(*it);
  }
  return out;
}

void Ontology::validate() const {
  Derived d = derive(triples_);
  if (d.entities != entities_) throw OntologyError("entity map disagrees with triples");
  if (d.labels != labels_) throw OntologyError("label map disagrees with triples");
}

bool Ontology::same_content(const Ontology& other) const {
  return entities_ == other.entities_ && labels_ == other.labels_ && triples_ == other.triples_;
}

OntologyBuilder::OntologyBuilder(const Ontology& seed)
    : base_iri_(seed.base_iri()), triples_(seed.triples()) {}

bool OntologyBuilder::add(Triple triple) { return triples_.insert(std::move(triple)).second; }

void OntologyBuilder::declare(const Iri& entity, EntityKind kind) {
  const Iri* type = nullptr;
  switch (kind) {
    case EntityKind::OntologyClass: type = &vocab::owl_class(); break;
    case EntityKind::ObjectProperty: type = &vocab::owl_object_property(); break;
    case EntityKind::DatatypeProperty: type = &vocab::owl_datatype_property(); break;
    case EntityKind::Individual: type = &vocab::owl_named_individual(); break;
  }
  add(Triple{entity, vocab::rdf_type(), *type});
}

void OntologyBuilder::assert_type(const Iri& individual, const Iri& cls) {
  add(Triple{individual, vocab::rdf_type(), cls});
}

void OntologyBuilder::add_label(const Iri& entity, std::string text) {
  add(Triple{entity, vocab::rdfs_label(), Literal(std::move(text), Datatype::String)});
}

Ontology OntologyBuilder::build() const {
  Derived d = derive(triples_);
  Ontology o;
  o.base_iri_ = base_iri_;
  o.entities_ = std::move(d.entities);
  o.labels_ = std::move(d.labels);
  o.triples_ = triples_;
  return o;
}

}  // namespace alignkit
