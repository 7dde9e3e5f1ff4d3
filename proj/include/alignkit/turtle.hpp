#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

#include "alignkit/ontology.hpp"

namespace alignkit {

/// Syntax or well-formedness error in a Turtle document, with a 1-based position.
class TurtleError : public std::runtime_error {
 public:
  TurtleError(const std::string& message, std::size_t line, std::size_t column);

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

/// Parses the Turtle subset: @prefix directives, `S P O .` statements with
/// `;`/`,` abbreviations, `a`, IRIs in <...> or prefixed form, and literals
/// that are plain strings or typed with xsd:integer|decimal|boolean|string.
/// The rdf, rdfs, owl and xsd prefixes are predeclared. The empty prefix, when
/// declared, sets the ontology's base IRI (without its trailing '#' or '/').
Ontology parse_turtle(std::string_view text);

/// Deterministic serialization: prefix block, then one statement per triple
/// in (subject, predicate, object) order.
std::string serialize_turtle(const Ontology& ontology);

}  // namespace alignkit
