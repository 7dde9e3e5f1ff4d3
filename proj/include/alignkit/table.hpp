#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "alignkit/ontology.hpp"

namespace alignkit {

enum class ColumnRole { Id, Association, Attribute };

std::string_view to_string(ColumnRole role);

struct Column {
  std::string header;
  ColumnRole role;

  bool operator==(const Column&) const = default;
};

/// Role-annotated relational table, the unit of table-to-ontology conversion.
/// Every row has one cell per column; the Id column is unique and non-empty.
struct VirtualTable {
  std::string name;
  std::vector<Column> columns;
  std::vector<std::vector<std::string>> rows;

  std::size_t id_index() const;
};

/// A column named by its header text or by its 0-based position.
using ColumnRef = std::variant<std::string, std::size_t>;

struct CsvConfig {
  /// Exactly one entry is accepted: composed primary keys are rejected.
  std::vector<ColumnRef> id_columns;
  std::vector<ColumnRef> association_columns;
  char delimiter = ',';
  std::string table_name;
};

class CsvError : public std::runtime_error {
 public:
  enum class Code { Syntax, RaggedRow, DuplicateId, EmptyId, UnknownColumn, ComposedKey, NoHeader };

  CsvError(Code code, const std::string& message) : std::runtime_error(message), code_(code) {}

  Code code() const { return code_; }

 private:
  Code code_;
};

/// Splits RFC 4180 text into records. Quoted fields may hold delimiters,
/// doubled quotes and line breaks; CRLF and LF line endings are both accepted.
std::vector<std::vector<std::string>> read_csv_records(std::string_view text, char delimiter);

/// Parses CSV text (header row first) into a VirtualTable with roles from `cfg`.
VirtualTable parse_csv(std::string_view text, const CsvConfig& cfg);

/// Literal type of a non-empty cell: the first of integer, decimal, boolean
/// that matches, otherwise string.
Datatype infer_datatype(std::string_view cell);

/// Local-name form of a label. Each whitespace character becomes '_', other
/// ASCII outside [A-Za-z0-9_.-] is percent-encoded, non-ASCII bytes and case
/// are preserved.
std::string sanitize_name(std::string_view label);

/// Inverse of percent-encoding (whitespace folding is not reversible).
std::string percent_decode(std::string_view text);

/// Converts a table into an ontology:
///   Id column          -> one class named after the header
///   Association column -> object property (targets typed by `<Header>Value`)
///   Attribute column   -> datatype property
///   Id cell            -> individual asserted into the Id class
///   Attribute cell     -> typed literal via the column's datatype property
/// Empty cells produce no triple. Every minted entity carries its original
/// text as rdfs:label. Throws OntologyError if two names mint the same IRI
/// with different kinds.
Ontology convert(const VirtualTable& table, const Iri& base);

}  // namespace alignkit
