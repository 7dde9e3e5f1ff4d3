#include "alignkit/table.hpp"

#include <cctype>
#include <map>
#include <set>

namespace alignkit {

std::string_view to_string(ColumnRole role) {
  switch (role) {
    case ColumnRole::Id: return "Id";
    case ColumnRole::Association: return "Association";
    case ColumnRole::Attribute: return "Attribute";
  }
  return "?";
}

std::size_t VirtualTable::id_index() const {
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (columns[i].role == ColumnRole::Id) return i;
  }
  throw std::logic_error("virtual table without an Id column");
}

std::vector<std::vector<std::string>> read_csv_records(std::string_view text, char delimiter) {
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> record;
  std::string field;
  bool in_quotes = false;
  bool field_was_quoted = false;
  std::size_t line = 1;
  std::size_t i = 0;

  // Strip a UTF-8 byte order mark.
  if (text.size() >= 3 && text.substr(0, 3) == "\xEF\xBB\xBF") i = 3;

  auto end_record = [&] {
    record.push_back(std::move(field));
    field.clear();
    field_was_quoted = false;
    records.push_back(std::move(record));
    record.clear();
  };

  for (; i < text.size(); ++i) {
    char c = text[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        if (c == '\n') ++line;
        field.push_back(c);
      }
      continue;
    }
    if (c == '"') {
      if (!field.empty() || field_was_quoted) {
        throw CsvError(CsvError::Code::Syntax,
                       "line " + std::to_string(line) + ": quote inside an unquoted field");
      }
      in_quotes = true;
      field_was_quoted = true;
    } else if (c == delimiter) {
      record.push_back(std::move(field));
      field.clear();
      field_was_quoted = false;
    } else if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') {
      // handled with the following '\n'
    } else if (c == '\n') {
      end_record();
      ++line;
    } else {
      if (field_was_quoted) {
        throw CsvError(CsvError::Code::Syntax,
                       "line " + std::to_string(line) + ": text after a closing quote");
      }
      field.push_back(c);
    }
  }
  if (in_quotes) throw CsvError(CsvError::Code::Syntax, "unterminated quoted field");
  if (!field.empty() || field_was_quoted || !record.empty()) end_record();
  return records;
}

namespace {

std::size_t resolve(const ColumnRef& ref, const std::vector<std::string>& header) {
  if (const auto* index = std::get_if<std::size_t>(&ref)) {
    if (*index >= header.size()) {
      throw CsvError(CsvError::Code::UnknownColumn,
                     "column index " + std::to_string(*index) + " out of range");
    }
    return *index;
  }
  const auto& name = std::get<std::string>(ref);
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return i;
  }
  throw CsvError(CsvError::Code::UnknownColumn, "unknown column '" + name + "'");
}

bool is_blank(std::string_view s) {
  for (char c : s) {
    if (!std::isspace(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

}  // namespace

VirtualTable parse_csv(std::string_view text, const CsvConfig& cfg) {
  if (cfg.id_columns.size() > 1) {
    throw CsvError(CsvError::Code::ComposedKey,
                   "the primary key must be a single column, not a composed field");
  }
  if (cfg.id_columns.empty()) throw CsvError(CsvError::Code::UnknownColumn, "no id column given");

  auto records = read_csv_records(text, cfg.delimiter);
  // A final empty line is not a record.
  while (!records.empty() && records.back().size() == 1 && records.back()[0].empty()) {
    records.pop_back();
  }
  if (records.empty()) throw CsvError(CsvError::Code::NoHeader, "missing header row");

  const auto& header = records.front();
  std::set<std::string> seen_headers;
  for (const auto& h : header) {
    if (is_blank(h)) throw CsvError(CsvError::Code::Syntax, "empty column header");
    if (!seen_headers.insert(h).second) {
      throw CsvError(CsvError::Code::Syntax, "duplicate column header '" + h + "'");
    }
  }

  VirtualTable vt;
  vt.name = cfg.table_name;
  for (const auto& h : header) vt.columns.push_back({h, ColumnRole::Attribute});

  std::size_t id = resolve(cfg.id_columns.front(), header);
  vt.columns[id].role = ColumnRole::Id;
  for (const auto& ref : cfg.association_columns) {
    std::size_t a = resolve(ref, header);
    if (a == id) {
      throw CsvError(CsvError::Code::UnknownColumn,
                     "column '" + header[a] + "' cannot be both id and association");
    }
    vt.columns[a].role = ColumnRole::Association;
  }

  std::set<std::string> ids;
  for (std::size_t r = 1; r < records.size(); ++r) {
    auto& row = records[r];
    if (row.size() != header.size()) {
      throw CsvError(CsvError::Code::RaggedRow,
                     "record " + std::to_string(r + 1) + " has " + std::to_string(row.size()) +
                         " cells, expected " + std::to_string(header.size()));
    }
    if (is_blank(row[id])) {
      throw CsvError(CsvError::Code::EmptyId, "record " + std::to_string(r + 1) + " has an empty id");
    }
    if (!ids.insert(row[id]).second) {
      throw CsvError(CsvError::Code::DuplicateId, "duplicate id '" + row[id] + "'");
    }
    vt.rows.push_back(std::move(row));
  }
  return vt;
}

Datatype infer_datatype(std::string_view cell) {
  for (auto dt : {Datatype::Integer, Datatype::Decimal, Datatype::Boolean}) {
    if (Literal::lexical_matches(cell, dt)) return dt;
  }
  return Datatype::String;
}

std::string sanitize_name(std::string_view label) {
  static constexpr char kHex[] = "0123456789ABCDEF";
  std::string out;
  for (char ch : label) {
    auto c = static_cast<unsigned char>(ch);
    if (std::isspace(c)) {
      out.push_back('_');
    } else if (std::isalnum(c) || c == '_' || c == '.' || c == '-' || c >= 0x80) {
      out.push_back(ch);
    } else {
      out.push_back('%');
      out.push_back(kHex[c >> 4]);
      out.push_back(kHex[c & 0xF]);
    }
  }
  return out;
}

std::string percent_decode(std::string_view text) {
  auto hex = [](char c) -> int {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
  };
  std::string out;
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] == '%' && i + 2 < text.size() && hex(text[i + 1]) >= 0 && hex(text[i + 2]) >= 0) {
      out.push_back(static_cast<char>(hex(text[i + 1]) * 16 + hex(text[i + 2])));
      i += 2;
    } else {
      out.push_back(text[i]);
    }
  }
  return out;
}

Ontology convert(const VirtualTable& table, const Iri& base) {
  auto mint = [&](std::string_view label) { return Iri(base.str() + "#" + sanitize_name(label)); };

  OntologyBuilder b(base);
  const std::size_t id = table.id_index();
  const Iri id_class = mint(table.columns[id].header);
  b.declare(id_class, EntityKind::OntologyClass);
  b.add_label(id_class, table.columns[id].header);

  std::vector<Iri> properties(table.columns.size());
  std::map<std::size_t, Iri> range_classes;
  for (std::size_t c = 0; c < table.columns.size(); ++c) {
    const auto& col = table.columns[c];
    if (col.role == ColumnRole::Id) continue;
    properties[c] = mint(col.header);
    b.add_label(properties[c], col.header);
    if (col.role == ColumnRole::Association) {
      b.declare(properties[c], EntityKind::ObjectProperty);
      Iri range = mint(col.header + "Value");
      b.declare(range, EntityKind::OntologyClass);
      b.add_label(range, col.header + "Value");
      range_classes.emplace(c, range);
    } else {
      b.declare(properties[c], EntityKind::DatatypeProperty);
    }
  }

  std::set<Iri> row_individuals;
  for (const auto& row : table.rows) {
    Iri individual = mint(row[id]);
    row_individuals.insert(individual);
    b.assert_type(individual, id_class);
    b.add_label(individual, row[id]);
  }

  for (const auto& row : table.rows) {
    Iri individual = mint(row[id]);
    for (std::size_t c = 0; c < table.columns.size(); ++c) {
      const auto& cell = row[c];
      if (c == id || cell.empty()) continue;
      if (table.columns[c].role == ColumnRole::Association) {
        Iri target = mint(cell);
        if (!row_individuals.count(target)) {
          b.assert_type(target, range_classes.at(c));
          b.add_label(target, cell);
        }
        b.add(Triple{individual, properties[c], target});
      } else {
        b.add(Triple{individual, properties[c], Literal(cell, infer_datatype(cell))});
      }
    }
  }
  return b.build();
}

}  // namespace alignkit
