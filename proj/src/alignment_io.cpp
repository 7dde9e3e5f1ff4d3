#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <sstream>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>
#include <json.hpp>

#include "alignkit/alignment.hpp"

namespace alignkit {

namespace {

namespace pt = boost::property_tree;

constexpr std::string_view kAlignNs = "http://knowledgeweb.semanticweb.org/heterogeneity/alignment";

std::string_view local(std::string_view qname) {
  auto colon = qname.find(':');
  return colon == std::string_view::npos ? qname : qname.substr(colon + 1);
}

std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return "";
  auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

const pt::ptree* child(const pt::ptree& node, std::string_view name) {
  for (const auto& [key, value] : node) {
    if (local(key) == name) return &value;
  }
  return nullptr;
}

std::optional<std::string> attribute(const pt::ptree& node, std::string_view name) {
  auto attrs = node.get_child_optional("<xmlattr>");
  if (!attrs) return std::nullopt;
  for (const auto& [key, value] : *attrs) {
    if (local(key) == name) return value.data();
  }
  return std::nullopt;
}

double parse_measure(const std::string& text) {
  std::string t = trim(text);
  if (t.empty()) throw AlignmentError("empty measure");
  errno = 0;
  char* end = nullptr;
  double v = std::strtod(t.c_str(), &end);
  if (end != t.c_str() + t.size() || errno == ERANGE || !std::isfinite(v)) {
    throw AlignmentError("measure '" + t + "' is not a decimal number");
  }
  if (v < 0.0 || v > 1.0) throw AlignmentError("measure " + t + " outside [0, 1]");
  return v;
}

Iri parse_entity(const pt::ptree& cell, std::string_view which) {
  const pt::ptree* node = child(cell, which);
  if (!node) throw AlignmentError("Cell without " + std::string(which));
  auto resource = attribute(*node, "resource");
  if (!resource || resource->empty()) {
    throw AlignmentError(std::string(which) + " without an rdf:resource");
  }
  if (!Iri::is_valid(*resource)) {
    throw AlignmentError(std::string(which) + " resource '" + *resource + "' is not an IRI");
  }
  return Iri(*resource);
}

std::string parse_onto(const pt::ptree* node) {
  if (!node) return "";
  if (const pt::ptree* ontology = child(*node, "Ontology")) {
    if (auto about = attribute(*ontology, "about")) return *about;
  }
  return trim(node->data());
}

Correspondence parse_cell(const pt::ptree& cell) {
  Correspondence c;
  c.entity1 = parse_entity(cell, "entity1");
  c.entity2 = parse_entity(cell, "entity2");
  const pt::ptree* rel = child(cell, "relation");
  std::string g = rel ? trim(rel->data()) : "=";
  auto r = relation_from_glyph(g);
  if (!r) throw AlignmentError("unknown relation glyph '" + g + "'");
  c.relation = *r;
  const pt::ptree* measure = child(cell, "measure");
  c.confidence = measure ? parse_measure(measure->data()) : 1.0;
  return c;
}

std::string xml_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

}  // namespace

Alignment parse_alignment_xml(std::string_view text) {
  pt::ptree doc;
  std::istringstream in{std::string(text)};
  try {
    pt::read_xml(in, doc, pt::xml_parser::trim_whitespace | pt::xml_parser::no_comments);
  } catch (const pt::xml_parser_error& e) {
    throw AlignmentError("malformed XML: " + e.message() + " at line " + std::to_string(e.line()));
  }

  const pt::ptree* alignment = child(doc, "Alignment");
  if (!alignment) {
    if (const pt::ptree* rdf = child(doc, "RDF")) alignment = child(*rdf, "Alignment");
  }
  if (!alignment) throw AlignmentError("no Alignment element");

  if (const pt::ptree* level = child(*alignment, "level")) {
    if (trim(level->data()) != "0") {
      throw AlignmentError("only level 0 alignments are supported, got '" + level->data() + "'");
    }
  }
  std::string type = "**";
  if (const pt::ptree* t = child(*alignment, "type")) type = trim(t->data());

  Alignment out(parse_onto(child(*alignment, "onto1")), parse_onto(child(*alignment, "onto2")), {},
                type);
  for (const auto& [key, node] : *alignment) {
    if (local(key) != "map") continue;
    for (const auto& [cell_key, cell] : node) {
      if (local(cell_key) == "Cell") out.add(parse_cell(cell));
    }
  }
  return out;
}

std::string serialize_alignment_xml(const Alignment& a) {
  std::ostringstream out;
  out << "<?xml version=\"1.0\" encoding=\"utf-8\"?>\n"
      << "<rdf:RDF xmlns=\"" << kAlignNs << "\"\n"
      << "         xmlns:rdf=\"http://www.w3.org/1999/02/22-rdf-syntax-ns#\"\n"
      << "         xmlns:xsd=\"http://www.w3.org/2001/XMLSchema#\">\n"
      << "<Alignment>\n"
      << "  <xml>yes</xml>\n"
      << "  <level>0</level>\n"
      << "  <type>" << xml_escape(a.type()) << "</type>\n"
      << "  <onto1>" << xml_escape(a.onto1()) << "</onto1>\n"
      << "  <onto2>" << xml_escape(a.onto2()) << "</onto2>\n";
  for (const auto& c : a.sorted_cells()) {
    out << "  <map>\n"
        << "    <Cell>\n"
        << "      <entity1 rdf:resource=\"" << xml_escape(c.entity1.str()) << "\"/>\n"
        << "      <entity2 rdf:resource=\"" << xml_escape(c.entity2.str()) << "\"/>\n"
        << "      <relation>" << xml_escape(glyph(c.relation)) << "</relation>\n"
        << "      <measure rdf:datatype=\"http://www.w3.org/2001/XMLSchema#float\">"
        << format_measure(c.confidence) << "</measure>\n"
        << "    </Cell>\n"
        << "  </map>\n";
  }
  out << "</Alignment>\n"
      << "</rdf:RDF>\n";
  return out.str();
}

Alignment parse_alignment_json(std::string_view text) {
  using nlohmann::json;
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw AlignmentError(std::string("malformed JSON: ") + e.what());
  }
  if (!doc.is_object()) throw AlignmentError("alignment JSON must be an object");

  auto optional_string = [&](const char* field, const char* fallback) -> std::string {
    if (!doc.contains(field)) return fallback;
    if (!doc[field].is_string()) throw AlignmentError(std::string(field) + " must be a string");
    return doc[field].get<std::string>();
  };
  Alignment out(optional_string("onto1", ""), optional_string("onto2", ""), {},
                optional_string("type", "**"));

  if (!doc.contains("cells") || !doc["cells"].is_array()) {
    throw AlignmentError("alignment JSON needs a 'cells' array");
  }
  for (const auto& cell : doc["cells"]) {
    if (!cell.is_object()) throw AlignmentError("each cell must be an object");
    for (const char* field : {"entity1", "entity2", "relation"}) {
      if (!cell.contains(field) || !cell[field].is_string()) {
        throw AlignmentError(std::string("cell field '") + field + "' must be a string");
      }
    }
    if (!cell.contains("confidence") || !cell["confidence"].is_number()) {
      throw AlignmentError("cell field 'confidence' must be a number");
    }
    Correspondence c;
    for (const char* field : {"entity1", "entity2"}) {
      auto value = cell[field].get<std::string>();
      if (!Iri::is_valid(value)) throw AlignmentError("'" + value + "' is not an IRI");
    }
    c.entity1 = Iri(cell["entity1"].get<std::string>());
    c.entity2 = Iri(cell["entity2"].get<std::string>());
    auto g = cell["relation"].get<std::string>();
    auto r = relation_from_glyph(g);
    if (!r) throw AlignmentError("unknown relation glyph '" + g + "'");
    c.relation = *r;
    c.confidence = cell["confidence"].get<double>();
    out.add(std::move(c));
  }
  return out;
}

std::string serialize_alignment_json(const Alignment& a) {
  nlohmann::ordered_json doc;
  doc["onto1"] = a.onto1();
  doc["onto2"] = a.onto2();
  doc["type"] = a.type();
  doc["cells"] = nlohmann::ordered_json::array();
  for (const auto& c : a.sorted_cells()) {
    nlohmann::ordered_json cell;
    cell["entity1"] = c.entity1.str();
    cell["entity2"] = c.entity2.str();
    cell["relation"] = std::string(glyph(c.relation));
    cell["confidence"] = c.confidence;
    doc["cells"].push_back(std::move(cell));
  }
  return doc.dump(2) + "\n";
}

}  // namespace alignkit
