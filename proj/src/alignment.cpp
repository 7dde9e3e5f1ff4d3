#include "alignkit/alignment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <map>

namespace alignkit {

std::string_view glyph(Relation relation) {
  switch (relation) {
    case Relation::Equivalence: return "=";
    case Relation::SubsumedBy: return "<";
    case Relation::Subsumes: return ">";
    case Relation::Disjoint: return "%";
    case Relation::InstanceOf: return "InstanceOf";
    case Relation::Overlap: return "Overlaps";
  }
  return "?";
}

std::optional<Relation> relation_from_glyph(std::string_view text) {
  for (auto r : kAllRelations) {
    if (glyph(r) == text) return r;
  }
  return std::nullopt;
}

Relation converse(Relation relation) {
  switch (relation) {
    case Relation::SubsumedBy: return Relation::Subsumes;
    case Relation::Subsumes: return Relation::SubsumedBy;
    default: return relation;
  }
}

CellId cell_id(const CellKey& key) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](std::string_view s) {
    for (unsigned char c : s) {
      h ^= c;
      h *= 0x100000001b3ULL;
    }
  };
  mix(key.entity1.str());
  mix("\x1f");
  mix(key.entity2.str());
  mix("\x1f");
  mix(glyph(key.relation));
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

Alignment::Alignment(std::string onto1, std::string onto2, std::vector<Correspondence> cells,
                     std::string type)
    : onto1_(std::move(onto1)), onto2_(std::move(onto2)), type_(std::move(type)) {
  cells_.reserve(cells.size());
  for (auto& c : cells) add(std::move(c));
}

void Alignment::add(Correspondence cell) {
  if (!(cell.confidence >= 0.0 && cell.confidence <= 1.0)) {
    throw AlignmentError("confidence " + std::to_string(cell.confidence) + " outside [0, 1]");
  }
  if (!keys_.insert(cell.key()).second) {
    throw AlignmentError("duplicate correspondence <" + cell.entity1.str() + "> " +
                         std::string(glyph(cell.relation)) + " <" + cell.entity2.str() + ">");
  }
  cells_.push_back(std::move(cell));
}

const Correspondence* Alignment::find(const CellId& id) const {
  for (const auto& c : cells_) {
    if (c.id() == id) return &c;
  }
  return nullptr;
}

Alignment Alignment::with_cells(std::vector<Correspondence> cells) const {
  return Alignment(onto1_, onto2_, std::move(cells), type_);
}

std::vector<Correspondence> Alignment::sorted_cells() const {
  auto out = cells_;
  std::sort(out.begin(), out.end(),
            [](const Correspondence& a, const Correspondence& b) { return a.key() < b.key(); });
  return out;
}

Alignment Alignment::flipped() const {
  std::vector<Correspondence> cells;
  cells.reserve(cells_.size());
  for (const auto& c : cells_) {
    cells.push_back({c.entity2, c.entity1, converse(c.relation), c.confidence});
  }
  std::string type = type_;
  if (type.size() == 2) std::swap(type[0], type[1]);
  return Alignment(onto2_, onto1_, std::move(cells), type);
}

void Alignment::check_against(const Ontology& o1, const Ontology& o2) const {
  for (const auto& c : cells_) {
    if (!o1.contains(c.entity1)) {
      throw AlignmentError("entity1 <" + c.entity1.str() + "> is not an entity of the first ontology");
    }
    if (!o2.contains(c.entity2)) {
      throw AlignmentError("entity2 <" + c.entity2.str() + "> is not an entity of the second ontology");
    }
  }
}

bool Alignment::operator==(const Alignment& other) const {
  return onto1_ == other.onto1_ && onto2_ == other.onto2_ && type_ == other.type_ &&
         sorted_cells() == other.sorted_cells();
}

std::vector<bool> ambiguity_mask(const Alignment& a) {
  std::map<Iri, std::size_t> left;
  std::map<Iri, std::size_t> right;
  for (const auto& c : a.cells()) {
    ++left[c.entity1];
    ++right[c.entity2];
  }
  std::vector<bool> mask;
  mask.reserve(a.size());
  for (const auto& c : a.cells()) {
    mask.push_back(left[c.entity1] >= 2 || right[c.entity2] >= 2);
  }
  return mask;
}

std::set<CellId> ambiguous_cells(const Alignment& a) {
  std::set<CellId> out;
  auto mask = ambiguity_mask(a);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (mask[i]) out.insert(a.cells()[i].id());
  }
  return out;
}

std::string format_measure(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", value);
  std::string s = buf;
  while (s.size() > 1 && s.back() == '0' && s[s.size() - 2] != '.') s.pop_back();
  return s;
}

}  // namespace alignkit
