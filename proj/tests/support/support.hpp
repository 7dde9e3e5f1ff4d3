#pragma once

#include <algorithm>
#include <cstddef>
#include <filesystem>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "alignkit/alignment.hpp"
#include "alignkit/ontology.hpp"
#include "alignkit/table.hpp"

namespace alignkit::testing {

inline std::filesystem::path source_dir() { return ALIGNKIT_SOURCE_DIR; }
inline std::filesystem::path fixture(const std::string& rel) { return source_dir() / "tests" / "fixtures" / rel; }
inline std::filesystem::path data(const std::string& rel) { return source_dir() / "data" / rel; }

inline Iri left(const std::string& name) { return Iri("http://example.org/o1#" + name); }
inline Iri right(const std::string& name) { return Iri("http://example.org/o2#" + name); }

inline Correspondence cell(const std::string& e1, const std::string& e2, double confidence,
                           Relation relation = Relation::Equivalence) {
  return {left(e1), right(e2), relation, confidence};
}

inline Alignment alignment_of(std::vector<Correspondence> cells) {
  return Alignment("http://example.org/o1", "http://example.org/o2", std::move(cells));
}

/// Small random ontology with every entity kind, a subclass forest, typed
/// literals and labels that need escaping.
inline Ontology random_ontology(std::mt19937& rng) {
  std::uniform_int_distribution<int> small(1, 6);
  const std::string ns = "http://example.org/r" + std::to_string(rng() % 1000) + "#";
  OntologyBuilder b(Iri(ns.substr(0, ns.size() - 1)));
  std::vector<Iri> classes, objects, datas, individuals;
  for (int i = 0, n = small(rng); i < n; ++i) {
    classes.emplace_back(ns + "C" + std::to_string(i));
    b.declare(classes.back(), EntityKind::OntologyClass);
    if (i > 0 && rng() % 2) {
      b.add(Triple{classes.back(), vocab::rdfs_sub_class_of(), classes[rng() % i]});
    }
  }
  for (int i = 0, n = small(rng); i < n; ++i) {
    objects.emplace_back(ns + "p" + std::to_string(i));
    b.declare(objects.back(), EntityKind::ObjectProperty);
  }
  for (int i = 0, n = small(rng); i < n; ++i) {
    datas.emplace_back(ns + "d" + std::to_string(i));
    b.declare(datas.back(), EntityKind::DatatypeProperty);
  }
  const std::vector<std::string> texts = {"plain", "with \"quotes\"", "back\\slash",
                                          "line\nbreak", "tab\there", "Côte d'Ivoire", ""};
  for (int i = 0, n = small(rng); i < n; ++i) {
    individuals.emplace_back(ns + "i_" + std::to_string(i) + "%28x%29");
    b.assert_type(individuals.back(), classes[rng() % classes.size()]);
    b.add_label(individuals.back(), texts[rng() % texts.size()]);
  }
  for (const auto& ind : individuals) {
    b.add(Triple{ind, objects[rng() % objects.size()], individuals[rng() % individuals.size()]});
    switch (rng() % 4) {
      case 0: b.add(Triple{ind, datas[rng() % datas.size()], Literal(std::to_string(int(rng() % 2000) - 1000), Datatype::Integer)}); break;
      case 1: b.add(Triple{ind, datas[rng() % datas.size()], Literal("0.125", Datatype::Decimal)}); break;
      case 2: b.add(Triple{ind, datas[rng() % datas.size()], Literal(rng() % 2 ? "true" : "false", Datatype::Boolean)}); break;
      default: b.add(Triple{ind, datas[rng() % datas.size()], Literal(texts[rng() % texts.size()], Datatype::String)});
    }
  }
  return b.build();
}

/// Random table with one Id column, `assocs` association columns and `attrs`
/// attribute columns; association targets never collide with row ids.
inline VirtualTable random_table(std::mt19937& rng, std::size_t assocs, std::size_t attrs, std::size_t rows) {
  VirtualTable vt;
  vt.columns.push_back({"Key", ColumnRole::Id});
  for (std::size_t i = 0; i < assocs; ++i) vt.columns.push_back({"Link" + std::to_string(i), ColumnRole::Association});
  for (std::size_t i = 0; i < attrs; ++i) vt.columns.push_back({"Attr" + std::to_string(i), ColumnRole::Attribute});
  for (std::size_t r = 0; r < rows; ++r) {
    std::vector<std::string> row{"row" + std::to_string(r)};
    for (std::size_t i = 0; i < assocs; ++i) row.push_back(rng() % 4 ? "target" + std::to_string(rng() % 4) : "");
    for (std::size_t i = 0; i < attrs; ++i) row.push_back(rng() % 5 ? std::to_string(rng() % 100) : "");
    vt.rows.push_back(row);
  }
  return vt;
}

/// Non-empty cells of the given role.
inline std::size_t non_empty_cells(const VirtualTable& vt, ColumnRole role) {
  std::size_t n = 0;
  for (const auto& row : vt.rows) {
    for (std::size_t c = 0; c < vt.columns.size(); ++c) n += vt.columns[c].role == role && !row[c].empty();
  }
  return n;
}

/// Subjects typed by `cls` and triples whose object is a literal (labels excluded).
inline std::size_t typed_by(const Ontology& o, const Iri& cls) {
  std::size_t n = 0;
  for (const auto& t : o.triples()) n += t.predicate == vocab::rdf_type() && t.object == Term(cls);
  return n;
}
inline std::size_t data_assertions(const Ontology& o) {
  std::size_t n = 0;
  for (const auto& t : o.triples()) n += !is_iri(t.object) && t.predicate != vocab::rdfs_label();
  return n;
}

/// Random bipartite alignment over rows x cols entities with edge density
/// `density`. Confidences are multiples of 1/1000; when `distinct` is set no
/// two cells share a confidence.
inline Alignment random_alignment(std::mt19937& rng, int rows, int cols, double density, bool distinct,
                                  bool random_relations = false) {
  std::bernoulli_distribution edge(density);
  std::vector<int> pool(1001);
  for (int i = 0; i <= 1000; ++i) pool[i] = i;
  std::shuffle(pool.begin(), pool.end(), rng);
  std::uniform_int_distribution<int> any(0, 1000);
  std::uniform_int_distribution<int> rel(0, 5);
  std::vector<Correspondence> cells;
  std::size_t next = 0;
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) {
      if (!edge(rng)) continue;
      int c = distinct ? pool[next++] : any(rng);
      Relation r = random_relations ? kAllRelations[rel(rng)] : Relation::Equivalence;
      cells.push_back(cell("a" + std::to_string(i), "b" + std::to_string(j), c / 1000.0, r));
    }
  }
  return alignment_of(std::move(cells));
}

/// Cells whose entity1 or entity2 appears in another cell, by double loop.
inline std::size_t brute_force_ambiguous(const Alignment& a) {
  std::size_t n = 0;
  const auto& cells = a.cells();
  for (std::size_t i = 0; i < cells.size(); ++i) {
    bool amb = false;
    for (std::size_t j = 0; j < cells.size() && !amb; ++j) {
      if (i != j && (cells[i].entity1 == cells[j].entity1 || cells[i].entity2 == cells[j].entity2)) amb = true;
    }
    n += amb;
  }
  return n;
}

inline std::set<CellKey> keys(const Alignment& a) {
  std::set<CellKey> out;
  for (const auto& c : a.cells()) out.insert(c.key());
  return out;
}

/// Gale-Shapley with entity1 proposing; both sides rank partners by cell
/// confidence and only cells of the alignment are acceptable.
inline std::set<CellKey> gale_shapley(const Alignment& a) {
  std::map<Iri, std::vector<const Correspondence*>> prefs;
  for (const auto& c : a.cells()) prefs[c.entity1].push_back(&c);
  for (auto& [e, list] : prefs) {
    std::sort(list.begin(), list.end(), [](auto* x, auto* y) { return x->confidence > y->confidence; });
  }
  std::map<Iri, std::size_t> next;
  std::map<Iri, const Correspondence*> engaged;
  std::vector<Iri> free;
  for (const auto& [e, list] : prefs) free.push_back(e);
  while (!free.empty()) {
    Iri e = free.back();
    free.pop_back();
    auto& i = next[e];
    if (i >= prefs[e].size()) continue;
    const Correspondence* proposal = prefs[e][i++];
    auto it = engaged.find(proposal->entity2);
    if (it == engaged.end()) {
      engaged[proposal->entity2] = proposal;
    } else if (proposal->confidence > it->second->confidence) {
      free.push_back(it->second->entity1);
      it->second = proposal;
    } else {
      free.push_back(e);
    }
  }
  std::set<CellKey> out;
  for (const auto& [e2, c] : engaged) out.insert(c->key());
  return out;
}

/// True when no cell outside `m` is preferred by both of its entities over
/// their partners in `m` (unmatched counts as worst).
inline bool is_stable(const Alignment& a, const std::set<CellKey>& m) {
  std::map<Iri, double> partner1;
  std::map<Iri, double> partner2;
  for (const auto& c : a.cells()) {
    if (m.count(c.key())) {
      partner1[c.entity1] = c.confidence;
      partner2[c.entity2] = c.confidence;
    }
  }
  for (const auto& c : a.cells()) {
    if (m.count(c.key())) continue;
    auto p1 = partner1.find(c.entity1);
    auto p2 = partner2.find(c.entity2);
    bool want1 = p1 == partner1.end() || c.confidence > p1->second;
    bool want2 = p2 == partner2.end() || c.confidence > p2->second;
    if (want1 && want2) return false;
  }
  return true;
}

/// Every matching (each entity at most once) of the alignment's cells.
inline void for_each_matching(const Alignment& a, const std::function<void(const std::vector<std::size_t>&)>& f) {
  const auto& cells = a.cells();
  std::vector<std::size_t> chosen;
  std::set<Iri> used1;
  std::set<Iri> used2;
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (i == cells.size()) {
      f(chosen);
      return;
    }
    rec(i + 1);
    const auto& c = cells[i];
    if (used1.count(c.entity1) || used2.count(c.entity2)) return;
    used1.insert(c.entity1);
    used2.insert(c.entity2);
    chosen.push_back(i);
    rec(i + 1);
    chosen.pop_back();
    used1.erase(c.entity1);
    used2.erase(c.entity2);
  };
  rec(0);
}

/// Maximum total confidence over all matchings, by dynamic programming over
/// subsets of entity2 (rows processed in order).
inline double exhaustive_max_weight(const Alignment& a) {
  std::map<Iri, int> rows;
  std::map<Iri, int> cols;
  for (const auto& c : a.cells()) {
    rows.emplace(c.entity1, 0);
    cols.emplace(c.entity2, 0);
  }
  int r = 0;
  for (auto& [k, v] : rows) v = r++;
  int m = 0;
  for (auto& [k, v] : cols) v = m++;
  std::vector<std::vector<double>> w(static_cast<std::size_t>(r), std::vector<double>(static_cast<std::size_t>(m), -1.0));
  for (const auto& c : a.cells()) {
    auto& slot = w[static_cast<std::size_t>(rows[c.entity1])][static_cast<std::size_t>(cols[c.entity2])];
    slot = std::max(slot, c.confidence);
  }
  std::vector<double> best(1u << m, -1.0);
  best[0] = 0.0;
  for (int i = 0; i < r; ++i) {
    auto next = best;
    for (unsigned mask = 0; mask < best.size(); ++mask) {
      if (best[mask] < 0) continue;
      for (int j = 0; j < m; ++j) {
        double wij = w[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
        if (wij < 0 || (mask & (1u << j))) continue;
        unsigned nm = mask | (1u << j);
        next[nm] = std::max(next[nm], best[mask] + wij);
      }
    }
    best = std::move(next);
  }
  return *std::max_element(best.begin(), best.end());
}

}  // namespace alignkit::testing
