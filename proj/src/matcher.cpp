#include "alignkit/matcher.hpp"

#include <algorithm>
#include <cmath>
#include <regex>
#include <set>

#include <json.hpp>

#include "alignkit/similarity.hpp"
#include "alignkit/table.hpp"

namespace alignkit {

std::string_view to_string(MatcherKind kind) {
  switch (kind) {
    case MatcherKind::ExactName: return "ExactName";
    case MatcherKind::EditSimilarity: return "EditSimilarity";
    case MatcherKind::TokenJaccard: return "TokenJaccard";
  }
  return "?";
}

std::optional<MatcherKind> matcher_kind_from_string(std::string_view text) {
  for (auto k : {MatcherKind::ExactName, MatcherKind::EditSimilarity, MatcherKind::TokenJaccard}) {
    if (to_string(k) == text) return k;
  }
  return std::nullopt;
}

std::string_view to_string(CombineStrategy strategy) {
  switch (strategy) {
    case CombineStrategy::Min: return "Min";
    case CombineStrategy::Max: return "Max";
    case CombineStrategy::Average: return "Average";
    case CombineStrategy::WeightedSum: return "WeightedSum";
  }
  return "?";
}

std::optional<CombineStrategy> combine_strategy_from_string(std::string_view text) {
  for (auto s : {CombineStrategy::Min, CombineStrategy::Max, CombineStrategy::Average,
                 CombineStrategy::WeightedSum}) {
    if (to_string(s) == text) return s;
  }
  return std::nullopt;
}

void MatcherConfig::validate() const {
  if (matchers.empty()) throw MatcherConfigError("at least one matcher is required");
  std::set<MatcherKind> unique(matchers.begin(), matchers.end());
  if (unique.size() != matchers.size()) throw MatcherConfigError("matcher listed twice");
  if (!(candidate_floor >= 0.0 && candidate_floor <= 1.0)) {
    throw MatcherConfigError("candidate_floor must be in [0, 1]");
  }
  if (strategy != CombineStrategy::WeightedSum) return;
  if (weights.size() != matchers.size()) {
    throw MatcherConfigError("WeightedSum needs exactly one weight per matcher");
  }
  double sum = 0.0;
  for (auto m : matchers) {
    auto it = weights.find(m);
    if (it == weights.end()) {
      throw MatcherConfigError("no weight for matcher " + std::string(to_string(m)));
    }
    if (!(it->second >= 0.0)) throw MatcherConfigError("weights must be nonnegative");
    sum += it->second;
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    throw MatcherConfigError("WeightedSum weights sum to " + std::to_string(sum) + ", not 1");
  }
}

MatcherConfig matcher_config_from_json(std::string_view text) {
  using nlohmann::json;
  MatcherConfig cfg;
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw MatcherConfigError(std::string("malformed matcher config: ") + e.what());
  }
  if (!doc.is_object()) throw MatcherConfigError("matcher config must be an object");
  try {
    if (doc.contains("matchers")) {
      cfg.matchers.clear();
      for (const auto& m : doc.at("matchers")) {
        auto kind = matcher_kind_from_string(m.get<std::string>());
        if (!kind) throw MatcherConfigError("unknown matcher '" + m.get<std::string>() + "'");
        cfg.matchers.push_back(*kind);
      }
    }
    if (doc.contains("strategy")) {
      auto s = combine_strategy_from_string(doc.at("strategy").get<std::string>());
      if (!s) throw MatcherConfigError("unknown strategy '" + doc.at("strategy").get<std::string>() + "'");
      cfg.strategy = *s;
    }
    if (doc.contains("weights")) {
      for (const auto& [name, w] : doc.at("weights").items()) {
        auto kind = matcher_kind_from_string(name);
        if (!kind) throw MatcherConfigError("weight for unknown matcher '" + name + "'");
        cfg.weights[*kind] = w.get<double>();
      }
    }
    if (doc.contains("candidate_floor")) cfg.candidate_floor = doc.at("candidate_floor").get<double>();
    if (doc.contains("remove_stopwords")) cfg.remove_stopwords = doc.at("remove_stopwords").get<bool>();
    if (doc.contains("ignore_numeric_ids")) {
      cfg.ignore_numeric_ids = doc.at("ignore_numeric_ids").get<bool>();
    }
  } catch (const json::exception& e) {
    throw MatcherConfigError(std::string("matcher config: ") + e.what());
  }
  cfg.validate();
  return cfg;
}

std::string matcher_config_to_json(const MatcherConfig& cfg) {
  nlohmann::ordered_json doc;
  doc["matchers"] = nlohmann::ordered_json::array();
  for (auto m : cfg.matchers) doc["matchers"].push_back(std::string(to_string(m)));
  doc["strategy"] = std::string(to_string(cfg.strategy));
  doc["weights"] = nlohmann::ordered_json::object();
  for (const auto& [m, w] : cfg.weights) doc["weights"][std::string(to_string(m))] = w;
  doc["candidate_floor"] = cfg.candidate_floor;
  doc["remove_stopwords"] = cfg.remove_stopwords;
  doc["ignore_numeric_ids"] = cfg.ignore_numeric_ids;
  return doc.dump(2) + "\n";
}

double combine(const MatcherScores& scores, const MatcherConfig& cfg) {
  std::vector<double> values;
  double weighted = 0.0;
  for (auto m : cfg.matchers) {
    auto it = std::find_if(scores.begin(), scores.end(), [m](const auto& s) { return s.first == m; });
    if (it == scores.end()) {
      throw MatcherConfigError("no score for matcher " + std::string(to_string(m)));
    }
    values.push_back(it->second);
    if (cfg.strategy == CombineStrategy::WeightedSum) {
      auto w = cfg.weights.find(m);
      if (w == cfg.weights.end()) {
        throw MatcherConfigError("no weight for matcher " + std::string(to_string(m)));
      }
      weighted += w->second * it->second;
    }
  }
  if (values.empty()) throw MatcherConfigError("at least one matcher is required");
  double result = 0.0;
  switch (cfg.strategy) {
    case CombineStrategy::Min: result = *std::min_element(values.begin(), values.end()); break;
    case CombineStrategy::Max: result = *std::max_element(values.begin(), values.end()); break;
    case CombineStrategy::Average: {
      double sum = 0.0;
      for (double v : values) sum += v;
      result = sum / static_cast<double>(values.size());
      break;
    }
    case CombineStrategy::WeightedSum: result = weighted; break;
  }
  return std::clamp(result, 0.0, 1.0);
}

bool is_numeric_id(std::string_view name) {
  static const std::regex kIdCode("[A-Za-z]*[/_:#-]?[0-9]+");
  return std::regex_match(name.begin(), name.end(), kIdCode);
}

std::vector<std::string> entity_names(const Ontology& ontology, const Iri& entity) {
  std::vector<std::string> names;
  auto push = [&names](std::string n) {
    if (std::find(names.begin(), names.end(), n) == names.end()) names.push_back(std::move(n));
  };
  push(percent_decode(entity.local_name()));
  for (const auto& label : ontology.labels_of(entity)) push(label);
  return names;
}

namespace {

using Tokens = std::vector<std::string>;

MatcherScores score_tokens(const std::vector<Tokens>& names1, const std::vector<Tokens>& names2,
                           const MatcherConfig& cfg) {
  MatcherScores scores;
  for (auto m : cfg.matchers) {
    double best = 0.0;
    for (const auto& a : names1) {
      for (const auto& b : names2) {
        double s = 0.0;
        switch (m) {
          case MatcherKind::ExactName: s = exact_name_tokens(a, b); break;
          case MatcherKind::EditSimilarity: s = edit_similarity_tokens(a, b); break;
          case MatcherKind::TokenJaccard: s = token_jaccard_tokens(a, b); break;
        }
        best = std::max(best, s);
      }
    }
    scores.emplace_back(m, best);
  }
  return scores;
}

struct Candidate {
  Iri iri;
  std::vector<Tokens> names;
};

std::vector<Candidate> candidates(const Ontology& o, EntityKind kind, const MatcherConfig& cfg) {
  std::vector<Candidate> out;
  for (const auto& iri : o.entities_of_kind(kind)) {
    auto names = entity_names(o, iri);
    if (cfg.ignore_numeric_ids &&
        std::any_of(names.begin(), names.end(), [](const auto& n) { return is_numeric_id(n); })) {
      continue;
    }
    Candidate c{iri, {}};
    for (const auto& n : names) c.names.push_back(normalize(n, cfg.remove_stopwords));
    out.push_back(std::move(c));
  }
  return out;
}

}  // namespace

MatcherScores score_pair(const std::vector<std::string>& names1,
                         const std::vector<std::string>& names2, const MatcherConfig& cfg) {
  std::vector<Tokens> t1;
  std::vector<Tokens> t2;
  for (const auto& n : names1) t1.push_back(normalize(n, cfg.remove_stopwords));
  for (const auto& n : names2) t2.push_back(normalize(n, cfg.remove_stopwords));
  return score_tokens(t1, t2, cfg);
}

Alignment match(const Ontology& o1, const Ontology& o2, const MatcherConfig& cfg) {
  cfg.validate();
  auto base = [](const Ontology& o) { return o.base_iri() ? o.base_iri()->str() : std::string(); };
  std::vector<Correspondence> cells;
  for (auto kind : kAllEntityKinds) {
    auto left = candidates(o1, kind, cfg);
    auto right = candidates(o2, kind, cfg);
    for (const auto& a : left) {
      for (const auto& b : right) {
        double score = combine(score_tokens(a.names, b.names, cfg), cfg);
        if (score >= cfg.candidate_floor) {
          cells.push_back({a.iri, b.iri, Relation::Equivalence, score});
        }
      }
    }
  }
  Alignment out(base(o1), base(o2), std::move(cells));
  return out.with_cells(out.sorted_cells());
}

}  // namespace alignkit
