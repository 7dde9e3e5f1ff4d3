#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "alignkit/alignment.hpp"
#include "alignkit/ontology.hpp"

namespace alignkit {

enum class MatcherKind { ExactName, EditSimilarity, TokenJaccard };
enum class CombineStrategy { Min, Max, Average, WeightedSum };

std::string_view to_string(MatcherKind kind);
std::optional<MatcherKind> matcher_kind_from_string(std::string_view text);
std::string_view to_string(CombineStrategy strategy);
std::optional<CombineStrategy> combine_strategy_from_string(std::string_view text);

class MatcherConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct MatcherConfig {
  std::vector<MatcherKind> matchers = {MatcherKind::ExactName, MatcherKind::EditSimilarity,
                                       MatcherKind::TokenJaccard};
  CombineStrategy strategy = CombineStrategy::Average;
  /// Used by WeightedSum only; keys must be exactly `matchers`.
  std::map<MatcherKind, double> weights;
  double candidate_floor = 0.4;
  bool remove_stopwords = false;
  /// Drops candidates whose name is an id code such as "cshapes/1474" or "Q42".
  bool ignore_numeric_ids = false;

  /// Throws MatcherConfigError on an empty or repeated matcher list, a floor
  /// outside [0, 1], or WeightedSum weights that are negative, do not cover
  /// the matchers or do not sum to 1.
  void validate() const;
};

/// Keys: matchers (names), strategy, weights (object), candidate_floor,
/// remove_stopwords, ignore_numeric_ids. Missing keys keep their defaults.
MatcherConfig matcher_config_from_json(std::string_view text);
std::string matcher_config_to_json(const MatcherConfig& cfg);

using MatcherScores = std::vector<std::pair<MatcherKind, double>>;

/// Combines per-matcher scores. Throws MatcherConfigError when the scores do
/// not cover cfg.matchers.
double combine(const MatcherScores& scores, const MatcherConfig& cfg);

/// True for names of the form letters, optional separator, digits.
bool is_numeric_id(std::string_view name);

/// Percent-decoded local name followed by the rdfs:labels, without repeats.
std::vector<std::string> entity_names(const Ontology& ontology, const Iri& entity);

/// Per-matcher maximum over all name pairs.
MatcherScores score_pair(const std::vector<std::string>& names1,
                         const std::vector<std::string>& names2, const MatcherConfig& cfg);

/// Scores every same-kind cross pair and emits an Equivalence cell for each
/// combined score >= cfg.candidate_floor, sorted by identity.
Alignment match(const Ontology& o1, const Ontology& o2, const MatcherConfig& cfg = {});

}  // namespace alignkit
