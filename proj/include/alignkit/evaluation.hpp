#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "alignkit/alignment.hpp"

namespace alignkit {

/// Cells are compared by identity (entity1, entity2, relation).
struct ConfusionCounts {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  /// |E| x |E'| - |A ∪ R|, only when the entity-set sizes are known.
  std::optional<std::size_t> tn;

  std::size_t alignment_size() const { return tp + fp; }
  std::size_t reference_size() const { return tp + fn; }
};

using EntitySetSizes = std::pair<std::size_t, std::size_t>;

ConfusionCounts confusion_counts(const Alignment& a, const Alignment& r,
                                 std::optional<EntitySetSizes> sizes = std::nullopt);

/// tp / |A|; no value for an empty alignment.
std::optional<double> precision(const ConfusionCounts& c);
/// tp / |R|; no value for an empty reference.
std::optional<double> recall(const ConfusionCounts& c);

/// P·R / ((1-α)·P + α·R). Returns p exactly at α = 1, r exactly at α = 0,
/// and 0 when p = r = 0. Throws std::invalid_argument for α outside [0, 1].
double f_measure(double p, double r, double alpha);

/// R·(2 - 1/P); -infinity when p = 0.
double overall(double p, double r);

struct AmbiguityDegree {
  std::size_t ambiguous = 0;
  /// Percentage of cells that are ambiguous; 0 for an empty alignment.
  double percent = 0.0;
  /// False for an empty alignment.
  bool defined = false;
};

AmbiguityDegree ambiguity_degree(const Alignment& a);
AmbiguityDegree ambiguity_degree(std::size_t ambiguous, std::size_t alignment_size);

enum class MatchingBalance { Under, Over, Balanced };

std::string_view to_string(MatchingBalance balance);

struct Delta {
  long long value = 0;
  MatchingBalance balance = MatchingBalance::Balanced;
};

/// |R| - |A|: positive is under-matching, negative over-matching.
Delta delta(std::size_t reference_size, std::size_t alignment_size);

struct EvaluationReport {
  ConfusionCounts counts;
  std::size_t alignment_size = 0;
  std::size_t reference_size = 0;
  std::optional<double> precision;
  std::optional<double> recall;
  std::optional<double> noise;
  std::optional<double> silence;
  double alpha = 0.5;
  std::optional<double> f_measure_alpha;
  std::optional<double> f1;
  /// -infinity when precision is 0.
  std::optional<double> overall;
  AmbiguityDegree ambiguity;
  Delta delta;
};

/// Metrics from raw counts, as needed to recompute published tables.
EvaluationReport report_from_counts(const ConfusionCounts& counts, std::size_t ambiguous,
                                    double alpha = 0.5);

EvaluationReport evaluate(const Alignment& a, const Alignment& r, double alpha = 0.5,
                          std::optional<EntitySetSizes> sizes = std::nullopt);

struct SweepPoint {
  double alpha = 0.0;
  std::optional<double> f1;
};

struct SweepResult {
  /// No value when no grid point yields a defined F1.
  std::optional<double> best_alpha;
  std::optional<double> best_f1;
  std::vector<SweepPoint> curve;
};

/// F1 of trim(a, α) for each α in `grid`; the best is the smallest α
/// reaching the maximum. Throws std::invalid_argument for an empty grid.
SweepResult threshold_sweep(const Alignment& a, const Alignment& r, const std::vector<double>& grid);

/// "start:stop:step", inclusive of stop, e.g. "0:1:0.01" has 101 points.
/// Throws std::invalid_argument on malformed input.
std::vector<double> parse_grid(std::string_view text);

}  // namespace alignkit
