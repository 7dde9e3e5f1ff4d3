#include "alignkit/evaluation.hpp"

#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>

#include "alignkit/filters.hpp"

namespace alignkit {

ConfusionCounts confusion_counts(const Alignment& a, const Alignment& r,
                                 std::optional<EntitySetSizes> sizes) {
  ConfusionCounts c;
  for (const auto& cell : a.cells()) {
    if (r.contains(cell.key())) ++c.tp;
  }
  c.fp = a.size() - c.tp;
  c.fn = r.size() - c.tp;
  if (sizes) {
    std::size_t grid = sizes->first * sizes->second;
    std::size_t united = c.tp + c.fp + c.fn;
    c.tn = grid >= united ? grid - united : 0;
  }
  return c;
}

std::optional<double> precision(const ConfusionCounts& c) {
  if (c.alignment_size() == 0) return std::nullopt;
  return static_cast<double>(c.tp) / static_cast<double>(c.alignment_size());
}

std::optional<double> recall(const ConfusionCounts& c) {
  if (c.reference_size() == 0) return std::nullopt;
  return static_cast<double>(c.tp) / static_cast<double>(c.reference_size());
}

double f_measure(double p, double r, double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw std::invalid_argument("F-measure alpha must be in [0, 1]");
  if (alpha == 1.0) return p;
  if (alpha == 0.0) return r;
  if (p == 0.0 && r == 0.0) return 0.0;
  return p * r / ((1.0 - alpha) * p + alpha * r);
}

double overall(double p, double r) {
  if (p == 0.0) return -std::numeric_limits<double>::infinity();
  return r * (2.0 - 1.0 / p);
}

AmbiguityDegree ambiguity_degree(std::size_t ambiguous, std::size_t alignment_size) {
  AmbiguityDegree d;
  d.ambiguous = ambiguous;
  if (alignment_size == 0) return d;
  d.defined = true;
  d.percent = static_cast<double>(ambiguous) * 100.0 / static_cast<double>(alignment_size);
  return d;
}

AmbiguityDegree ambiguity_degree(const Alignment& a) {
  return ambiguity_degree(ambiguous_cells(a).size(), a.size());
}

std::string_view to_string(MatchingBalance balance) {
  switch (balance) {
    case MatchingBalance::Under: return "under-matching";
    case MatchingBalance::Over: return "over-matching";
    case MatchingBalance::Balanced: return "balanced";
  }
  return "?";
}

Delta delta(std::size_t reference_size, std::size_t alignment_size) {
  Delta d;
  d.value = static_cast<long long>(reference_size) - static_cast<long long>(alignment_size);
  d.balance = d.value > 0 ? MatchingBalance::Under
              : d.value < 0 ? MatchingBalance::Over
                            : MatchingBalance::Balanced;
  return d;
}

EvaluationReport report_from_counts(const ConfusionCounts& counts, std::size_t ambiguous, double alpha) {
  EvaluationReport rep;
  rep.counts = counts;
  rep.alignment_size = counts.alignment_size();
  rep.reference_size = counts.reference_size();
  rep.alpha = alpha;
  rep.precision = precision(counts);
  rep.recall = recall(counts);
  if (rep.precision) rep.noise = 1.0 - *rep.precision;
  if (rep.recall) rep.silence = 1.0 - *rep.recall;
  if (rep.precision && rep.recall) {
    rep.f_measure_alpha = f_measure(*rep.precision, *rep.recall, alpha);
    rep.f1 = f_measure(*rep.precision, *rep.recall, 0.5);
    rep.overall = overall(*rep.precision, *rep.recall);
  }
  rep.ambiguity = ambiguity_degree(ambiguous, rep.alignment_size);
  rep.delta = delta(rep.reference_size, rep.alignment_size);
  return rep;
}

EvaluationReport evaluate(const Alignment& a, const Alignment& r, double alpha,
                          std::optional<EntitySetSizes> sizes) {
  return report_from_counts(confusion_counts(a, r, sizes), ambiguous_cells(a).size(), alpha);
}

SweepResult threshold_sweep(const Alignment& a, const Alignment& r, const std::vector<double>& grid) {
  if (grid.empty()) throw std::invalid_argument("threshold grid is empty");
  SweepResult result;
  for (double alpha : grid) {
    auto rep = evaluate(trim(a, alpha), r);
    result.curve.push_back({alpha, rep.f1});
    if (!rep.f1) continue;
    if (!result.best_f1 || *rep.f1 > *result.best_f1 ||
        (*rep.f1 == *result.best_f1 && alpha < *result.best_alpha)) {
      result.best_f1 = rep.f1;
      result.best_alpha = alpha;
    }
  }
  return result;
}

namespace {

double parse_number(std::string_view text) {
  std::string s(text);
  char* end = nullptr;
  double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size() || !std::isfinite(v)) {
    throw std::invalid_argument("'" + s + "' is not a number");
  }
  return v;
}

}  // namespace

std::vector<double> parse_grid(std::string_view text) {
  auto first = text.find(':');
  auto second = first == std::string_view::npos ? first : text.find(':', first + 1);
  if (second == std::string_view::npos || text.find(':', second + 1) != std::string_view::npos) {
    throw std::invalid_argument("grid must be start:stop:step");
  }
  double start = parse_number(text.substr(0, first));
  double stop = parse_number(text.substr(first + 1, second - first - 1));
  double step = parse_number(text.substr(second + 1));
  if (!(step > 0.0)) throw std::invalid_argument("grid step must be positive");
  if (stop < start) throw std::invalid_argument("grid stop is below start");
  if (start < 0.0 || stop > 1.0) throw std::invalid_argument("grid must lie within [0, 1]");
  auto count = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
  std::vector<double> grid;
  grid.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    // Snapped to 12 decimal digits.
    double v = start + static_cast<double>(i) * step;
    grid.push_back(std::min(stop, std::round(v * 1e12) / 1e12));
  }
  return grid;
}

}  // namespace alignkit
