#pragma once

#include <optional>
#include <string>
#include <vector>

#include "alignkit/evaluation.hpp"

namespace alignkit {

/// Decimal rounding to `digits` places, halves away from zero, applied to the
/// value's shortest round-trip decimal form (so 0.8805 gives "0.881").
std::string round_half_up(double value, int digits = 3);

/// Display form: three decimals, "undefined" without a value, "-inf" for the
/// not-worth-repairing Overall.
std::string display_metric(const std::optional<double>& value);

/// One line of a results table, e.g. the untrimmed or trimmed variant.
struct ReportRow {
  std::string variant;
  std::optional<double> threshold;
  EvaluationReport report;
};

/// Columns: Variant, Threshold, R, A, Amb, Precision, Recall, F-measure,
/// Overall, Ambiguity, Delta.
std::string render_table(const std::vector<ReportRow>& rows);
std::string render_csv(const std::vector<ReportRow>& rows);
/// Array of report objects; undefined values are null, -inf is the string "-inf".
std::string render_json(const std::vector<ReportRow>& rows);

/// Single report as a JSON object (the element type of render_json).
std::string report_to_json(const EvaluationReport& report);

}  // namespace alignkit
