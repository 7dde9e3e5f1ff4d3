#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "alignkit/alignment.hpp"
#include "alignkit/filters.hpp"
#include "alignkit/matcher.hpp"
#include "alignkit/report.hpp"
#include "alignkit/table.hpp"

namespace alignkit {

enum class DisambiguationStrategy { TwoPass, MaxWeight, SubsumptionRewrite };

/// "two-pass", "max-weight", "subsumption-rewrite".
std::string_view to_string(DisambiguationStrategy s);
std::optional<DisambiguationStrategy> disambiguation_strategy_from_string(std::string_view text);

struct DisambiguateOptions {
  DisambiguationStrategy strategy = DisambiguationStrategy::TwoPass;
  MaxWeightMode max_weight_mode = MaxWeightMode::Exact;
  SubsumptionDirection direction = SubsumptionDirection::SharedIsSuper;
};

Alignment disambiguate(const Alignment& a, const DisambiguateOptions& options);

/// Error in a pipeline stage; `stage` is one of config, convert, match,
/// trim, disambiguate, evaluate, merge.
class PipelineError : public std::runtime_error {
 public:
  enum class Failure { Io, Parse, Stage };

  PipelineError(std::string stage, const std::string& message, Failure failure = Failure::Parse)
      : std::runtime_error(stage + ": " + message), stage_(std::move(stage)), failure_(failure) {}

  const std::string& stage() const { return stage_; }
  Failure failure() const { return failure_; }

 private:
  std::string stage_;
  Failure failure_;
};

/// Ontology taken from a CSV table (converted) or from a Turtle file.
struct SourceConfig {
  std::optional<std::filesystem::path> csv;
  std::optional<std::filesystem::path> turtle;
  std::string id_column;
  std::vector<std::string> association_columns;
  char delimiter = ',';
  std::string base;
};

struct TrimConfig {
  /// Fixed threshold; when absent the F1-optimal threshold over `grid` is used.
  std::optional<double> alpha;
  std::string grid = "0:1:0.01";
};

struct PipelineConfig {
  std::filesystem::path output_dir = "out";
  SourceConfig o1;
  SourceConfig o2;
  MatcherConfig matcher;
  /// Precomputed alignment used instead of running the matcher.
  std::optional<std::filesystem::path> alignment;
  std::filesystem::path reference;
  TrimConfig trim;
  DisambiguateOptions disambiguate;
  double alpha_f = 0.5;
  bool merge = true;
};

/// Parses the JSON config. Relative paths are resolved against `base_dir`.
/// Throws PipelineError("config", ...).
PipelineConfig parse_pipeline_config(std::string_view text, const std::filesystem::path& base_dir);
PipelineConfig load_pipeline_config(const std::filesystem::path& path);

struct PipelineResult {
  std::vector<ReportRow> rows;
  std::vector<std::filesystem::path> written;
};

/// convert -> match -> trim -> disambiguate -> evaluate -> merge, writing
/// o1.ttl, o2.ttl, alignment.rdf, disambiguated.rdf, trimmed.rdf,
/// trimmed_disambiguated.rdf, report.{txt,json,csv} and, when merging,
/// merged.ttl and merged.skipped.json into output_dir.
PipelineResult run_pipeline(const PipelineConfig& cfg);

/// Renders the four-variant report as text with a heading.
std::string render_report_text(const std::vector<ReportRow>& rows, const std::string& title);

/// Table conversion as run by both the pipeline and the convert command.
Ontology convert_csv(const SourceConfig& source);

}  // namespace alignkit
