#include "alignkit/pipeline.hpp"

#include <json.hpp>

#include "alignkit/evaluation.hpp"
#include "alignkit/io.hpp"
#include "alignkit/merge.hpp"
#include "alignkit/turtle.hpp"

namespace alignkit {

std::string_view to_string(DisambiguationStrategy s) {
  switch (s) {
    case DisambiguationStrategy::TwoPass: return "two-pass";
    case DisambiguationStrategy::MaxWeight: return "max-weight";
    case DisambiguationStrategy::SubsumptionRewrite: return "subsumption-rewrite";
  }
  return "?";
}

std::optional<DisambiguationStrategy> disambiguation_strategy_from_string(std::string_view text) {
  for (auto s : {DisambiguationStrategy::TwoPass, DisambiguationStrategy::MaxWeight,
                 DisambiguationStrategy::SubsumptionRewrite}) {
    if (to_string(s) == text) return s;
  }
  return std::nullopt;
}

Alignment disambiguate(const Alignment& a, const DisambiguateOptions& options) {
  switch (options.strategy) {
    case DisambiguationStrategy::TwoPass: return disambiguate_two_pass(a);
    case DisambiguationStrategy::MaxWeight: return disambiguate_max_weight(a, options.max_weight_mode);
    case DisambiguationStrategy::SubsumptionRewrite:
      return rewrite_ambiguous_to_subsumption(a, options.direction);
  }
  return a;
}

namespace {

using nlohmann::json;

PipelineError config_error(const std::string& message) { return PipelineError("config", message); }

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  std::filesystem::path path(p);
  return path.is_absolute() ? path : base / path;
}

SourceConfig parse_source(const json& j, const std::filesystem::path& base, const char* name) {
  if (!j.is_object()) throw config_error(std::string(name) + " must be an object");
  SourceConfig s;
  if (j.contains("csv")) s.csv = resolve(base, j.at("csv").get<std::string>());
  if (j.contains("turtle")) s.turtle = resolve(base, j.at("turtle").get<std::string>());
  if (s.csv.has_value() == s.turtle.has_value()) {
    throw config_error(std::string(name) + " needs exactly one of csv or turtle");
  }
  if (s.csv) {
    if (!j.contains("id")) throw config_error(std::string(name) + ".id is required for csv sources");
    if (j.at("id").is_array()) {
      throw config_error(std::string(name) + ".id must name a single column, not a composed key");
    }
    s.id_column = j.at("id").get<std::string>();
    if (j.contains("associations")) {
      s.association_columns = j.at("associations").get<std::vector<std::string>>();
    }
    if (j.contains("delimiter")) {
      auto d = j.at("delimiter").get<std::string>();
      if (d.size() != 1) throw config_error(std::string(name) + ".delimiter must be one character");
      s.delimiter = d[0];
    }
    if (!j.contains("base")) throw config_error(std::string(name) + ".base is required for csv sources");
    s.base = j.at("base").get<std::string>();
    if (!Iri::is_valid(s.base)) throw config_error(std::string(name) + ".base is not an IRI");
  }
  return s;
}

Ontology load_source(const SourceConfig& s) {
  return s.csv ? convert_csv(s) : load_ontology(*s.turtle);
}

template <typename F>
auto stage(const char* name, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const PipelineError&) {
    throw;
  } catch (const IoError& e) {
    throw PipelineError(name, e.what(), PipelineError::Failure::Io);
  } catch (const TurtleError& e) {
    throw PipelineError(name, e.what(), PipelineError::Failure::Parse);
  } catch (const CsvError& e) {
    throw PipelineError(name, e.what(), PipelineError::Failure::Parse);
  } catch (const AlignmentError& e) {
    throw PipelineError(name, e.what(), PipelineError::Failure::Parse);
  } catch (const std::exception& e) {
    throw PipelineError(name, e.what(), PipelineError::Failure::Stage);
  }
}

}  // namespace

Ontology convert_csv(const SourceConfig& source) {
  CsvConfig cfg;
  cfg.id_columns = {source.id_column};
  for (const auto& a : source.association_columns) cfg.association_columns.emplace_back(a);
  cfg.delimiter = source.delimiter;
  cfg.table_name = source.csv->stem().string();
  return convert(parse_csv(read_file(*source.csv), cfg), Iri(source.base));
}

PipelineConfig parse_pipeline_config(std::string_view text, const std::filesystem::path& base_dir) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw config_error(std::string("malformed JSON: ") + e.what());
  }
  if (!doc.is_object()) throw config_error("config must be a JSON object");
  PipelineConfig cfg;
  try {
    if (doc.contains("output_dir")) cfg.output_dir = resolve(base_dir, doc.at("output_dir").get<std::string>());
    else cfg.output_dir = base_dir / "out";
    if (!doc.contains("o1") || !doc.contains("o2")) throw config_error("o1 and o2 are required");
    cfg.o1 = parse_source(doc.at("o1"), base_dir, "o1");
    cfg.o2 = parse_source(doc.at("o2"), base_dir, "o2");
    if (doc.contains("match")) cfg.matcher = matcher_config_from_json(doc.at("match").dump());
    if (doc.contains("alignment")) cfg.alignment = resolve(base_dir, doc.at("alignment").get<std::string>());
    if (!doc.contains("reference")) throw config_error("reference is required");
    cfg.reference = resolve(base_dir, doc.at("reference").get<std::string>());
    if (doc.contains("trim")) {
      const auto& t = doc.at("trim");
      if (t.contains("alpha")) {
        if (t.at("alpha").is_string()) {
          if (t.at("alpha").get<std::string>() != "best") throw config_error("trim.alpha must be a number or \"best\"");
        } else {
          cfg.trim.alpha = t.at("alpha").get<double>();
          if (!(*cfg.trim.alpha >= 0.0 && *cfg.trim.alpha <= 1.0)) throw config_error("trim.alpha must be in [0, 1]");
        }
      }
      if (t.contains("grid")) cfg.trim.grid = t.at("grid").get<std::string>();
      parse_grid(cfg.trim.grid);
    }
    if (doc.contains("disambiguate")) {
      const auto& d = doc.at("disambiguate");
      if (d.contains("strategy")) {
        auto s = disambiguation_strategy_from_string(d.at("strategy").get<std::string>());
        if (!s) throw config_error("unknown disambiguation strategy");
        cfg.disambiguate.strategy = *s;
      }
      if (d.contains("greedy") && d.at("greedy").get<bool>()) {
        cfg.disambiguate.max_weight_mode = MaxWeightMode::Greedy;
      }
      if (d.contains("direction")) {
        auto dir = d.at("direction").get<std::string>();
        if (dir == "shared-super") cfg.disambiguate.direction = SubsumptionDirection::SharedIsSuper;
        else if (dir == "shared-sub") cfg.disambiguate.direction = SubsumptionDirection::SharedIsSub;
        else throw config_error("direction must be shared-super or shared-sub");
      }
    }
    if (doc.contains("evaluate") && doc.at("evaluate").contains("alpha_f")) {
      cfg.alpha_f = doc.at("evaluate").at("alpha_f").get<double>();
      if (!(cfg.alpha_f >= 0.0 && cfg.alpha_f <= 1.0)) throw config_error("evaluate.alpha_f must be in [0, 1]");
    }
    if (doc.contains("merge")) cfg.merge = doc.at("merge").get<bool>();
  } catch (const PipelineError&) {
    throw;
  } catch (const std::exception& e) {
    throw config_error(e.what());
  }
  return cfg;
}

PipelineConfig load_pipeline_config(const std::filesystem::path& path) {
  std::string text = read_file(path);
  auto base = path.has_parent_path() ? path.parent_path() : std::filesystem::path(".");
  return parse_pipeline_config(text, base);
}

std::string render_report_text(const std::vector<ReportRow>& rows, const std::string& title) {
  return title + "\n\n" + render_table(rows);
}

PipelineResult run_pipeline(const PipelineConfig& cfg) {
  PipelineResult result;
  auto out = [&](const char* name) { return cfg.output_dir / name; };
  auto write = [&](const char* name, const std::string& content) {
    write_file(out(name), content);
    result.written.push_back(out(name));
  };

  Ontology o1 = stage("convert", [&] { return load_source(cfg.o1); });
  Ontology o2 = stage("convert", [&] { return load_source(cfg.o2); });
  write("o1.ttl", serialize_turtle(o1));
  write("o2.ttl", serialize_turtle(o2));

  Alignment untrimmed = stage("match", [&] {
    if (!cfg.alignment) return match(o1, o2, cfg.matcher);
    Alignment a = load_alignment(*cfg.alignment);
    a.check_against(o1, o2);
    return a;
  });
  Alignment reference = stage("evaluate", [&] { return load_alignment(cfg.reference); });

  double alpha = stage("trim", [&]() -> double {
    if (cfg.trim.alpha) return *cfg.trim.alpha;
    auto sweep = threshold_sweep(untrimmed, reference, parse_grid(cfg.trim.grid));
    return sweep.best_alpha.value_or(0.0);
  });
  Alignment trimmed = stage("trim", [&] { return trim(untrimmed, alpha); });
  Alignment disambiguated = stage("disambiguate", [&] { return disambiguate(untrimmed, cfg.disambiguate); });
  Alignment both = stage("disambiguate", [&] { return disambiguate(trimmed, cfg.disambiguate); });

  write("alignment.rdf", serialize_alignment_xml(untrimmed));
  write("disambiguated.rdf", serialize_alignment_xml(disambiguated));
  write("trimmed.rdf", serialize_alignment_xml(trimmed));
  write("trimmed_disambiguated.rdf", serialize_alignment_xml(both));

  result.rows = stage("evaluate", [&] {
    return std::vector<ReportRow>{
        {"untrimmed", std::nullopt, evaluate(untrimmed, reference, cfg.alpha_f)},
        {"disambiguated", std::nullopt, evaluate(disambiguated, reference, cfg.alpha_f)},
        {"trimmed", alpha, evaluate(trimmed, reference, cfg.alpha_f)},
        {"trimmed+disambiguated", alpha, evaluate(both, reference, cfg.alpha_f)},
    };
  });
  std::string title = "Alignment " + untrimmed.onto1() + " -> " + untrimmed.onto2() + " (" +
                      std::string(to_string(cfg.disambiguate.strategy)) + ", F-measure alpha " +
                      round_half_up(cfg.alpha_f, 2) + ")";
  write("report.txt", render_report_text(result.rows, title));
  write("report.json", render_json(result.rows));
  write("report.csv", render_csv(result.rows));

  if (cfg.merge) {
    auto merged = stage("merge", [&] { return alignkit::merge(o1, o2, both); });
    write("merged.ttl", serialize_turtle(merged.merged));
    write("merged.skipped.json", skipped_cells_json(merged.skipped));
  }
  return result;
}

}  // namespace alignkit
