#include <cstdlib>
#include <functional>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "alignkit/alignment.hpp"
#include "alignkit/evaluation.hpp"
#include "alignkit/filters.hpp"
#include "alignkit/io.hpp"
#include "alignkit/matcher.hpp"
#include "alignkit/merge.hpp"
#include "alignkit/pipeline.hpp"
#include "alignkit/report.hpp"
#include "alignkit/review_server.hpp"
#include "alignkit/review_session.hpp"
#include "alignkit/table.hpp"
#include "alignkit/turtle.hpp"

namespace {

using namespace alignkit;

enum ExitCode { kOk = 0, kUsage = 2, kIo = 3, kParse = 4, kStage = 5 };

constexpr const char* kConfigEnv = "ALIGNKIT_CONFIG";

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

void emit(const std::string& output, const std::string& content) {
  if (output.empty() || output == "-") {
    std::cout << content;
  } else {
    write_file(output, content);
  }
}

void emit_alignment(const std::string& output, const Alignment& a) {
  if (output.empty() || output == "-") {
    std::cout << serialize_alignment_xml(a);
  } else {
    save_alignment(output, a);
  }
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

DisambiguateOptions disambiguate_options(const std::string& strategy, bool greedy,
                                         const std::string& direction) {
  DisambiguateOptions o;
  auto s = disambiguation_strategy_from_string(strategy);
  if (!s) throw UsageError("--strategy must be two-pass, max-weight or subsumption-rewrite");
  o.strategy = *s;
  o.max_weight_mode = greedy ? MaxWeightMode::Greedy : MaxWeightMode::Exact;
  if (direction == "shared-super") {
    o.direction = SubsumptionDirection::SharedIsSuper;
  } else if (direction == "shared-sub") {
    o.direction = SubsumptionDirection::SharedIsSub;
  } else {
    throw UsageError("--direction must be shared-super or shared-sub");
  }
  return o;
}

std::string render_single(const EvaluationReport& rep, const std::string& format) {
  std::vector<ReportRow> rows = {{"alignment", std::nullopt, rep}};
  if (format == "json") return report_to_json(rep);
  if (format == "csv") return render_csv(rows);
  return render_table(rows);
}

std::string render_sweep(const SweepResult& sweep, const std::string& format) {
  if (format == "json") {
    nlohmann::ordered_json doc;
    doc["best_alpha"] = sweep.best_alpha ? nlohmann::ordered_json(*sweep.best_alpha) : nullptr;
    doc["best_f1"] = sweep.best_f1 ? nlohmann::ordered_json(*sweep.best_f1) : nullptr;
    doc["curve"] = nlohmann::ordered_json::array();
    for (const auto& p : sweep.curve) {
      nlohmann::ordered_json point;
      point["alpha"] = p.alpha;
      point["f1"] = p.f1 ? nlohmann::ordered_json(*p.f1) : nullptr;
      doc["curve"].push_back(std::move(point));
    }
    return doc.dump(2) + "\n";
  }
  std::ostringstream out;
  const char* sep = format == "csv" ? "," : "  ";
  out << "alpha" << sep << "f1\n";
  for (const auto& p : sweep.curve) {
    out << round_half_up(p.alpha, 2) << sep << display_metric(p.f1) << "\n";
  }
  if (format != "csv") {
    out << "best alpha "
        << (sweep.best_alpha ? round_half_up(*sweep.best_alpha, 2) : std::string("undefined"))
        << " F1 " << display_metric(sweep.best_f1) << "\n";
  }
  return out.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"alignkit: table-to-ontology conversion, matching, alignment filtering, "
               "evaluation, merging and human review"};
  app.footer(
      "Exit codes: 0 success, 2 usage error (bad flags or values), 3 file I/O error, "
      "4 parse error (CSV, Turtle, alignment, JSON config), 5 stage error (matching, filtering, "
      "merging, review).\n"
      "The pipeline command reads its config from --config or from $ALIGNKIT_CONFIG.");
  app.require_subcommand(1);
  std::function<void()> action;

  // convert
  auto* convert_cmd = app.add_subcommand("convert", "Convert a CSV table into a Turtle ontology");
  std::string c_input, c_base, c_output, c_delim = ",";
  std::vector<std::string> c_ids, c_assoc;
  convert_cmd->add_option("--input,-i", c_input, "CSV file")->required();
  convert_cmd->add_option("--id", c_ids, "Primary key column (exactly one)")->required();
  convert_cmd->add_option("--association", c_assoc, "Association column (repeatable)");
  convert_cmd->add_option("--base", c_base, "Base IRI of the minted entities")->required();
  convert_cmd->add_option("--delimiter", c_delim, "Field delimiter");
  convert_cmd->add_option("--output,-o", c_output, "Turtle output (stdout when omitted)");
  convert_cmd->callback([&] {
    action = [&] {
      if (c_delim.size() != 1) throw UsageError("--delimiter must be a single character");
      if (!Iri::is_valid(c_base)) throw UsageError("--base is not an IRI");
      CsvConfig cfg;
      for (const auto& id : c_ids) cfg.id_columns.emplace_back(id);
      for (const auto& a : c_assoc) cfg.association_columns.emplace_back(a);
      cfg.delimiter = c_delim[0];
      cfg.table_name = std::filesystem::path(c_input).stem().string();
      auto table = parse_csv(read_file(c_input), cfg);
      emit(c_output, serialize_turtle(convert(table, Iri(c_base))));
    };
  });

  // match
  auto* match_cmd = app.add_subcommand("match", "Match two ontologies with the baseline matchers");
  std::string m_o1, m_o2, m_config, m_matchers, m_strategy, m_weights, m_output;
  double m_floor = -1;
  bool m_stopwords = false, m_numeric = false;
  match_cmd->add_option("--o1", m_o1, "First ontology (Turtle)")->required();
  match_cmd->add_option("--o2", m_o2, "Second ontology (Turtle)")->required();
  match_cmd->add_option("--config", m_config, "Matcher config (JSON)");
  match_cmd->add_option("--matchers", m_matchers, "Comma list of ExactName, EditSimilarity, TokenJaccard");
  match_cmd->add_option("--strategy", m_strategy, "Min, Max, Average or WeightedSum");
  match_cmd->add_option("--weights", m_weights, "WeightedSum weights, e.g. ExactName=0.5,TokenJaccard=0.5");
  match_cmd->add_option("--floor", m_floor, "Candidate floor in [0, 1] (default 0.4)");
  match_cmd->add_flag("--stopwords", m_stopwords, "Remove the stopwords of, the, and, or");
  match_cmd->add_flag("--ignore-numeric-ids", m_numeric, "Skip entities named by id codes");
  match_cmd->add_option("--output,-o", m_output, "Alignment output (.json for JSON; stdout when omitted)");
  match_cmd->callback([&] {
    action = [&] {
      MatcherConfig cfg;
      if (!m_config.empty()) cfg = matcher_config_from_json(read_file(m_config));
      if (!m_matchers.empty()) {
        cfg.matchers.clear();
        for (const auto& name : split_list(m_matchers)) {
          auto k = matcher_kind_from_string(name);
          if (!k) throw UsageError("unknown matcher '" + name + "'");
          cfg.matchers.push_back(*k);
        }
      }
      if (!m_strategy.empty()) {
        auto s = combine_strategy_from_string(m_strategy);
        if (!s) throw UsageError("unknown strategy '" + m_strategy + "'");
        cfg.strategy = *s;
      }
      if (!m_weights.empty()) {
        cfg.weights.clear();
        for (const auto& item : split_list(m_weights)) {
          auto eq = item.find('=');
          auto k = matcher_kind_from_string(item.substr(0, eq));
          if (eq == std::string::npos || !k) throw UsageError("bad weight '" + item + "'");
          try {
            cfg.weights[*k] = std::stod(item.substr(eq + 1));
          } catch (const std::exception&) {
            throw UsageError("bad weight '" + item + "'");
          }
        }
      }
      if (m_floor >= 0) cfg.candidate_floor = m_floor;
      if (m_stopwords) cfg.remove_stopwords = true;
      if (m_numeric) cfg.ignore_numeric_ids = true;
      try {
        cfg.validate();
      } catch (const MatcherConfigError& e) {
        throw UsageError(e.what());
      }
      emit_alignment(m_output, match(load_ontology(m_o1), load_ontology(m_o2), cfg));
    };
  });

  // trim
  auto* trim_cmd = app.add_subcommand("trim", "Remove cells below a confidence threshold");
  std::string t_input, t_output;
  double t_alpha = 0;
  trim_cmd->add_option("--input,-i", t_input, "Alignment")->required();
  trim_cmd->add_option("--alpha", t_alpha, "Threshold in [0, 1]")->required()->check(CLI::Range(0.0, 1.0));
  trim_cmd->add_option("--output,-o", t_output, "Alignment output");
  trim_cmd->callback([&] {
    action = [&] { emit_alignment(t_output, trim(load_alignment(t_input), t_alpha)); };
  });

  // disambiguate
  auto* dis_cmd = app.add_subcommand("disambiguate", "Reduce ambiguous cells");
  std::string d_input, d_output, d_strategy = "two-pass", d_direction = "shared-super";
  bool d_greedy = false;
  dis_cmd->add_option("--input,-i", d_input, "Alignment")->required();
  dis_cmd->add_option("--strategy", d_strategy, "two-pass, max-weight or subsumption-rewrite");
  dis_cmd->add_flag("--greedy", d_greedy, "Greedy instead of optimal max-weight selection");
  dis_cmd->add_option("--direction", d_direction, "Subsumption rewrite: shared-super or shared-sub");
  dis_cmd->add_option("--output,-o", d_output, "Alignment output");
  dis_cmd->callback([&] {
    action = [&] {
      auto options = disambiguate_options(d_strategy, d_greedy, d_direction);
      emit_alignment(d_output, disambiguate(load_alignment(d_input), options));
    };
  });

  // evaluate
  auto* eval_cmd = app.add_subcommand("evaluate", "Score an alignment against a reference");
  std::string e_alignment, e_reference, e_format = "table", e_output;
  double e_alpha_f = 0.5;
  eval_cmd->add_option("--alignment,-a", e_alignment, "Alignment")->required();
  eval_cmd->add_option("--reference,-r", e_reference, "Reference alignment")->required();
  eval_cmd->add_option("--alpha-f", e_alpha_f, "F-measure alpha (0.5 gives F1)")->check(CLI::Range(0.0, 1.0));
  eval_cmd->add_option("--format", e_format, "table, json or csv")->check(CLI::IsMember({"table", "json", "csv"}));
  eval_cmd->add_option("--output,-o", e_output, "Report output");
  eval_cmd->callback([&] {
    action = [&] {
      auto rep = evaluate(load_alignment(e_alignment), load_alignment(e_reference), e_alpha_f);
      emit(e_output, render_single(rep, e_format));
    };
  });

  // sweep
  auto* sweep_cmd = app.add_subcommand("sweep", "F1 over a grid of trimming thresholds");
  std::string s_alignment, s_reference, s_grid = "0:1:0.01", s_format = "table", s_output;
  sweep_cmd->add_option("--alignment,-a", s_alignment, "Alignment")->required();
  sweep_cmd->add_option("--reference,-r", s_reference, "Reference alignment")->required();
  sweep_cmd->add_option("--grid", s_grid, "start:stop:step");
  sweep_cmd->add_option("--format", s_format, "table, json or csv")->check(CLI::IsMember({"table", "json", "csv"}));
  sweep_cmd->add_option("--output,-o", s_output, "Curve output");
  sweep_cmd->callback([&] {
    action = [&] {
      std::vector<double> grid;
      try {
        grid = parse_grid(s_grid);
      } catch (const std::invalid_argument& e) {
        throw UsageError(std::string("--grid: ") + e.what());
      }
      auto sweep = threshold_sweep(load_alignment(s_alignment), load_alignment(s_reference), grid);
      emit(s_output, render_sweep(sweep, s_format));
    };
  });

  // merge
  auto* merge_cmd = app.add_subcommand("merge", "Merge two ontologies through an alignment");
  std::string g_o1, g_o2, g_alignment, g_output, g_skipped;
  merge_cmd->add_option("--o1", g_o1, "First ontology (Turtle)")->required();
  merge_cmd->add_option("--o2", g_o2, "Second ontology (Turtle)")->required();
  merge_cmd->add_option("--alignment,-a", g_alignment, "Alignment")->required();
  merge_cmd->add_option("--output,-o", g_output, "Merged Turtle output");
  merge_cmd->add_option("--skipped", g_skipped, "JSON report of cells without a bridging axiom");
  merge_cmd->callback([&] {
    action = [&] {
      auto result = merge(load_ontology(g_o1), load_ontology(g_o2), load_alignment(g_alignment));
      emit(g_output, serialize_turtle(result.merged));
      if (!g_skipped.empty()) write_file(g_skipped, skipped_cells_json(result.skipped));
      for (const auto& s : result.skipped) {
        std::cerr << "warning: skipped <" << s.cell.entity1.str() << "> " << glyph(s.cell.relation)
                  << " <" << s.cell.entity2.str() << ">: " << s.reason << "\n";
      }
    };
  });

  // review
  auto* review_cmd = app.add_subcommand("review", "Replay or serve a human review session");
  std::string r_alignment, r_o1, r_o2, r_log, r_output = "reviewed.rdf", r_kinds = "ambiguous,low-confidence";
  std::string r_unreviewed = "keep", r_host = "127.0.0.1", r_assets;
  double r_threshold = 0.5;
  int r_port = 8080;
  bool r_serve = false;
  review_cmd->add_option("--alignment,-a", r_alignment, "Alignment under review")->required();
  review_cmd->add_option("--o1", r_o1, "First ontology (Turtle)")->required();
  review_cmd->add_option("--o2", r_o2, "Second ontology (Turtle)")->required();
  review_cmd->add_option("--log", r_log, "Decision log (JSON lines, created when missing)")->required();
  review_cmd->add_option("--threshold", r_threshold, "Low-confidence threshold")->check(CLI::Range(0.0, 1.0));
  review_cmd->add_option("--kinds", r_kinds, "Queue kinds: ambiguous, low-confidence");
  review_cmd->add_option("--output,-o", r_output, "Finalized alignment");
  review_cmd->add_option("--unreviewed", r_unreviewed, "keep or drop undecided cells")
      ->check(CLI::IsMember({"keep", "drop"}));
  review_cmd->add_flag("--serve", r_serve, "Start the HTTP review service");
  review_cmd->add_option("--host", r_host, "Bind address (default 127.0.0.1)");
  review_cmd->add_option("--port", r_port, "Port (0 picks a free one)")->check(CLI::Range(0, 65535));
  review_cmd->add_option("--assets", r_assets, "Directory of UI assets served at /");
  review_cmd->callback([&] {
    action = [&] {
      QueuePolicy policy;
      policy.threshold = r_threshold;
      policy.kinds.clear();
      for (const auto& k : split_list(r_kinds)) {
        if (k == "ambiguous") {
          policy.kinds.insert(QueueKind::Ambiguous);
        } else if (k == "low-confidence") {
          policy.kinds.insert(QueueKind::LowConfidence);
        } else {
          throw UsageError("unknown queue kind '" + k + "'");
        }
      }
      ReviewSession session(load_alignment(r_alignment), load_ontology(r_o1), load_ontology(r_o2),
                            policy, std::filesystem::path(r_log));
      if (!r_serve) {
        save_alignment(r_output, session.finalize(*unreviewed_policy_from_string(r_unreviewed)));
        return;
      }
      ServerOptions options;
      options.host = r_host;
      options.port = r_port;
      options.output = r_output;
      if (!r_assets.empty()) options.assets_dir = r_assets;
      if (!ReviewServer::is_loopback(r_host)) {
        std::cerr << "warning: binding " << r_host
                  << " exposes the unauthenticated review service beyond this machine\n";
      }
      ReviewServer server(session, options);
      int port = server.bind();
      std::cerr << "review service on http://" << r_host << ":" << port << "/\n";
      server.serve();
    };
  });

  // pipeline
  auto* pipe_cmd = app.add_subcommand("pipeline", "Run convert, match, trim, disambiguate, evaluate, merge");
  std::string p_config, p_strategy, p_output_dir;
  double p_alpha = -1, p_alpha_f = -1;
  pipe_cmd->add_option("--config", p_config, "Pipeline config (JSON); defaults to $ALIGNKIT_CONFIG");
  pipe_cmd->add_option("--alpha", p_alpha, "Override the trimming threshold")->check(CLI::Range(0.0, 1.0));
  pipe_cmd->add_option("--strategy", p_strategy, "Override the disambiguation strategy");
  pipe_cmd->add_option("--alpha-f", p_alpha_f, "Override the F-measure alpha")->check(CLI::Range(0.0, 1.0));
  pipe_cmd->add_option("--output-dir", p_output_dir, "Override the output directory");
  pipe_cmd->callback([&] {
    action = [&] {
      if (p_config.empty()) {
        if (const char* env = std::getenv(kConfigEnv)) p_config = env;
      }
      if (p_config.empty()) throw UsageError("--config is required (or set ALIGNKIT_CONFIG)");
      auto cfg = load_pipeline_config(p_config);
      if (p_alpha >= 0) cfg.trim.alpha = p_alpha;
      if (p_alpha_f >= 0) cfg.alpha_f = p_alpha_f;
      if (!p_output_dir.empty()) cfg.output_dir = p_output_dir;
      if (!p_strategy.empty()) {
        auto s = disambiguation_strategy_from_string(p_strategy);
        if (!s) throw UsageError("--strategy must be two-pass, max-weight or subsumption-rewrite");
        cfg.disambiguate.strategy = *s;
      }
      auto result = run_pipeline(cfg);
      std::cout << render_table(result.rows);
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    action();
    return kOk;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kIo;
  } catch (const PipelineError& e) {
    std::cerr << "error: " << e.what() << "\n";
    switch (e.failure()) {
      case PipelineError::Failure::Io: return kIo;
      case PipelineError::Failure::Parse: return kParse;
      case PipelineError::Failure::Stage: return kStage;
    }
    return kStage;
  } catch (const TurtleError& e) {
    std::cerr << "error: turtle line " << e.line() << ", column " << e.column() << ": " << e.what() << "\n";
    return kParse;
  } catch (const CsvError& e) {
    std::cerr << "error: csv: " << e.what() << "\n";
    return kParse;
  } catch (const AlignmentError& e) {
    std::cerr << "error: alignment: " << e.what() << "\n";
    return kParse;
  } catch (const MatcherConfigError& e) {
    std::cerr << "error: matcher config: " << e.what() << "\n";
    return kParse;
  } catch (const ReviewError& e) {
    std::cerr << "error: review: " << e.what() << "\n";
    return e.code() == ReviewError::Code::CorruptLog ? kParse : kStage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kStage;
  }
}
