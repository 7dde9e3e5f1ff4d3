// One PASS/FAIL line per acceptance criterion. `--only <id>` runs a single
// criterion; the exit status is nonzero when any criterion that ran failed.

#include <CLI11.hpp>
#include <httplib.h>

#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <queue>
#include <sstream>
#include <thread>

#include "alignkit/evaluation.hpp"
#include "alignkit/filters.hpp"
#include "alignkit/io.hpp"
#include "alignkit/pipeline.hpp"
#include "alignkit/review_server.hpp"
#include "alignkit/review_session.hpp"
#include "alignkit/table.hpp"
#include "alignkit/turtle.hpp"
#include "support.hpp"

using namespace alignkit;
using namespace alignkit::testing;

namespace {

/// Collects failed sub-checks of one criterion.
class Check {
 public:
  void expect(bool ok, const std::string& what) {
    ++total_;
    if (!ok && failures_.size() < 5) failures_.push_back(what);
    failed_ += !ok;
  }
  void note(const std::string& s) { notes_.push_back(s); }
  bool ok() const { return failed_ == 0; }

  std::string summary() const {
    std::ostringstream out;
    out << total_ - failed_ << "/" << total_ << " checks";
    for (const auto& n : notes_) out << "; " << n;
    for (const auto& f : failures_) out << "; failed: " << f;
    if (failed_ > failures_.size()) out << "; ...";
    return out.str();
  }

 private:
  std::size_t total_ = 0;
  std::size_t failed_ = 0;
  std::vector<std::string> failures_;
  std::vector<std::string> notes_;
};

std::string fmt(double v) {
  std::ostringstream s;
  s << v;
  return s.str();
}

struct TableRow {
  std::string label;
  std::size_t r, a, amb;
  double precision, recall, f, overall, ambiguity_pct;
};

std::vector<TableRow> load_table_rows() {
  auto records = read_csv_records(read_file(data("table1.csv")), ',');
  std::vector<TableRow> rows;
  for (std::size_t i = 1; i < records.size(); ++i) {
    const auto& f = records[i];
    if (f.size() < 12) continue;
    rows.push_back({"table " + f[0] + " exp " + f[1] + " " + f[2] + (f[3].empty() ? "" : " @" + f[3]),
                    std::stoul(f[4]), std::stoul(f[5]), std::stoul(f[6]), std::stod(f[7]), std::stod(f[8]),
                    std::stod(f[9]), std::stod(f[10]), std::stod(f[11])});
  }
  return rows;
}

EvaluationReport recompute(const TableRow& row) {
  auto tp = static_cast<std::size_t>(std::llround(row.precision * static_cast<double>(row.a)));
  return report_from_counts({tp, row.a - tp, row.r - tp, {}}, row.amb);
}

bool table_consistency(Check& c) {
  auto start = std::chrono::steady_clock::now();
  auto rows = load_table_rows();
  c.expect(rows.size() == 80, "80 rows in table1.csv, found " + std::to_string(rows.size()));
  for (const auto& row : rows) {
    auto rep = recompute(row);
    double overall_tol = row.precision < 0.05 ? 0.06 : 0.01;
    c.expect(std::abs(*rep.recall - row.recall) <= 0.01, row.label + " recall " + fmt(*rep.recall));
    c.expect(std::abs(*rep.f1 - row.f) <= 0.01, row.label + " F1 " + fmt(*rep.f1));
    c.expect(std::abs(*rep.overall - row.overall) <= overall_tol, row.label + " overall " + fmt(*rep.overall));
    c.expect(std::abs(rep.ambiguity.percent / 100 - row.ambiguity_pct / 100) <= 0.01,
             row.label + " ambiguity " + fmt(rep.ambiguity.percent));
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  c.expect(secs < 1.0, "runtime " + fmt(secs) + " s");
  c.note(std::to_string(rows.size()) + " rows in " + fmt(std::round(secs * 1e4) / 10) + " ms");
  return c.ok();
}

bool spot_values(Check& c) {
  struct Spot {
    std::string exp, tool;
    double p, r, f1, overall, amb;
  };
  // Published values for Exp 1 LogMap, Exp 8 LogMap and Exp 5 (both tools).
  const std::vector<Spot> spots = {{"1", "LogMap", 0.995, 0.790, 0.881, 0.786, 0.94},
                                   {"8", "LogMap", 1.0, 0.974, 0.987, 0.974, 0.0},
                                   {"5", "LogMap", 1.0, 0.021, 0.042, 0.021, 0.0},
                                   {"5", "AML", 1.0, 0.021, 0.042, 0.021, 0.0}};
  auto rows = load_table_rows();
  for (const auto& s : spots) {
    auto it = std::find_if(rows.begin(), rows.end(), [&](const TableRow& r) {
      return r.label == "table 1 exp " + s.exp + " " + s.tool;
    });
    c.expect(it != rows.end(), "row for exp " + s.exp + " " + s.tool);
    if (it == rows.end()) continue;
    auto rep = recompute(*it);
    std::string who = "exp " + s.exp + " " + s.tool;
    c.expect(std::abs(*rep.precision - s.p) <= 0.001, who + " P " + fmt(*rep.precision));
    c.expect(std::abs(*rep.recall - s.r) <= 0.001, who + " R " + fmt(*rep.recall));
    c.expect(std::abs(*rep.f1 - s.f1) <= 0.001, who + " F1 " + fmt(*rep.f1));
    c.expect(std::abs(*rep.overall - s.overall) <= 0.001, who + " Overall " + fmt(*rep.overall));
    c.expect(std::abs(rep.ambiguity.percent - s.amb) <= 0.01, who + " Amb " + fmt(rep.ambiguity.percent));
  }
  return c.ok();
}

bool metric_laws(Check& c) {
  std::mt19937 rng(1234);
  const int cases = 5000;
  for (int i = 0; i < cases; ++i) {
    std::size_t a = 1 + rng() % 4000, r = 1 + rng() % 4000;
    std::size_t tp = rng() % (std::min(a, r) + 1);
    auto rep = report_from_counts({tp, a - tp, r - tp, {}}, rng() % (a + 1), (rng() % 1001) / 1000.0);
    double p = *rep.precision, rc = *rep.recall;
    std::string who = "tp=" + std::to_string(tp) + " A=" + std::to_string(a) + " R=" + std::to_string(r);
    c.expect(f_measure(p, rc, 1.0) == p, who + " F(alpha=1) != P");
    c.expect(f_measure(p, rc, 0.0) == rc, who + " F(alpha=0) != R");
    double f1 = *rep.f1, ov = *rep.overall;
    bool perfect = p == 1.0 && rc == 1.0;
    c.expect(perfect ? ov == f1 : ov < f1, who + " Overall vs F1");
    if (rc > 0) c.expect((ov < 0) == (p < 0.5), who + " Overall sign");
    c.expect(*rep.noise + p == 1.0, who + " noise");
    c.expect(*rep.silence + rc == 1.0, who + " silence");
    auto expected = r > a ? MatchingBalance::Under : r < a ? MatchingBalance::Over : MatchingBalance::Balanced;
    c.expect(rep.delta.balance == expected && rep.delta.value == (long long)r - (long long)a, who + " delta");
  }
  c.note(std::to_string(cases) + " random cases");
  return c.ok();
}

bool is_sub(const Alignment& sub, const Alignment& super) {
  auto k = keys(super);
  for (const auto& c : sub.cells()) {
    if (!k.count(c.key())) return false;
  }
  return true;
}

bool filter_laws(Check& c) {
  std::mt19937 rng(99);
  std::size_t mono = 0, amb = 0, stable = 0, stable_total = 0, mw = 0, idem = 0;
  for (int i = 0; i < 1000; ++i) {
    int rows = 1 + rng() % 8, cols = 1 + rng() % 8;
    auto a = random_alignment(rng, rows, cols, 0.2 + (rng() % 7) / 10.0, true);
    auto ref = random_alignment(rng, rows, cols, 0.3, false);
    double lo = (rng() % 1001) / 1000.0, hi = (rng() % 1001) / 1000.0;
    if (lo > hi) std::swap(lo, hi);
    auto t_lo = trim(a, lo), t_hi = trim(a, hi);
    bool m = is_sub(t_hi, t_lo) && is_sub(t_lo, a);
    auto rec = recall(confusion_counts(a, ref)), rec_t = recall(confusion_counts(t_lo, ref));
    if (rec) m = m && *rec_t <= *rec;
    c.expect(m, "trim monotone / recall, case " + std::to_string(i));
    mono += m;

    auto tp = disambiguate_two_pass(a);
    bool z = ambiguity_degree(tp).ambiguous == 0;
    c.expect(z, "two-pass ambiguity 0, case " + std::to_string(i));
    amb += z;

    ++stable_total;
    bool s = keys(tp) == gale_shapley(a);
    stable += s;

    auto best = disambiguate_max_weight(a);
    if (rows <= 7 && cols <= 7) {
      bool w = std::abs(total_confidence(best) - exhaustive_max_weight(a)) < 1e-9 && ambiguous_cells(best).empty();
      c.expect(w, "max-weight optimum, case " + std::to_string(i));
      mw += w;
    }

    auto rw = rewrite_ambiguous_to_subsumption(a);
    bool id = trim(t_lo, lo) == t_lo && disambiguate_two_pass(tp) == tp && disambiguate_max_weight(best) == best &&
              rewrite_ambiguous_to_subsumption(rw) == rw;
    c.expect(id, "idempotence, case " + std::to_string(i));
    idem += id;
  }
  c.expect(stable == stable_total, "two-pass equals stable matching on " + std::to_string(stable) + "/" +
                                       std::to_string(stable_total) + " tie-free instances");
  c.note("trim " + std::to_string(mono) + "/1000, two-pass unambiguous " + std::to_string(amb) +
         "/1000, max-weight optimal " + std::to_string(mw) + ", idempotent " + std::to_string(idem) + "/1000");
  return c.ok();
}

bool worked_examples(Check& c) {
  auto congo = disambiguate_two_pass(alignment_of({cell("Repub._of_the_Congo", "Democratic_Republic_of_the_Congo", 0.76),
                                                   cell("Repub._of_the_Congo", "Congo", 0.8)}));
  c.expect(congo == alignment_of({cell("Repub._of_the_Congo", "Congo", 0.8)}), "Congo keeps only the 0.8 cell");
  auto tie = alignment_of({cell("Republic_of_Congo", "Congo_(Brazzaville)", 0.8),
                           cell("Republic_of_Congo", "Congo_(Kinshasa)", 0.8)});
  c.expect(disambiguate_two_pass(tie) == tie, "0.8/0.8 tie keeps both");
  auto sudan = rewrite_ambiguous_to_subsumption(
      alignment_of({cell("Sudan_(former)", "Sudan", 1.0), cell("Sudan_(former)", "South_Sudan", 1.0)}));
  c.expect(sudan == alignment_of({cell("Sudan_(former)", "Sudan", 1.0, Relation::Subsumes),
                                  cell("Sudan_(former)", "South_Sudan", 1.0, Relation::Subsumes)}),
           "Sudan_(former) rewrite yields two Subsumes cells");
  return c.ok();
}

bool format_round_trips(Check& c) {
  std::mt19937 rng(2025);
  const int n = 100;
  for (int i = 0; i < n; ++i) {
    auto a = random_alignment(rng, 1 + rng() % 9, 1 + rng() % 9, 0.4, false, true);
    c.expect(parse_alignment_xml(serialize_alignment_xml(a)) == a, "XML instance " + std::to_string(i));
    c.expect(parse_alignment_json(serialize_alignment_json(a)) == a, "JSON instance " + std::to_string(i));
    auto o = random_ontology(rng);
    c.expect(parse_turtle(serialize_turtle(o)) == o, "Turtle instance " + std::to_string(i));
  }
  c.note(std::to_string(n) + " instances per format");
  return c.ok();
}

bool converter_laws(Check& c) {
  std::mt19937 rng(31);
  const Iri base("http://example.org/gen");
  for (int i = 0; i < 200; ++i) {
    auto vt = random_table(rng, rng() % 3, 1 + rng() % 4, rng() % 30);
    auto o = convert(vt, base);
    c.expect(typed_by(o, Iri(base.str() + "#Key")) == vt.rows.size(), "individuals = rows, table " + std::to_string(i));
    c.expect(data_assertions(o) == non_empty_cells(vt, ColumnRole::Attribute),
             "datatype assertions = non-empty attribute cells, table " + std::to_string(i));
  }
  CsvConfig cfg;
  cfg.id_columns = {std::string("a"), std::string("b")};
  bool rejected = false;
  try {
    parse_csv("a,b\n1,2\n", cfg);
  } catch (const CsvError& e) {
    rejected = e.code() == CsvError::Code::ComposedKey;
  }
  c.expect(rejected, "composed primary key rejected");
  c.note("200 generated tables");
  return c.ok();
}

bool sameas_connected(const Ontology& o, const Iri& a, const Iri& b) {
  std::map<Iri, std::vector<Iri>> adj;
  for (const auto& t : o.triples()) {
    if (t.predicate != vocab::owl_same_as()) continue;
    adj[t.subject].push_back(as_iri(t.object));
    adj[as_iri(t.object)].push_back(t.subject);
  }
  std::set<Iri> seen{a};
  std::queue<Iri> todo;
  todo.push(a);
  while (!todo.empty()) {
    auto x = todo.front();
    todo.pop();
    if (x == b) return true;
    for (const auto& y : adj[x]) {
      if (seen.insert(y).second) todo.push(y);
    }
  }
  return false;
}

std::filesystem::path scratch(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("alignkit_acceptance_" + name + "_" + std::to_string(::getpid()));
  std::filesystem::remove_all(p);
  return p;
}

bool end_to_end(Check& c) {
  auto cfg = load_pipeline_config(data("countries/demo.json"));
  cfg.output_dir = scratch("pipeline");
  auto start = std::chrono::steady_clock::now();
  auto result = run_pipeline(cfg);
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  c.expect(secs < 5.0, "runtime " + fmt(secs) + " s");
  c.expect(result.rows.size() == 4, "four report rows");
  if (result.rows.size() == 4) {
    const auto& untrimmed = result.rows[0].report;
    const auto& both = result.rows[3].report;
    c.expect(both.precision && untrimmed.precision && *both.precision >= *untrimmed.precision,
             "trimmed+disambiguated precision >= untrimmed");
    c.expect(both.ambiguity.defined && both.ambiguity.percent == 0.0, "trimmed+disambiguated ambiguity 0%");
    c.note("P " + display_metric(untrimmed.precision) + " -> " + display_metric(both.precision) + ", ambiguity " +
           round_half_up(untrimmed.ambiguity.percent, 2) + "% -> " + round_half_up(both.ambiguity.percent, 2) + "%");
  }
  auto text = read_file(cfg.output_dir / "report.txt");
  for (const char* col : {"Variant", "Threshold", "R", "A", "Amb", "Precision", "Recall", "F-measure", "Overall",
                          "Ambiguity", "Delta"}) {
    c.expect(text.find(col) != std::string::npos, std::string("report column ") + col);
  }
  for (const char* f : {"report.json", "report.csv", "merged.ttl", "trimmed_disambiguated.rdf"}) {
    c.expect(std::filesystem::exists(cfg.output_dir / f), std::string("output ") + f);
  }
  auto merged = load_ontology(cfg.output_dir / "merged.ttl");
  auto final_cells = load_alignment(cfg.output_dir / "trimmed_disambiguated.rdf");
  for (const auto& cell : final_cells.cells()) {
    if (cell.relation == Relation::Equivalence && merged.kind_of(cell.entity1) == EntityKind::Individual) {
      c.expect(sameas_connected(merged, cell.entity1, cell.entity2), "sameAs " + cell.entity1.str());
    }
  }
  c.note("pipeline " + fmt(std::round(secs * 1e4) / 10) + " ms");
  std::filesystem::remove_all(cfg.output_dir);
  return c.ok();
}

bool review_replay(Check& c) {
  auto dir = scratch("review");
  std::filesystem::create_directories(dir);
  auto run = [&](bool with_script) -> std::string {
    ReviewSession session(load_alignment(fixture("review/alignment.rdf")), load_ontology(fixture("review/o1.ttl")),
                          load_ontology(fixture("review/o2.ttl")), QueuePolicy{},
                          dir / (with_script ? "scripted.jsonl" : "empty.jsonl"));
    ServerOptions opts;
    opts.port = 0;
    opts.output = dir / "reviewed.rdf";
    ReviewServer server(session, opts);
    int port = server.bind();
    std::thread t([&] { server.serve(); });
    httplib::Client client("127.0.0.1", port);
    if (with_script) {
      std::ifstream in(fixture("review/decisions.jsonl"));
      for (std::string line; std::getline(in, line);) {
        auto r = client.Post("/api/decision", line, "application/json");
        c.expect(r && r->status == 200, "decision accepted: " + line.substr(0, 40));
      }
    }
    auto r = client.Post("/api/finalize", R"({"unreviewed_policy":"keep"})", "application/json");
    server.stop();
    t.join();
    return r && r->status == 200 ? r->body : std::string();
  };
  c.expect(run(true) == read_file(fixture("review/expected.rdf")), "scripted replay is byte-exact");
  c.expect(parse_alignment_xml(run(false)) == load_alignment(fixture("review/alignment.rdf")),
           "finalize without decisions is the identity");
  std::filesystem::remove_all(dir);
  return c.ok();
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<std::string, bool (*)(Check&)>> criteria = {
      {"table_consistency", table_consistency}, {"spot_values", spot_values},
      {"metric_laws", metric_laws},             {"filter_laws", filter_laws},
      {"worked_examples", worked_examples},             {"format_round_trips", format_round_trips},
      {"converter_laws", converter_laws},       {"end_to_end", end_to_end},
      {"review_replay", review_replay}};

  CLI::App app{"alignkit acceptance checks"};
  std::string only;
  bool list = false;
  app.add_option("--only", only, "Run a single criterion");
  app.add_flag("--list", list, "List criterion ids");
  CLI11_PARSE(app, argc, argv);

  if (list) {
    for (const auto& [id, fn] : criteria) std::cout << id << "\n";
    return 0;
  }
  bool ran = false, all_ok = true;
  for (const auto& [id, fn] : criteria) {
    if (!only.empty() && id != only) continue;
    ran = true;
    Check c;
    bool ok = false;
    try {
      ok = fn(c);
    } catch (const std::exception& e) {
      c.expect(false, std::string("exception: ") + e.what());
    }
    std::cout << (ok ? "PASS " : "FAIL ") << id << ": " << c.summary() << std::endl;
    all_ok = all_ok && ok;
  }
  if (!ran) {
    std::cerr << "unknown criterion " << only << "\n";
    return 2;
  }
  return all_ok ? 0 : 1;
}
