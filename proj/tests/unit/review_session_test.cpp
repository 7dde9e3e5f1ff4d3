#include <gtest/gtest.h>

#include <fstream>

#include "alignkit/io.hpp"
#include "alignkit/review_session.hpp"
#include "support.hpp"

using namespace alignkit;
using namespace alignkit::testing;

namespace {

const std::string kO = "http://example.org/owid#";
const std::string kW = "http://example.org/wb#";
const CellId kCongo = "9110bf1019b983db";
const CellId kDrc = "b9534c296b3765c6";
const CellId kSudan = "10f2855246bd31fb";
const CellId kSouthSudan = "16a654490157cd4d";
const CellId kFrance = "b5d4b8f3911814ac";
const CellId kKosovo = "0fba3f9673236468";

ReviewSession session(std::optional<std::filesystem::path> log = std::nullopt, QueuePolicy policy = {}) {
  return ReviewSession(load_alignment(fixture("review/alignment.rdf")), load_ontology(fixture("review/o1.ttl")),
                       load_ontology(fixture("review/o2.ttl")), policy, std::move(log));
}

Decision decide(const CellId& id, ReviewAction action) {
  Decision d;
  d.cell_id = id;
  d.action = action;
  d.actor = "t";
  return d;
}

std::filesystem::path temp_log(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("alignkit_" + name + "_" + std::to_string(::getpid()) + ".jsonl");
  std::filesystem::remove(p);
  return p;
}

std::vector<std::string> lines_of(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::vector<std::string> out;
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

}  // namespace

TEST(ReviewFixture, IdsMatchHashing) {
  auto a = load_alignment(fixture("review/alignment.rdf"));
  EXPECT_TRUE(a.find(kCongo));
  EXPECT_EQ(a.find(kCongo)->entity2, Iri(kW + "Congo"));
  EXPECT_EQ(a.find(kSudan)->entity1, Iri(kO + "Sudan_%28former%29"));
}

TEST(Decisions, JsonRoundTrip) {
  for (const auto& line : lines_of(fixture("review/decisions.jsonl"))) {
    auto d = decision_from_json(line);
    auto again = decision_from_json(decision_to_json(d));
    EXPECT_TRUE(d.same_effect(again));
    EXPECT_EQ(d.timestamp, again.timestamp);
  }
}

TEST(Decisions, Validation) {
  auto code = [](std::string_view text) {
    try {
      decision_from_json(text);
    } catch (const ReviewError& e) {
      return e.code();
    }
    return ReviewError::Code::Unresolvable;
  };
  EXPECT_EQ(code("{"), ReviewError::Code::InvalidDecision);
  EXPECT_EQ(code(R"({"cell_id":"x","action":"approve"})"), ReviewError::Code::InvalidDecision);
  EXPECT_EQ(code(R"({"cell_id":"x","action":"alter_relation"})"), ReviewError::Code::InvalidDecision);
  EXPECT_EQ(code(R"({"cell_id":"x","action":"alter_relation","new_relation":"~"})"), ReviewError::Code::InvalidDecision);
  EXPECT_EQ(code(R"({"cell_id":"x","action":"alter_confidence","new_confidence":2})"), ReviewError::Code::InvalidDecision);
  EXPECT_EQ(code(R"({"cell_id":"x","action":"accept","new_confidence":0.5})"), ReviewError::Code::InvalidDecision);
  EXPECT_EQ(code(R"({"action":"accept"})"), ReviewError::Code::InvalidDecision);
  EXPECT_EQ(code(R"({"cell_id":"0000","action":"add_cell","payload":{"entity1":"http://a/x","entity2":"http://b/y","relation":"=","confidence":1}})"),
            ReviewError::Code::InvalidDecision);
}

TEST(ReviewSessionTest, QueueGroupsCompetingCells) {
  auto s = session();
  auto q = s.queue();
  std::vector<CellId> ids;
  for (const auto& item : q) ids.push_back(item.id);
  EXPECT_EQ(ids, (std::vector<CellId>{kKosovo, kCongo, kDrc, kSouthSudan, kSudan}));
  EXPECT_TRUE(q[0].low_confidence);
  EXPECT_FALSE(q[0].ambiguous);
  EXPECT_EQ(q[1].group, q[2].group);
  EXPECT_EQ(q[3].group, q[4].group);
  EXPECT_NE(q[1].group, q[3].group);
}

TEST(ReviewSessionTest, QueuePolicy) {
  QueuePolicy amb_only;
  amb_only.kinds = {QueueKind::Ambiguous};
  EXPECT_EQ(session(std::nullopt, amb_only).queue().size(), 4u);
  QueuePolicy low_only;
  low_only.kinds = {QueueKind::LowConfidence};
  low_only.threshold = 0.8;
  EXPECT_EQ(session(std::nullopt, low_only).queue().size(), 3u);
}

TEST(ReviewSessionTest, DecidedCellsLeaveQueue) {
  auto s = session();
  EXPECT_TRUE(s.record(decide(kCongo, ReviewAction::Accept)));
  EXPECT_EQ(s.queue().size(), 4u);
}

TEST(ReviewSessionTest, SupersessionAndNoOps) {
  auto s = session();
  EXPECT_TRUE(s.record(decide(kFrance, ReviewAction::Reject)));
  EXPECT_FALSE(s.record(decide(kFrance, ReviewAction::Reject)));
  EXPECT_TRUE(s.record(decide(kFrance, ReviewAction::Accept)));
  EXPECT_EQ(s.history().size(), 2u);
  EXPECT_EQ(s.effective().at(kFrance).action, ReviewAction::Accept);
  EXPECT_FALSE(s.history()[0].timestamp.empty());
}

TEST(ReviewSessionTest, UnknownCell) {
  auto s = session();
  try {
    s.record(decide("ffffffffffffffff", ReviewAction::Accept));
    FAIL();
  } catch (const ReviewError& e) {
    EXPECT_EQ(e.code(), ReviewError::Code::UnknownCell);
  }
  EXPECT_THROW(s.context("ffffffffffffffff"), ReviewError);
}

TEST(ReviewSessionTest, AddCellValidation) {
  auto s = session();
  Decision d;
  d.action = ReviewAction::AddCell;
  d.payload = Correspondence{Iri(kO + "Nowhere"), Iri(kW + "Country"), Relation::Equivalence, 1.0};
  d.cell_id = d.payload->id();
  EXPECT_THROW(s.record(d), ReviewError);
  d.payload = *s.cell(kFrance);
  d.cell_id = d.payload->id();
  EXPECT_THROW(s.record(d), ReviewError);
}

TEST(ReviewSessionTest, FinalizeWithoutDecisionsIsIdentity) {
  auto s = session();
  EXPECT_EQ(s.finalize(UnreviewedPolicy::Keep), load_alignment(fixture("review/alignment.rdf")));
  EXPECT_TRUE(s.finalize(UnreviewedPolicy::Drop).empty());
}

TEST(ReviewSessionTest, ReplayMatchesExpected) {
  auto log = temp_log("replay");
  {
    auto s = session(log);
    for (const auto& line : lines_of(fixture("review/decisions.jsonl"))) EXPECT_TRUE(s.record(decision_from_json(line)));
    EXPECT_EQ(serialize_alignment_xml(s.finalize(UnreviewedPolicy::Keep)), read_file(fixture("review/expected.rdf")));
    EXPECT_EQ(serialize_alignment_xml(s.finalize(UnreviewedPolicy::Drop)),
              read_file(fixture("review/expected_drop.rdf")));
    EXPECT_TRUE(s.queue().empty());
  }
  // The written log resumes to the same state.
  auto written = lines_of(log);
  auto script = lines_of(fixture("review/decisions.jsonl"));
  ASSERT_EQ(written.size(), script.size());
  for (std::size_t i = 0; i < script.size(); ++i) {
    auto w = decision_from_json(written[i]), d = decision_from_json(script[i]);
    EXPECT_TRUE(w.same_effect(d));
    EXPECT_EQ(w.timestamp, d.timestamp);
  }
  auto resumed = session(log);
  EXPECT_EQ(resumed.history().size(), 8u);
  EXPECT_EQ(serialize_alignment_xml(resumed.finalize(UnreviewedPolicy::Keep)), read_file(fixture("review/expected.rdf")));
  std::filesystem::remove(log);
}

TEST(ReviewSessionTest, CorruptLog) {
  auto log = temp_log("corrupt");
  {
    std::ofstream out(log);
    out << lines_of(fixture("review/decisions.jsonl"))[0] << "\n{not json\n";
  }
  try {
    session(log);
    FAIL();
  } catch (const ReviewError& e) {
    EXPECT_EQ(e.code(), ReviewError::Code::CorruptLog);
    EXPECT_NE(std::string(e.what()).find(":2:"), std::string::npos);
  }
  std::filesystem::remove(log);
}

TEST(ReviewSessionTest, Unresolvable) {
  auto a = alignment_of({cell("x", "y", 1.0)});
  try {
    ReviewSession s(a, load_ontology(fixture("review/o1.ttl")), load_ontology(fixture("review/o2.ttl")));
    FAIL();
  } catch (const ReviewError& e) {
    EXPECT_EQ(e.code(), ReviewError::Code::Unresolvable);
  }
}

TEST(ReviewSessionTest, ContextListsCompetingCells) {
  auto s = session();
  auto ctx = s.context(kCongo);
  ASSERT_EQ(ctx["competing"].size(), 1u);
  EXPECT_EQ(ctx["competing"][0]["id"], kDrc);
  EXPECT_EQ(ctx["competing"][0]["confidence"], 0.76);
  EXPECT_EQ(ctx["cell"]["confidence"], 0.8);
  EXPECT_EQ(ctx["entity1"]["kind"], "Individual");
  EXPECT_EQ(ctx["entity2"]["labels"][0], "Congo");
  EXPECT_TRUE(s.context(kFrance)["competing"].empty());
  auto cls = s.context(s.queue()[0].id);
  EXPECT_TRUE(cls["entity2"]["neighbors"]["parents"].empty());
}

TEST(ReviewSessionTest, Stats) {
  auto s = session();
  s.record(decide(kCongo, ReviewAction::Accept));
  auto st = s.stats();
  EXPECT_EQ(st["cells"], 7);
  EXPECT_EQ(st["decided"], 1);
  EXPECT_EQ(st["queue"], 4);
}
