#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "alignkit/alignment.hpp"
#include "alignkit/ontology.hpp"

namespace alignkit {

enum class ReviewAction { Accept, Reject, AlterRelation, AlterConfidence, AddCell };

/// "accept", "reject", "alter_relation", "alter_confidence", "add_cell".
std::string_view to_string(ReviewAction action);
std::optional<ReviewAction> review_action_from_string(std::string_view text);

class ReviewError : public std::runtime_error {
 public:
  enum class Code { UnknownCell, InvalidDecision, CorruptLog, Unresolvable };

  ReviewError(Code code, const std::string& message) : std::runtime_error(message), code_(code) {}

  Code code() const { return code_; }

 private:
  Code code_;
};

struct Decision {
  CellId cell_id;
  ReviewAction action = ReviewAction::Accept;
  std::optional<Relation> new_relation;
  std::optional<double> new_confidence;
  std::optional<Correspondence> payload;
  /// UTC, ISO 8601; filled in on recording when empty.
  std::string timestamp;
  std::string actor;

  /// Equality of everything except the timestamp.
  bool same_effect(const Decision& other) const;
};

/// Single-line JSON, the decision log format.
std::string decision_to_json(const Decision& d);
/// Throws ReviewError(InvalidDecision) on malformed or inconsistent input.
/// For add_cell the cell id may be omitted; it is derived from the payload.
Decision decision_from_json(std::string_view text);

enum class QueueKind { Ambiguous, LowConfidence };

struct QueuePolicy {
  std::set<QueueKind> kinds = {QueueKind::Ambiguous, QueueKind::LowConfidence};
  /// Cells strictly below this confidence are low-confidence.
  double threshold = 0.5;
};

enum class UnreviewedPolicy { Keep, Drop };

std::optional<UnreviewedPolicy> unreviewed_policy_from_string(std::string_view text);

struct QueueItem {
  CellId id;
  Correspondence cell;
  bool ambiguous = false;
  bool low_confidence = false;
  /// Id of the first cell (in identity order) of the connected set of cells
  /// linked by shared entities; competing cells share a group.
  CellId group;
};

/// Review state over one alignment: the original cells, cells added by the
/// reviewer, and an append-only decision log. The last decision recorded for
/// a cell is its effective decision. Not thread-safe.
class ReviewSession {
 public:
  /// Checks every cell against the ontologies and replays `log_path` when the
  /// file exists. Throws ReviewError(Unresolvable) or ReviewError(CorruptLog).
  ReviewSession(Alignment alignment, Ontology o1, Ontology o2, QueuePolicy policy = {},
                std::optional<std::filesystem::path> log_path = std::nullopt);

  const Alignment& alignment() const { return alignment_; }
  const QueuePolicy& policy() const { return policy_; }
  const std::vector<Decision>& history() const { return history_; }
  const std::map<CellId, Decision>& effective() const { return effective_; }

  /// Original cell or reviewer-added cell with this id.
  std::optional<Correspondence> cell(const CellId& id) const;

  /// Undecided cells that are ambiguous or below the threshold (per policy),
  /// ordered by group, then identity.
  std::vector<QueueItem> queue() const;

  /// Validates, appends to the durable log and applies `d`. Returns false and
  /// records nothing when `d` has the same effect as the current effective
  /// decision. Throws ReviewError(UnknownCell) or ReviewError(InvalidDecision).
  bool record(Decision d);

  /// Accepted, altered and added cells, plus undecided ones under Keep;
  /// sorted by identity. Cells that end up with the same identity keep the
  /// highest confidence.
  Alignment finalize(UnreviewedPolicy policy) const;

  /// Both entities (kind, labels, neighbors, sample assertions) and every
  /// other cell sharing entity1 or entity2. Throws ReviewError(UnknownCell).
  nlohmann::ordered_json context(const CellId& id) const;

  /// Counts and policy for display.
  nlohmann::ordered_json stats() const;

  /// Cell as JSON with its id, ambiguity flag and effective action.
  nlohmann::ordered_json cell_json(const Correspondence& c) const;

 private:
  void validate(Decision& d) const;
  void apply(const Decision& d);
  void append_to_log(const Decision& d) const;
  std::vector<Correspondence> universe() const;

  Alignment alignment_;
  Ontology o1_;
  Ontology o2_;
  QueuePolicy policy_;
  std::optional<std::filesystem::path> log_path_;
  std::vector<Decision> history_;
  std::map<CellId, Decision> effective_;
  std::map<CellId, Correspondence> added_;
};

}  // namespace alignkit
