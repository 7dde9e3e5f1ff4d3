#include "alignkit/review_session.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <cerrno>
#include <chrono>
#include <cstring>
#include <ctime>
#include <fstream>
#include <sstream>

namespace alignkit {

using nlohmann::ordered_json;

std::string_view to_string(ReviewAction action) {
  switch (action) {
    case ReviewAction::Accept: return "accept";
    case ReviewAction::Reject: return "reject";
    case ReviewAction::AlterRelation: return "alter_relation";
    case ReviewAction::AlterConfidence: return "alter_confidence";
    case ReviewAction::AddCell: return "add_cell";
  }
  return "?";
}

std::optional<ReviewAction> review_action_from_string(std::string_view text) {
  for (auto a : {ReviewAction::Accept, ReviewAction::Reject, ReviewAction::AlterRelation,
                 ReviewAction::AlterConfidence, ReviewAction::AddCell}) {
    if (to_string(a) == text) return a;
  }
  return std::nullopt;
}

std::optional<UnreviewedPolicy> unreviewed_policy_from_string(std::string_view text) {
  if (text == "keep") return UnreviewedPolicy::Keep;
  if (text == "drop") return UnreviewedPolicy::Drop;
  return std::nullopt;
}

bool Decision::same_effect(const Decision& other) const {
  return cell_id == other.cell_id && action == other.action && new_relation == other.new_relation &&
         new_confidence == other.new_confidence && payload == other.payload && actor == other.actor;
}

namespace {

ReviewError invalid(const std::string& message) {
  return ReviewError(ReviewError::Code::InvalidDecision, message);
}

ordered_json correspondence_json(const Correspondence& c) {
  ordered_json o;
  o["entity1"] = c.entity1.str();
  o["entity2"] = c.entity2.str();
  o["relation"] = std::string(glyph(c.relation));
  o["confidence"] = c.confidence;
  return o;
}

Relation relation_field(const nlohmann::json& value) {
  if (!value.is_string()) throw invalid("relation must be a glyph string");
  auto r = relation_from_glyph(value.get<std::string>());
  if (!r) throw invalid("unknown relation glyph '" + value.get<std::string>() + "'");
  return *r;
}

double confidence_field(const nlohmann::json& value) {
  if (!value.is_number()) throw invalid("confidence must be a number");
  double v = value.get<double>();
  if (!(v >= 0.0 && v <= 1.0)) throw invalid("confidence must be in [0, 1]");
  return v;
}

Iri iri_field(const nlohmann::json& value, const char* name) {
  if (!value.is_string() || !Iri::is_valid(value.get<std::string>())) {
    throw invalid(std::string(name) + " must be an IRI");
  }
  return Iri(value.get<std::string>());
}

std::string utc_now() {
  auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

ordered_json entity_json(const Ontology& o, const Iri& e) {
  ordered_json out;
  out["iri"] = e.str();
  auto kind = o.kind_of(e);
  out["kind"] = kind ? ordered_json(std::string(to_string(*kind))) : ordered_json(nullptr);
  out["labels"] = o.labels_of(e);
  ordered_json neighbors;
  auto n = o.neighbors(e);
  auto list = [](const std::set<Iri>& s) {
    auto arr = ordered_json::array();
    for (const auto& i : s) arr.push_back(i.str());
    return arr;
  };
  neighbors["parents"] = list(n.parents);
  neighbors["children"] = list(n.children);
  neighbors["siblings"] = list(n.siblings);
  out["neighbors"] = neighbors;
  out["assertions"] = ordered_json::array();
  for (const auto& t : o.assertions_about(e, 10)) {
    ordered_json a;
    a["predicate"] = t.predicate.str();
    if (is_iri(t.object)) {
      a["object"] = as_iri(t.object).str();
    } else {
      const auto& lit = std::get<Literal>(t.object);
      a["object"] = lit.lexical();
      a["datatype"] = xsd_iri(lit.datatype());
    }
    out["assertions"].push_back(std::move(a));
  }
  return out;
}

}  // namespace

std::string decision_to_json(const Decision& d) {
  ordered_json o;
  o["cell_id"] = d.cell_id;
  o["action"] = std::string(to_string(d.action));
  if (d.new_relation) o["new_relation"] = std::string(glyph(*d.new_relation));
  if (d.new_confidence) o["new_confidence"] = *d.new_confidence;
  if (d.payload) o["payload"] = correspondence_json(*d.payload);
  o["timestamp"] = d.timestamp;
  o["actor"] = d.actor;
  return o.dump();
}

Decision decision_from_json(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw invalid(std::string("malformed decision: ") + e.what());
  }
  if (!doc.is_object()) throw invalid("decision must be a JSON object");
  Decision d;
  if (!doc.contains("action") || !doc["action"].is_string()) throw invalid("decision needs an action");
  auto action = review_action_from_string(doc["action"].get<std::string>());
  if (!action) throw invalid("unknown action '" + doc["action"].get<std::string>() + "'");
  d.action = *action;
  if (doc.contains("cell_id")) {
    if (!doc["cell_id"].is_string()) throw invalid("cell_id must be a string");
    d.cell_id = doc["cell_id"].get<std::string>();
  }
  if (doc.contains("new_relation")) d.new_relation = relation_field(doc["new_relation"]);
  if (doc.contains("new_confidence")) d.new_confidence = confidence_field(doc["new_confidence"]);
  if (doc.contains("payload")) {
    const auto& p = doc["payload"];
    if (!p.is_object()) throw invalid("payload must be an object");
    for (const char* f : {"entity1", "entity2", "relation", "confidence"}) {
      if (!p.contains(f)) throw invalid(std::string("payload needs ") + f);
    }
    d.payload = Correspondence{iri_field(p["entity1"], "payload.entity1"),
                               iri_field(p["entity2"], "payload.entity2"),
                               relation_field(p["relation"]), confidence_field(p["confidence"])};
  }
  for (const char* f : {"timestamp", "actor"}) {
    if (!doc.contains(f)) continue;
    if (!doc[f].is_string()) throw invalid(std::string(f) + " must be a string");
  }
  if (doc.contains("timestamp")) d.timestamp = doc["timestamp"].get<std::string>();
  if (doc.contains("actor")) d.actor = doc["actor"].get<std::string>();

  switch (d.action) {
    case ReviewAction::Accept:
    case ReviewAction::Reject:
      if (d.new_relation || d.new_confidence || d.payload) throw invalid("accept/reject take no extras");
      break;
    case ReviewAction::AlterRelation:
      if (!d.new_relation) throw invalid("alter_relation requires new_relation");
      if (d.new_confidence || d.payload) throw invalid("alter_relation takes only new_relation");
      break;
    case ReviewAction::AlterConfidence:
      if (!d.new_confidence) throw invalid("alter_confidence requires new_confidence");
      if (d.new_relation || d.payload) throw invalid("alter_confidence takes only new_confidence");
      break;
    case ReviewAction::AddCell:
      if (!d.payload) throw invalid("add_cell requires a payload");
      if (d.new_relation || d.new_confidence) throw invalid("add_cell takes only a payload");
      if (!d.cell_id.empty() && d.cell_id != d.payload->id()) {
        throw invalid("cell_id does not match the payload");
      }
      d.cell_id = d.payload->id();
      break;
  }
  if (d.cell_id.empty()) throw invalid("decision needs a cell_id");
  return d;
}

ReviewSession::ReviewSession(Alignment alignment, Ontology o1, Ontology o2, QueuePolicy policy,
                             std::optional<std::filesystem::path> log_path)
    : alignment_(std::move(alignment)),
      o1_(std::move(o1)),
      o2_(std::move(o2)),
      policy_(std::move(policy)),
      log_path_(std::move(log_path)) {
  try {
    alignment_.check_against(o1_, o2_);
  } catch (const AlignmentError& e) {
    throw ReviewError(ReviewError::Code::Unresolvable, e.what());
  }
  if (!log_path_ || !std::filesystem::exists(*log_path_)) return;

  std::ifstream in(*log_path_, std::ios::binary);
  if (!in) throw ReviewError(ReviewError::Code::CorruptLog, "cannot read " + log_path_->string());
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (line.empty()) continue;
    try {
      Decision d = decision_from_json(line);
      validate(d);
      apply(d);
    } catch (const ReviewError& e) {
      throw ReviewError(ReviewError::Code::CorruptLog,
                        log_path_->string() + ":" + std::to_string(number) + ": " + e.what());
    }
  }
}

std::optional<Correspondence> ReviewSession::cell(const CellId& id) const {
  if (const auto* c = alignment_.find(id)) return *c;
  auto it = added_.find(id);
  if (it != added_.end()) return it->second;
  return std::nullopt;
}

std::vector<Correspondence> ReviewSession::universe() const {
  std::vector<Correspondence> cells = alignment_.cells();
  for (const auto& [id, c] : added_) cells.push_back(c);
  return cells;
}

void ReviewSession::validate(Decision& d) const {
  if (d.action == ReviewAction::AddCell) {
    const auto& p = *d.payload;
    if (!o1_.contains(p.entity1)) throw invalid("<" + p.entity1.str() + "> is not in the first ontology");
    if (!o2_.contains(p.entity2)) throw invalid("<" + p.entity2.str() + "> is not in the second ontology");
    if (alignment_.contains(p.key())) throw invalid("the cell is already in the alignment");
    return;
  }
  if (!cell(d.cell_id)) throw ReviewError(ReviewError::Code::UnknownCell, "unknown cell " + d.cell_id);
}

void ReviewSession::apply(const Decision& d) {
  if (d.action == ReviewAction::AddCell) added_[d.cell_id] = *d.payload;
  history_.push_back(d);
  effective_[d.cell_id] = d;
}

void ReviewSession::append_to_log(const Decision& d) const {
  if (!log_path_) return;
  std::string line = decision_to_json(d) + "\n";
  int fd = ::open(log_path_->c_str(), O_WRONLY | O_APPEND | O_CREAT | O_CLOEXEC, 0644);
  if (fd < 0) {
    throw std::runtime_error("cannot open decision log " + log_path_->string() + ": " +
                             std::strerror(errno));
  }
  const char* data = line.data();
  std::size_t left = line.size();
  while (left > 0) {
    ssize_t n = ::write(fd, data, left);
    if (n < 0) {
      if (errno == EINTR) continue;
      int err = errno;
      ::close(fd);
      throw std::runtime_error("cannot write decision log: " + std::string(std::strerror(err)));
    }
    data += n;
    left -= static_cast<std::size_t>(n);
  }
  if (::fsync(fd) != 0) {
    int err = errno;
    ::close(fd);
    throw std::runtime_error("cannot sync decision log: " + std::string(std::strerror(err)));
  }
  ::close(fd);
}

bool ReviewSession::record(Decision d) {
  validate(d);
  auto it = effective_.find(d.cell_id);
  if (it != effective_.end() && it->second.same_effect(d)) return false;
  if (d.timestamp.empty()) d.timestamp = utc_now();
  append_to_log(d);
  apply(d);
  return true;
}

std::vector<QueueItem> ReviewSession::queue() const {
  auto cells = universe();
  std::sort(cells.begin(), cells.end(), [](const auto& a, const auto& b) { return a.key() < b.key(); });

  // Union-find over cells linked through a shared entity on the same side.
  std::vector<std::size_t> parent(cells.size());
  for (std::size_t i = 0; i < parent.size(); ++i) parent[i] = i;
  auto root = [&parent](std::size_t i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  std::map<Iri, std::size_t> first1;
  std::map<Iri, std::size_t> first2;
  std::map<Iri, std::size_t> count1;
  std::map<Iri, std::size_t> count2;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    ++count1[cells[i].entity1];
    ++count2[cells[i].entity2];
    for (auto [first, entity] : {std::pair{&first1, &cells[i].entity1}, std::pair{&first2, &cells[i].entity2}}) {
      auto [pos, inserted] = first->emplace(*entity, i);
      if (!inserted) {
        std::size_t a = root(pos->second);
        std::size_t b = root(i);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
      }
    }
  }

  bool want_amb = policy_.kinds.count(QueueKind::Ambiguous) > 0;
  bool want_low = policy_.kinds.count(QueueKind::LowConfidence) > 0;
  std::vector<QueueItem> items;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const auto& c = cells[i];
    CellId id = c.id();
    if (effective_.count(id)) continue;
    QueueItem item;
    item.id = id;
    item.cell = c;
    item.ambiguous = count1[c.entity1] >= 2 || count2[c.entity2] >= 2;
    item.low_confidence = c.confidence < policy_.threshold;
    if (!((want_amb && item.ambiguous) || (want_low && item.low_confidence))) continue;
    item.group = cells[root(i)].id();
    items.push_back(std::move(item));
  }
  std::map<CellId, std::size_t> group_rank;
  for (std::size_t i = 0; i < cells.size(); ++i) group_rank.emplace(cells[root(i)].id(), root(i));
  std::stable_sort(items.begin(), items.end(), [&](const QueueItem& a, const QueueItem& b) {
    return group_rank.at(a.group) < group_rank.at(b.group);
  });
  return items;
}

Alignment ReviewSession::finalize(UnreviewedPolicy policy) const {
  std::map<CellKey, Correspondence> out;
  auto put = [&out](const Correspondence& c) {
    auto [it, inserted] = out.emplace(c.key(), c);
    if (!inserted && c.confidence > it->second.confidence) it->second.confidence = c.confidence;
  };
  for (const auto& c : universe()) {
    auto it = effective_.find(c.id());
    if (it == effective_.end()) {
      if (policy == UnreviewedPolicy::Keep) put(c);
      continue;
    }
    const Decision& d = it->second;
    Correspondence result = c;
    switch (d.action) {
      case ReviewAction::Reject: continue;
      case ReviewAction::Accept: break;
      case ReviewAction::AlterRelation: result.relation = *d.new_relation; break;
      case ReviewAction::AlterConfidence: result.confidence = *d.new_confidence; break;
      case ReviewAction::AddCell: result = *d.payload; break;
    }
    put(result);
  }
  std::vector<Correspondence> cells;
  for (auto& [key, c] : out) cells.push_back(std::move(c));
  return Alignment(alignment_.onto1(), alignment_.onto2(), std::move(cells), alignment_.type());
}

ordered_json ReviewSession::cell_json(const Correspondence& c) const {
  ordered_json o;
  o["id"] = c.id();
  auto body = correspondence_json(c);
  for (auto& [k, v] : body.items()) o[k] = v;
  std::size_t shared1 = 0;
  std::size_t shared2 = 0;
  for (const auto& other : universe()) {
    shared1 += other.entity1 == c.entity1;
    shared2 += other.entity2 == c.entity2;
  }
  o["ambiguous"] = shared1 >= 2 || shared2 >= 2;
  auto it = effective_.find(c.id());
  o["decision"] = it == effective_.end() ? ordered_json(nullptr)
                                         : ordered_json(std::string(to_string(it->second.action)));
  return o;
}

ordered_json ReviewSession::context(const CellId& id) const {
  auto c = cell(id);
  if (!c) throw ReviewError(ReviewError::Code::UnknownCell, "unknown cell " + id);
  ordered_json out;
  out["cell"] = cell_json(*c);
  out["entity1"] = entity_json(o1_, c->entity1);
  out["entity2"] = entity_json(o2_, c->entity2);
  auto competing = ordered_json::array();
  auto cells = universe();
  std::sort(cells.begin(), cells.end(), [](const auto& a, const auto& b) { return a.key() < b.key(); });
  for (const auto& other : cells) {
    if (other.key() == c->key()) continue;
    if (other.entity1 == c->entity1 || other.entity2 == c->entity2) competing.push_back(cell_json(other));
  }
  out["competing"] = std::move(competing);
  return out;
}

ordered_json ReviewSession::stats() const {
  ordered_json out;
  out["onto1"] = alignment_.onto1();
  out["onto2"] = alignment_.onto2();
  out["cells"] = alignment_.size();
  out["added"] = added_.size();
  out["decisions"] = history_.size();
  out["decided"] = effective_.size();
  std::map<std::string, std::size_t> by_action;
  for (const auto& [id, d] : effective_) ++by_action[std::string(to_string(d.action))];
  out["by_action"] = by_action;
  out["queue"] = queue().size();
  ordered_json policy;
  policy["kinds"] = ordered_json::array();
  if (policy_.kinds.count(QueueKind::Ambiguous)) policy["kinds"].push_back("ambiguous");
  if (policy_.kinds.count(QueueKind::LowConfidence)) policy["kinds"].push_back("low_confidence");
  policy["threshold"] = policy_.threshold;
  out["policy"] = policy;
  return out;
}

}  // namespace alignkit
