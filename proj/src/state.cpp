#include "fw/state.hpp"

#include <algorithm>

#include "fw/agenda.hpp"
#include "fw/canonical.hpp"
#include "fw/error.hpp"

namespace fw {
namespace {

[[noreturn]] void corrupt(std::uint64_t seq, const std::string& why) {
  throw CorruptLogError(seq, "event " + std::to_string(seq) + ": " + why);
}

std::optional<std::string> opt_string(const json& p, const char* key) {
  auto it = p.find(key);
  if (it == p.end() || it->is_null()) return std::nullopt;
  return it->get<std::string>();
}

template <typename T>
std::optional<T> opt_value(const json& p, const char* key) {
  auto it = p.find(key);
  if (it == p.end() || it->is_null()) return std::nullopt;
  return it->get<T>();
}

template <typename T>
json opt_json(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

Step& step_by_id(WorkshopState& s, const std::string& id, std::uint64_t seq) {
  for (auto& st : s.steps) {
    if (st.id == id) return st;
  }
  corrupt(seq, "unknown step " + id);
}

EvaluationRound& round_by_index(WorkshopState& s, int index, std::uint64_t seq) {
  for (auto& r : s.rounds) {
    if (r.index == index) return r;
  }
  corrupt(seq, "unknown round " + std::to_string(index));
}

Statement& statement_or_corrupt(WorkshopState& s, const std::string& id, std::uint64_t seq) {
  Statement* st = s.statement(id);
  if (st == nullptr) corrupt(seq, "unknown statement " + id);
  return *st;
}

ConvergenceReport report_from_json(const json& j) {
  ConvergenceReport r;
  r.round = j.at("round").get<int>();
  r.kendall_w = j.at("kendall_w").get<double>();
  r.eliminated_fraction = j.at("eliminated_fraction").get<double>();
  r.decision = parse_gate_decision(j.at("decision").get<std::string>());
  r.rankers = j.at("rankers").get<int>();
  return r;
}

json report_to_json(const ConvergenceReport& r) {
  return {{"round", r.round},
          {"kendall_w", r.kendall_w},
          {"eliminated_fraction", r.eliminated_fraction},
          {"decision", to_string(r.decision)},
          {"rankers", r.rankers}};
}

void apply_inner(WorkshopState& s, const Event& e) {
  namespace k = event_kind;
  const json& p = e.payload;
  const std::uint64_t seq = e.seq;

  if (e.kind == k::kWorkshopCreated) {
    if (s.created) corrupt(seq, "workshop created twice");
    s.created = true;
    s.id = p.at("id").get<std::string>();
    s.title = p.at("title").get<std::string>();
    s.agenda = agenda_from_json(p.at("agenda"));
    s.issue_areas = p.at("issue_areas").get<std::vector<std::string>>();
    if (s.issue_areas.empty() || s.issue_areas.back() != kOthersArea) {
      corrupt(seq, "issue areas must end with Others");
    }
    s.phase = Phase::Preparation;
    s.phase_history = {Phase::Preparation};
    s.created_at = e.at;
    return;
  }
  if (!s.created) corrupt(seq, "first event must be " + std::string(k::kWorkshopCreated));

  if (e.kind == k::kParticipantRegistered) {
    Participant part;
    part.alias = p.at("alias").get<std::string>();
    part.role = parse_role(p.at("role").get<std::string>());
    part.group_label = opt_string(p, "group_label");
    part.token_digest = p.at("token_digest").get<std::string>();
    if (s.participant_by_alias(part.alias) != nullptr) corrupt(seq, "duplicate alias " + part.alias);
    if (part.role == Role::Facilitator && s.facilitator() != nullptr) {
      corrupt(seq, "second facilitator");
    }
    s.participants.push_back(std::move(part));
  } else if (e.kind == k::kPhaseAdvanced) {
    Phase from = parse_phase(p.at("from").get<std::string>());
    Phase to = parse_phase(p.at("to").get<std::string>());
    if (from != s.phase || to != next_phase(from) || from == Phase::Closed) {
      corrupt(seq, "illegal phase transition");
    }
    s.phase = to;
    s.phase_history.push_back(to);
    s.cursor = 0;
  } else if (e.kind == k::kStepOpened) {
    if (s.open_step() != nullptr) corrupt(seq, "a step is already open");
    Step st;
    st.id = p.at("step_id").get<std::string>();
    st.kind = parse_step_kind(p.at("kind").get<std::string>());
    st.phase = s.phase;
    st.agenda_pos = p.at("agenda_pos").get<int>();
    st.round_index = p.at("round").get<int>();
    st.cutoff_n = opt_value<int>(p, "cutoff_n");
    st.deadline = opt_value<TimestampMs>(p, "deadline");
    st.opened_at = e.at;
    st.state = StepState::Open;
    const auto& spec = s.phase_steps();
    if (st.agenda_pos < 0 || st.agenda_pos >= static_cast<int>(spec.steps.size()) ||
        spec.steps[static_cast<std::size_t>(st.agenda_pos)].kind != st.kind) {
      corrupt(seq, "step does not match the agenda");
    }
    if (auto it = p.find("new_round"); it != p.end() && !it->is_null()) {
      EvaluationRound r;
      r.index = it->at("index").get<int>();
      r.item_ids = it->at("item_ids").get<std::vector<std::string>>();
      if (r.index != s.round + 1) corrupt(seq, "rounds must be consecutive");
      s.round = r.index;
      s.rounds.push_back(std::move(r));
    }
    if (auto it = p.find("report"); it != p.end() && !it->is_null()) {
      ConvergenceReport rep = report_from_json(*it);
      round_by_index(s, rep.round, seq).convergence = rep;
    }
    s.cursor = st.agenda_pos;
    s.steps.push_back(std::move(st));
  } else if (e.kind == k::kStepClosed) {
    Step& st = step_by_id(s, p.at("step_id").get<std::string>(), seq);
    if (st.state != StepState::Open) corrupt(seq, "closing a step that is not open");
    st.state = StepState::Closed;
    st.closed_at = e.at;
    st.auto_closed = p.value("auto", false);
    s.cursor = st.agenda_pos + 1;
    if (auto it = p.find("aggregates"); it != p.end() && !it->is_null()) {
      EvaluationRound& r = round_by_index(s, st.round_index, seq);
      if (it->contains("mean_rating")) {
        r.mean_rating = (*it)["mean_rating"].get<std::map<std::string, double>>();
      }
      if (it->contains("borda")) r.borda = (*it)["borda"].get<std::map<std::string, double>>();
      r.low_discrimination = it->value("low_discrimination", r.low_discrimination);
    }
    for (const auto& js : p.value("snapshots", json::array())) {
      BehaviorSnapshot snap;
      snap.alias = js.at("alias").get<std::string>();
      snap.round = st.round_index;
      snap.step_kind = st.kind;
      snap.vector = js.at("vector").get<std::map<std::string, double>>();
      snap.taken_at = e.at;
      s.snapshots.push_back(std::move(snap));
    }
  } else if (e.kind == k::kIdeasSubmitted) {
    const std::string alias = p.at("alias").get<std::string>();
    for (const auto& js : p.at("statements")) {
      Statement st;
      st.id = js.at("id").get<std::string>();
      st.text = js.at("text").get<std::string>();
      st.area = opt_string(js, "area").value_or("");
      st.author_alias = alias;
      st.status = StatementStatus::Raw;
      st.created_at = e.at;
      if (s.statement(st.id) != nullptr) corrupt(seq, "duplicate statement id " + st.id);
      s.statements.push_back(std::move(st));
      ++s.raw_pool_size;
    }
  } else if (e.kind == k::kMergeApplied) {
    if (s.merge_applied) corrupt(seq, "merge applied twice");
    for (const auto& g : p.at("groups")) {
      Statement merged;
      merged.id = g.at("id").get<std::string>();
      merged.text = g.at("heading").get<std::string>();
      merged.area = g.at("area").get<std::string>();
      merged.author_alias = e.actor;
      merged.merged_from = g.at("members").get<std::vector<std::string>>();
      merged.status = StatementStatus::Active;
      merged.created_at = e.at;
      for (const auto& m : merged.merged_from) {
        Statement& member = statement_or_corrupt(s, m, seq);
        if (member.status != StatementStatus::Raw) corrupt(seq, "merging non-raw statement " + m);
        member.status = StatementStatus::Merged;
      }
      if (s.statement(merged.id) != nullptr) corrupt(seq, "duplicate statement id " + merged.id);
      s.statements.push_back(std::move(merged));
    }
    for (const auto& js : p.at("singletons")) {
      Statement& st = statement_or_corrupt(s, js.at("id").get<std::string>(), seq);
      if (st.status != StatementStatus::Raw) corrupt(seq, "activating non-raw statement " + st.id);
      st.status = StatementStatus::Active;
      st.area = js.at("area").get<std::string>();
    }
    s.merge_applied = true;
    s.reduction_rate = opt_value<double>(p, "reduction_rate");
  } else if (e.kind == k::kRatingsSubmitted) {
    EvaluationRound& r = round_by_index(s, p.at("round").get<int>(), seq);
    const auto alias = p.at("alias").get<std::string>();
    r.ratings[alias] = p.at("ratings").get<std::map<std::string, int>>();
    if (auto tag = opt_string(p, "criterion")) {
      r.criterion_tags[alias] = *tag;
    } else {
      r.criterion_tags.erase(alias);
    }
    ++r.rating_submissions;
  } else if (e.kind == k::kRankingSubmitted) {
    EvaluationRound& r = round_by_index(s, p.at("round").get<int>(), seq);
    r.rankings[p.at("alias").get<std::string>()] = p.at("items").get<std::vector<std::string>>();
  } else if (e.kind == k::kCutoffConfigured) {
    step_by_id(s, p.at("step_id").get<std::string>(), seq).cutoff_n = p.at("n").get<int>();
  } else if (e.kind == k::kListUpdated) {
    EvaluationRound& r = round_by_index(s, p.at("round").get<int>(), seq);
    const auto reason = p.at("reason").get<std::string>();
    auto eliminated = p.at("eliminated").get<std::vector<std::string>>();
    for (const auto& id : eliminated) {
      Statement& st = statement_or_corrupt(s, id, seq);
      if (st.status != StatementStatus::Active) corrupt(seq, "eliminating inactive " + id);
      st.status = StatementStatus::Eliminated;
    }
    auto& target = reason == "zero_support" ? r.zero_support_eliminated : r.cutoff_eliminated;
    target.insert(target.end(), eliminated.begin(), eliminated.end());
  } else if (e.kind == k::kChatMessage) {
    ChatMessage m;
    m.seq = p.at("seq").get<std::uint64_t>();
    m.alias = p.at("alias").get<std::string>();
    m.text = p.at("text").get<std::string>();
    m.at = e.at;
    const std::uint64_t expected = s.chat.empty() ? 1 : s.chat.back().seq + 1;
    if (m.seq != expected) corrupt(seq, "chat sequence gap");
    s.chat.push_back(std::move(m));
  } else if (e.kind == k::kSelfAssessment) {
    SelfAssessment a;
    a.alias = p.at("alias").get<std::string>();
    a.step_id = p.at("step_id").get<std::string>();
    a.knowledge_gain = p.at("value").get<int>();
    a.comment = p.value("comment", "");
    a.at = e.at;
    auto it = std::find_if(s.self_assessments.begin(), s.self_assessments.end(),
                           [&](const SelfAssessment& x) {
                             return x.alias == a.alias && x.step_id == a.step_id;
                           });
    if (it != s.self_assessments.end()) {
      *it = std::move(a);
    } else {
      s.self_assessments.push_back(std::move(a));
    }
  } else if (e.kind == k::kGateDecision) {
    GateDecision d = parse_gate_decision(p.at("decision").get<std::string>());
    if (d == GateDecision::Iterate) {
      auto pos = s.agenda_pos_of(StepKind::Rating);
      if (!pos) corrupt(seq, "no Rating step to iterate to");
      s.cursor = static_cast<int>(*pos);
    } else {
      s.critique_outcome = d;
      s.cursor = static_cast<int>(s.phase_steps().steps.size());
    }
  } else if (e.kind == k::kScenarioNodeAdded) {
    ScenarioNode n;
    n.id = p.at("id").get<std::string>();
    n.kind = parse_node_kind(p.at("kind").get<std::string>());
    n.text = p.at("text").get<std::string>();
    n.parent = opt_string(p, "parent");
    n.author_alias = p.at("alias").get<std::string>();
    n.created_at = e.at;
    s.nodes.push_back(std::move(n));
  } else if (e.kind == k::kGuardWarning) {
    GuardWarning w;
    w.node_id = p.at("node_id").get<std::string>();
    w.vision_id = p.at("vision_id").get<std::string>();
    w.subtree_nodes = p.at("subtree_nodes").get<int>();
    w.total_nodes = p.at("total_nodes").get<int>();
    w.per_vision_limit = p.at("per_vision_limit").get<bool>();
    w.total_limit = p.at("total_limit").get<bool>();
    s.guard_warnings.push_back(std::move(w));
  } else if (e.kind == k::kScenariosComposed) {
    s.scenarios.clear();
    for (const auto& js : p.at("scenarios")) {
      Scenario sc;
      sc.id = js.at("id").get<std::string>();
      sc.label = js.at("label").get<std::string>();
      sc.group = js.at("group").get<std::string>();
      sc.vision_ids = js.at("vision_ids").get<std::vector<std::string>>();
      sc.member_nodes = js.at("member_nodes").get<std::vector<std::string>>();
      sc.narrative = js.value("narrative", "");
      s.scenarios.push_back(std::move(sc));
    }
    s.uncovered_visions = p.at("uncovered").get<std::vector<std::string>>();
  } else {
    corrupt(seq, "unknown event kind '" + e.kind + "'");
  }
}

}  // namespace

// --- WorkshopState lookups --------------------------------------------------

const Participant* WorkshopState::participant_by_alias(std::string_view alias) const {
  for (const auto& p : participants) {
    if (p.alias == alias) return &p;
  }
  return nullptr;
}

const Participant* WorkshopState::participant_by_digest(std::string_view digest) const {
  for (const auto& p : participants) {
    if (p.token_digest == digest) return &p;
  }
  return nullptr;
}

const Participant* WorkshopState::facilitator() const {
  for (const auto& p : participants) {
    if (p.role == Role::Facilitator) return &p;
  }
  return nullptr;
}

const Statement* WorkshopState::statement(std::string_view id) const {
  for (const auto& st : statements) {
    if (st.id == id) return &st;
  }
  return nullptr;
}

Statement* WorkshopState::statement(std::string_view id) {
  return const_cast<Statement*>(std::as_const(*this).statement(id));
}

const Step* WorkshopState::open_step() const {
  for (const auto& st : steps) {
    if (st.state == StepState::Open) return &st;
  }
  return nullptr;
}

Step* WorkshopState::open_step() { return const_cast<Step*>(std::as_const(*this).open_step()); }

const Step* WorkshopState::step(std::string_view id) const {
  for (const auto& st : steps) {
    if (st.id == id) return &st;
  }
  return nullptr;
}

const EvaluationRound* WorkshopState::current_round() const {
  return rounds.empty() ? nullptr : &rounds.back();
}

EvaluationRound* WorkshopState::current_round() { return rounds.empty() ? nullptr : &rounds.back(); }

std::vector<std::string> WorkshopState::active_item_ids() const {
  std::vector<std::string> out;
  for (const auto& st : statements) {
    if (st.status == StatementStatus::Active) out.push_back(st.id);
  }
  return out;
}

const PhaseSpec& WorkshopState::phase_steps() const {
  static const PhaseSpec empty{Phase::Closed, {}};
  const PhaseSpec* spec = agenda.phase_spec(phase);
  return spec ? *spec : empty;
}

std::optional<std::int64_t> WorkshopState::agenda_pos_of(StepKind kind) const {
  const auto& spec = phase_steps();
  for (std::size_t i = 0; i < spec.steps.size(); ++i) {
    if (spec.steps[i].kind == kind) return static_cast<std::int64_t>(i);
  }
  return std::nullopt;
}

// --- events -----------------------------------------------------------------

json event_to_json(const Event& e) {
  return {{"seq", e.seq}, {"kind", e.kind}, {"payload", e.payload}, {"at", e.at}, {"actor", e.actor}};
}

Event event_from_json(const json& doc) {
  std::uint64_t seq = 0;
  try {
    Event e;
    seq = doc.at("seq").get<std::uint64_t>();
    e.seq = seq;
    e.kind = doc.at("kind").get<std::string>();
    e.payload = doc.at("payload");
    if (!e.payload.is_object()) corrupt(seq, "payload must be an object");
    e.at = doc.at("at").get<TimestampMs>();
    e.actor = doc.at("actor").get<std::string>();
    return e;
  } catch (const json::exception& ex) {
    corrupt(seq, std::string("malformed event record: ") + ex.what());
  }
}

std::string event_to_line(const Event& e) { return event_to_json(e).dump(); }

void apply(WorkshopState& state, const Event& event) {
  if (event.seq != state.last_seq + 1) {
    corrupt(event.seq, "seq gap: expected " + std::to_string(state.last_seq + 1) + ", got " +
                           std::to_string(event.seq));
  }
  try {
    apply_inner(state, event);
  } catch (const CorruptLogError&) {
    throw;
  } catch (const json::exception& ex) {
    corrupt(event.seq, std::string("payload does not match schema: ") + ex.what());
  } catch (const Error& ex) {
    corrupt(event.seq, ex.what());
  }
  state.last_seq = event.seq;
}

// --- canonical view -----------------------------------------------------------

json state_to_json(const WorkshopState& s, bool with_time) {
  auto ts = [&](std::optional<TimestampMs> t) -> json {
    return with_time && t ? json(*t) : json(nullptr);
  };
  json participants = json::array();
  for (const auto& p : s.participants) {
    participants.push_back({{"alias", p.alias},
                            {"role", to_string(p.role)},
                            {"group_label", opt_json(p.group_label)},
                            {"token_digest", p.token_digest}});
  }
  json statements = json::array();
  for (const auto& st : s.statements) {
    json j = {{"id", st.id},         {"text", st.text},
              {"author_alias", st.author_alias}, {"area", st.area},
              {"merged_from", st.merged_from},   {"status", to_string(st.status)}};
    if (with_time) j["created_at"] = st.created_at;
    statements.push_back(std::move(j));
  }
  json steps = json::array();
  for (const auto& st : s.steps) {
    json j = {{"id", st.id},
              {"kind", to_string(st.kind)},
              {"phase", to_string(st.phase)},
              {"agenda_pos", st.agenda_pos},
              {"state", to_string(st.state)},
              {"round", st.round_index},
              {"cutoff_n", opt_json(st.cutoff_n)},
              {"auto_closed", st.auto_closed}};
    if (with_time) {
      j["opened_at"] = ts(st.opened_at);
      j["closed_at"] = ts(st.closed_at);
      j["deadline"] = ts(st.deadline);
    }
    steps.push_back(std::move(j));
  }
  json rounds = json::array();
  for (const auto& r : s.rounds) {
    rounds.push_back({{"index", r.index},
                      {"item_ids", r.item_ids},
                      {"ratings", r.ratings},
                      {"criterion_tags", r.criterion_tags},
                      {"rankings", r.rankings},
                      {"mean_rating", r.mean_rating},
                      {"borda", r.borda},
                      {"zero_support_eliminated", r.zero_support_eliminated},
                      {"cutoff_eliminated", r.cutoff_eliminated},
                      {"convergence", r.convergence ? report_to_json(*r.convergence) : json(nullptr)},
                      {"low_discrimination", r.low_discrimination},
                      {"rating_submissions", r.rating_submissions}});
  }
  json chat = json::array();
  for (const auto& m : s.chat) {
    json j = {{"seq", m.seq}, {"alias", m.alias}, {"text", m.text}};
    if (with_time) j["at"] = m.at;
    chat.push_back(std::move(j));
  }
  json assessments = json::array();
  for (const auto& a : s.self_assessments) {
    assessments.push_back({{"alias", a.alias},
                           {"step_id", a.step_id},
                           {"knowledge_gain", a.knowledge_gain},
                           {"comment", a.comment}});
  }
  json snapshots = json::array();
  for (const auto& sn : s.snapshots) {
    json j = {{"alias", sn.alias},
              {"round", sn.round},
              {"step_kind", to_string(sn.step_kind)},
              {"vector", sn.vector}};
    if (with_time) j["taken_at"] = sn.taken_at;
    snapshots.push_back(std::move(j));
  }
  json nodes = json::array();
  for (const auto& n : s.nodes) {
    json j = {{"id", n.id},
              {"kind", to_string(n.kind)},
              {"text", n.text},
              {"parent", opt_json(n.parent)},
              {"author_alias", n.author_alias}};
    if (with_time) j["created_at"] = n.created_at;
    nodes.push_back(std::move(j));
  }
  json scenarios = json::array();
  for (const auto& sc : s.scenarios) {
    scenarios.push_back({{"id", sc.id},
                         {"label", sc.label},
                         {"group", sc.group},
                         {"vision_ids", sc.vision_ids},
                         {"member_nodes", sc.member_nodes},
                         {"narrative", sc.narrative}});
  }
  json warnings = json::array();
  for (const auto& w : s.guard_warnings) {
    warnings.push_back({{"node_id", w.node_id},
                        {"vision_id", w.vision_id},
                        {"subtree_nodes", w.subtree_nodes},
                        {"total_nodes", w.total_nodes},
                        {"per_vision_limit", w.per_vision_limit},
                        {"total_limit", w.total_limit}});
  }
  json history = json::array();
  for (Phase ph : s.phase_history) history.push_back(to_string(ph));

  json out = {
      {"created", s.created},
      {"id", s.id},
      {"title", s.title},
      {"agenda", s.created ? agenda_to_json(s.agenda) : json(nullptr)},
      {"phase", to_string(s.phase)},
      {"phase_history", std::move(history)},
      {"issue_areas", s.issue_areas},
      {"participants", std::move(participants)},
      {"statements", std::move(statements)},
      {"steps", std::move(steps)},
      {"cursor", s.cursor},
      {"round", s.round},
      {"rounds", std::move(rounds)},
      {"chat", std::move(chat)},
      {"self_assessments", std::move(assessments)},
      {"snapshots", std::move(snapshots)},
      {"nodes", std::move(nodes)},
      {"scenarios", std::move(scenarios)},
      {"uncovered_visions", s.uncovered_visions},
      {"guard_warnings", std::move(warnings)},
      {"merge_applied", s.merge_applied},
      {"raw_pool_size", s.raw_pool_size},
      {"reduction_rate", opt_json(s.reduction_rate)},
      {"critique_outcome",
       s.critique_outcome ? json(to_string(*s.critique_outcome)) : json(nullptr)},
      {"last_seq", s.last_seq},
  };
  if (with_time) out["created_at"] = s.created_at;
  return out;
}

std::string state_hash(const WorkshopState& state) {
  return sha256_hex(canonical_dump(state_to_json(state, false)));
}

ReplayResult replay(std::span<const Event> log) {
  ReplayResult result;
  for (const auto& e : log) apply(result.state, e);
  result.events = log.size();
  result.hash = state_hash(result.state);
  return result;
}

std::vector<Event> parse_log(std::string_view text) {
  std::vector<Event> events;
  std::size_t start = 0;
  std::size_t line_no = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    ++line_no;
    start = end + 1;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
    json doc;
    try {
      doc = json::parse(line);
    } catch (const json::exception&) {
      std::uint64_t guess = events.empty() ? 1 : events.back().seq + 1;
      corrupt(guess, "line " + std::to_string(line_no) + " is not a JSON record");
    }
    events.push_back(event_from_json(doc));
  }
  return events;
}

}  // namespace fw
