#include "fw/engine.hpp"

#include <algorithm>
#include <set>

#include "fw/agenda.hpp"
#include "fw/aggregation.hpp"
#include "fw/canonical.hpp"
#include "fw/error.hpp"

namespace fw {
namespace {

constexpr const char* kSystemActor = "system";

void check_text(const std::string& text, std::size_t max_chars, const char* what) {
  if (text.find_first_not_of(" \t\r\n") == std::string::npos) {
    fail(ErrorCode::EmptyText, std::string(what) + " text is empty");
  }
  auto len = utf8_length(text);
  if (!len) fail(ErrorCode::InvalidArgument, std::string(what) + " text is not valid UTF-8");
  if (*len > max_chars) {
    fail(ErrorCode::TextTooLong, std::string(what) + " text exceeds " + std::to_string(max_chars) +
                                     " characters");
  }
}

json opt(const std::optional<std::string>& v) { return v ? json(*v) : json(nullptr); }

}  // namespace

std::optional<std::size_t> utf8_length(std::string_view text) {
  std::size_t count = 0;
  for (std::size_t i = 0; i < text.size();) {
    auto c = static_cast<unsigned char>(text[i]);
    std::size_t len = c < 0x80 ? 1 : (c >> 5) == 0x6 ? 2 : (c >> 4) == 0xe ? 3 : (c >> 3) == 0x1e ? 4 : 0;
    if (len == 0 || i + len > text.size()) return std::nullopt;
    for (std::size_t k = 1; k < len; ++k) {
      if ((static_cast<unsigned char>(text[i + k]) >> 6) != 0x2) return std::nullopt;
    }
    i += len;
    ++count;
  }
  return count;
}

Engine::Engine(EventLog& log, Clock& clock, TokenSource tokens)
    : log_(log), clock_(clock), tokens_(std::move(tokens)) {
  for (const auto& e : log_.events()) apply(state_, e);
}

void Engine::emit(const char* kind, json payload, const std::string& actor) {
  Event e;
  e.seq = state_.last_seq + 1;
  e.kind = kind;
  e.payload = std::move(payload);
  e.at = clock_.now_ms();
  e.actor = actor;
  log_.append(e);
  apply(state_, e);
}

const Participant& Engine::authenticate(std::string_view token) const {
  const Participant* p = state_.participant_by_digest(sha256_hex(token));
  if (p == nullptr) fail(ErrorCode::Unauthorized, "unknown participant token");
  return *p;
}

const Participant& Engine::require_facilitator(std::string_view token) const {
  const Participant& p = authenticate(token);
  if (p.role != Role::Facilitator) {
    fail(ErrorCode::NotFacilitator, p.alias + " is not the facilitator");
  }
  return p;
}

void Engine::create(const std::string& id, const std::string& title, const Agenda& agenda,
                    std::vector<std::string> issue_areas) {
  if (state_.created) fail(ErrorCode::InvalidArgument, "workshop already exists");
  validate_agenda(agenda);
  if (issue_areas.empty()) fail(ErrorCode::InvalidArgument, "issue areas must not be empty");
  std::set<std::string> seen;
  for (const auto& a : issue_areas) {
    if (a.empty() || !seen.insert(a).second) {
      fail(ErrorCode::InvalidArgument, "issue area labels must be non-empty and unique");
    }
  }
  std::erase(issue_areas, std::string(kOthersArea));
  issue_areas.emplace_back(kOthersArea);
  emit(event_kind::kWorkshopCreated,
       {{"id", id}, {"title", title}, {"agenda", agenda_to_json(agenda)}, {"issue_areas", issue_areas}},
       kSystemActor);
}

Registration Engine::register_participant(Role role, std::optional<std::string> group_label) {
  tick();
  if (!state_.created) fail(ErrorCode::UnknownWorkshop, "workshop not created");
  if (state_.phase != Phase::Preparation) {
    fail(ErrorCode::WrongPhase, "participants join only during Preparation");
  }
  if (role == Role::Facilitator && state_.facilitator() != nullptr) {
    fail(ErrorCode::DuplicateFacilitator, "the workshop already has a facilitator");
  }
  Registration reg;
  reg.alias = "P" + std::to_string(state_.participants.size() + 1);
  reg.token = tokens_();
  emit(event_kind::kParticipantRegistered,
       {{"alias", reg.alias},
        {"role", to_string(role)},
        {"group_label", opt(group_label)},
        {"token_digest", sha256_hex(reg.token)}},
       reg.alias);
  return reg;
}

void Engine::advance_phase(std::string_view token) {
  tick();
  const Participant& actor = require_facilitator(token);
  if (state_.phase == Phase::Closed) fail(ErrorCode::WrongPhase, "workshop is closed");
  if (state_.open_step() != nullptr) fail(ErrorCode::StepsIncomplete, "a step is still open");
  const auto& spec = state_.phase_steps().steps;
  for (std::size_t p = static_cast<std::size_t>(state_.cursor); p < spec.size(); ++p) {
    if (!is_optional_step(spec[p].kind)) {
      fail(ErrorCode::StepsIncomplete,
           std::string(to_string(spec[p].kind)) + " has not been closed in this phase");
    }
  }
  emit(event_kind::kPhaseAdvanced,
       {{"from", to_string(state_.phase)}, {"to", to_string(next_phase(state_.phase))}},
       actor.alias);
}

void Engine::tick() {
  const Step* open = state_.open_step();
  if (open == nullptr || !open->deadline) return;
  if (clock_.now_ms() >= *open->deadline) close_internal(kSystemActor, true);
}

const Step& Engine::open_step(std::string_view token, StepKind kind) {
  tick();
  const Participant& actor = require_facilitator(token);
  if (const Step* open = state_.open_step()) {
    fail(ErrorCode::AlreadyOpen, std::string(to_string(open->kind)) + " step " + open->id +
                                     " is still open");
  }
  const auto& spec = state_.phase_steps().steps;
  std::optional<std::size_t> pos;
  for (std::size_t p = static_cast<std::size_t>(state_.cursor); p < spec.size(); ++p) {
    if (spec[p].kind == kind) {
      pos = p;
      break;
    }
    if (!is_optional_step(spec[p].kind)) break;
  }
  if (!pos) {
    fail(ErrorCode::OutOfOrder, std::string(to_string(kind)) + " is not the next step of the " +
                                    std::string(to_string(state_.phase)) + " phase");
  }
  const StepSpec& ss = spec[*pos];
  const TimestampMs now = clock_.now_ms();

  json payload = {{"step_id", "T" + std::to_string(state_.steps.size() + 1)},
                  {"kind", to_string(kind)},
                  {"agenda_pos", *pos},
                  {"round", state_.round},
                  {"cutoff_n", ss.cutoff_n ? json(*ss.cutoff_n) : json(nullptr)},
                  {"deadline", ss.time_limit_s ? json(now + *ss.time_limit_s * 1000) : json(nullptr)}};
  if (kind == StepKind::Rating) {
    payload["round"] = state_.round + 1;
    payload["new_round"] = {{"index", state_.round + 1}, {"item_ids", state_.active_item_ids()}};
  }
  if (kind == StepKind::DelphiGate) {
    if (auto report = build_report()) {
      payload["report"] = {{"round", report->round},
                           {"kendall_w", report->kendall_w},
                           {"eliminated_fraction", report->eliminated_fraction},
                           {"decision", to_string(report->decision)},
                           {"rankers", report->rankers}};
    }
  }
  emit(event_kind::kStepOpened, std::move(payload), actor.alias);
  return *state_.open_step();
}

std::optional<ConvergenceReport> Engine::build_report() const {
  const EvaluationRound* r = state_.current_round();
  if (r == nullptr) return std::nullopt;
  ConvergenceReport rep;
  rep.round = r->index;
  aggregation::Ballots ballots;
  for (const auto& [alias, items] : r->rankings) {
    if (!items.empty()) ballots[alias] = items;
  }
  rep.rankers = static_cast<int>(ballots.size());
  if (r->item_ids.size() < 2) {
    rep.kendall_w = 1.0;  // nothing left to disagree on
  } else if (ballots.size() < 2) {
    rep.kendall_w = 0.0;  // no evidence of agreement
  } else {
    rep.kendall_w = aggregation::kendall_w(ballots, r->item_ids);
  }
  const std::size_t eliminated = r->zero_support_eliminated.size() + r->cutoff_eliminated.size();
  rep.eliminated_fraction =
      r->item_ids.empty() ? 0.0
                          : static_cast<double>(eliminated) / static_cast<double>(r->item_ids.size());
  rep.decision = aggregation::decide(state_.agenda.policy, rep.round, rep.kendall_w,
                                     rep.eliminated_fraction);
  return rep;
}

StepResult Engine::close_step(std::string_view token) {
  tick();
  const Participant& actor = require_facilitator(token);
  if (state_.open_step() == nullptr) fail(ErrorCode::NothingOpen, "no step is open");
  return close_internal(actor.alias, false);
}

StepResult Engine::close_internal(const std::string& actor, bool automatic) {
  const Step step = *state_.open_step();
  StepResult result;
  result.step_id = step.id;
  result.kind = step.kind;
  result.round = step.round_index;

  if (step.kind == StepKind::DelphiGate) {
    result.decision = gate_internal(actor, automatic);
    result.active_count = state_.active_item_ids().size();
    return result;
  }

  if (step.kind == StepKind::Merge && !state_.merge_applied) {
    // Nothing applied: every raw statement becomes an active singleton.
    json singletons = json::array();
    std::size_t active = 0;
    for (const auto& st : state_.statements) {
      if (st.status == StatementStatus::Raw) {
        singletons.push_back({{"id", st.id}, {"area", st.area.empty() ? kOthersArea : st.area}});
        ++active;
      }
      if (st.status == StatementStatus::Active) ++active;
    }
    json rate = state_.raw_pool_size > 0
                    ? json(aggregation::reduction_rate(state_.raw_pool_size, static_cast<int>(active)))
                    : json(nullptr);
    emit(event_kind::kMergeApplied,
         {{"groups", json::array()}, {"singletons", singletons}, {"reduction_rate", rate}, {"auto", true}},
         actor);
  }

  json payload = {{"step_id", step.id}, {"auto", automatic}};
  json snapshots = json::array();
  std::vector<std::string> zero_support;

  if (step.kind == StepKind::Rating) {
    const EvaluationRound& r = *state_.current_round();
    std::map<std::string, std::vector<int>> values;
    for (const auto& [alias, ratings] : r.ratings) {
      json vec = json::object();
      for (const auto& [item, v] : ratings) {
        values[item].push_back(v);
        vec[item] = static_cast<double>(v);
      }
      snapshots.push_back({{"alias", alias}, {"vector", vec}});
    }
    std::vector<double> means;
    for (const auto& [item, vs] : values) {
      double m = aggregation::mean_rating(vs, state_.agenda.rating_scale_max);
      result.mean_rating[item] = m;
      means.push_back(m);
    }
    payload["aggregates"] = {{"mean_rating", result.mean_rating},
                             {"low_discrimination", aggregation::low_discrimination(means)}};
  } else if (step.kind == StepKind::Ranking) {
    const EvaluationRound& r = *state_.current_round();
    result.borda = aggregation::borda_scores(r.rankings, state_.agenda.top_k, r.item_ids);
    for (const auto& [alias, items] : r.rankings) {
      json vec = json::object();
      for (std::size_t i = 0; i < items.size(); ++i) vec[items[i]] = static_cast<double>(i + 1);
      snapshots.push_back({{"alias", alias}, {"vector", vec}});
    }
    payload["aggregates"] = {{"borda", result.borda}};

    bool any_ballot = std::any_of(r.rankings.begin(), r.rankings.end(),
                                  [](const auto& kv) { return !kv.second.empty(); });
    if (state_.agenda.zero_support_rule && any_ballot) {
      for (const auto& item : r.item_ids) {
        const Statement* st = state_.statement(item);
        if (st == nullptr || st->status != StatementStatus::Active) continue;
        auto mean_it = r.mean_rating.find(item);
        const double mean = mean_it == r.mean_rating.end() ? 0.0 : mean_it->second;
        if (result.borda[item] == 0.0 && mean < state_.agenda.zero_support_mean_below) {
          zero_support.push_back(item);
        }
      }
    }
  }
  payload["snapshots"] = snapshots;
  result.snapshots = snapshots.size();
  emit(event_kind::kStepClosed, std::move(payload), actor);

  if (step.kind == StepKind::Ranking && !zero_support.empty()) {
    emit(event_kind::kListUpdated,
         {{"round", step.round_index},
          {"reason", "zero_support"},
          {"eliminated", zero_support},
          {"active", [&] {
             auto a = state_.active_item_ids();
             std::erase_if(a, [&](const std::string& id) {
               return std::find(zero_support.begin(), zero_support.end(), id) != zero_support.end();
             });
             return a;
           }()}},
         actor);
    result.eliminated = zero_support;
  }

  if (step.kind == StepKind::CutOff && step.cutoff_n) {
    const EvaluationRound& r = *state_.current_round();
    aggregation::Scores scores;
    std::vector<std::string> active;
    for (const auto& item : r.item_ids) {
      const Statement* st = state_.statement(item);
      if (st != nullptr && st->status == StatementStatus::Active) active.push_back(item);
    }
    switch (state_.agenda.cutoff_basis) {
      case ScoreBasis::Borda:
        for (const auto& item : active) {
          auto it = r.borda.find(item);
          scores[item] = it == r.borda.end() ? 0.0 : it->second;
        }
        break;
      case ScoreBasis::MeanRating:
        for (const auto& item : active) {
          auto it = r.mean_rating.find(item);
          scores[item] = it == r.mean_rating.end() ? 0.0 : it->second;
        }
        break;
      case ScoreBasis::MeanRank: {
        for (const auto& item : active) scores[item] = 0.0;
        std::size_t ballots = 0;
        for (const auto& [alias, items] : r.rankings) {
          std::vector<std::string> kept;
          for (const auto& i : items) {
            if (scores.count(i) != 0) kept.push_back(i);
          }
          auto ranks = aggregation::complete_ranking(kept, active);
          for (std::size_t i = 0; i < active.size(); ++i) scores[active[i]] -= ranks[i];
          ++ballots;
        }
        if (ballots > 0) {
          for (auto& [item, s] : scores) s /= static_cast<double>(ballots);
        }
        break;
      }
    }
    if (!scores.empty()) {
      auto cut = aggregation::cutoff_top(scores, *step.cutoff_n);
      if (!cut.eliminated.empty()) {
        std::sort(cut.eliminated.begin(), cut.eliminated.end());
        emit(event_kind::kListUpdated,
             {{"round", step.round_index},
              {"reason", "cutoff"},
              {"eliminated", cut.eliminated},
              {"active", cut.selected}},
             actor);
        result.eliminated = cut.eliminated;
      }
    }
  }
  result.active_count = state_.active_item_ids().size();
  return result;
}

GateDecision Engine::delphi_gate(std::string_view token) {
  tick();
  const Participant& actor = require_facilitator(token);
  const Step* open = state_.open_step();
  if (open == nullptr || open->kind != StepKind::DelphiGate) {
    fail(ErrorCode::NoReport, "no DelphiGate step is open");
  }
  return gate_internal(actor.alias, false);
}

GateDecision Engine::gate_internal(const std::string& actor, bool automatic) {
  const Step step = *state_.open_step();
  const EvaluationRound* r = state_.current_round();
  if (r == nullptr || !r->convergence) fail(ErrorCode::NoReport, "the round has no convergence report");
  const ConvergenceReport rep = *r->convergence;
  emit(event_kind::kStepClosed, {{"step_id", step.id}, {"auto", automatic}, {"snapshots", json::array()}},
       actor);
  emit(event_kind::kGateDecision,
       {{"round", rep.round},
        {"step_id", step.id},
        {"decision", to_string(rep.decision)},
        {"kendall_w", rep.kendall_w},
        {"eliminated_fraction", rep.eliminated_fraction},
        {"active", state_.active_item_ids()}},
       actor);
  return rep.decision;
}

IdeasResult Engine::submit_ideas(std::string_view token, const std::vector<IdeaInput>& ideas) {
  tick();
  const Participant& actor = authenticate(token);
  const Step* open = state_.open_step();
  if (open == nullptr || open->kind != StepKind::IdeaEntry) {
    fail(ErrorCode::StepClosed, "no IdeaEntry step is open");
  }
  if (actor.role != Role::Stakeholder) fail(ErrorCode::NotStakeholder, "only stakeholders submit ideas");
  for (const auto& idea : ideas) {
    check_text(idea.text, kMaxStatementChars, "idea");
    if (idea.area && std::find(state_.issue_areas.begin(), state_.issue_areas.end(), *idea.area) ==
                         state_.issue_areas.end()) {
      fail(ErrorCode::UnknownArea, "unknown issue area " + *idea.area);
    }
  }

  std::set<std::string> existing;
  for (const auto& st : state_.statements) {
    if (st.author_alias == actor.alias && st.merged_from.empty()) existing.insert(st.text);
  }
  IdeasResult result;
  json statements = json::array();
  std::size_t next = state_.statements.size() + 1;
  for (std::size_t i = 0; i < ideas.size(); ++i) {
    if (!existing.insert(ideas[i].text).second) {
      result.rejected_duplicates.push_back(i);
      continue;
    }
    std::string id = "S" + std::to_string(next++);
    statements.push_back({{"id", id}, {"text", ideas[i].text}, {"area", opt(ideas[i].area)}});
    result.accepted.push_back(std::move(id));
  }
  if (!statements.empty()) {
    emit(event_kind::kIdeasSubmitted, {{"alias", actor.alias}, {"statements", statements}},
         actor.alias);
  }
  return result;
}

MergeResult Engine::apply_merge_plan(std::string_view token, const std::vector<MergeEntry>& plan) {
  tick();
  const Participant& actor = require_facilitator(token);
  const Step* open = state_.open_step();
  if (open == nullptr || open->kind != StepKind::Merge) {
    fail(ErrorCode::StepClosed, "no Merge step is open");
  }
  if (state_.merge_applied) fail(ErrorCode::InvalidArgument, "a merge plan was already applied");

  std::set<std::string> covered;
  for (const auto& entry : plan) {
    if (entry.members.empty()) fail(ErrorCode::InvalidArgument, "merge group without members");
    check_text(entry.heading, kMaxStatementChars, "heading");
    if (std::find(state_.issue_areas.begin(), state_.issue_areas.end(), entry.area) ==
        state_.issue_areas.end()) {
      fail(ErrorCode::UnknownArea, "unknown issue area " + entry.area);
    }
    for (const auto& m : entry.members) {
      const Statement* st = state_.statement(m);
      if (st == nullptr || st->status != StatementStatus::Raw) {
        fail(ErrorCode::UnknownStatement, m + " is not a raw statement");
      }
      if (!covered.insert(m).second) {
        fail(ErrorCode::OverlappingGroups, m + " appears in more than one group");
      }
    }
  }

  MergeResult result;
  json groups = json::array();
  std::size_t next = state_.statements.size() + 1;
  for (const auto& entry : plan) {
    std::string id = "S" + std::to_string(next++);
    groups.push_back(
        {{"id", id}, {"members", entry.members}, {"heading", entry.heading}, {"area", entry.area}});
    result.issue_ids.push_back(std::move(id));
  }
  json singletons = json::array();
  std::size_t active = plan.size();
  for (const auto& st : state_.statements) {
    if (st.status == StatementStatus::Raw && covered.count(st.id) == 0) {
      singletons.push_back({{"id", st.id}, {"area", st.area.empty() ? kOthersArea : st.area}});
      ++active;
    } else if (st.status == StatementStatus::Active) {
      ++active;
    }
  }
  if (state_.raw_pool_size > 0 && static_cast<int>(active) <= state_.raw_pool_size) {
    result.reduction_rate = aggregation::reduction_rate(state_.raw_pool_size, static_cast<int>(active));
  }
  emit(event_kind::kMergeApplied,
       {{"groups", groups},
        {"singletons", singletons},
        {"reduction_rate", result.reduction_rate ? json(*result.reduction_rate) : json(nullptr)},
        {"auto", false}},
       actor.alias);
  result.active_count = active;
  return result;
}

void Engine::configure_cutoff(std::string_view token, int n) {
  tick();
  const Participant& actor = require_facilitator(token);
  const Step* open = state_.open_step();
  if (open == nullptr || open->kind != StepKind::CutOff) {
    fail(ErrorCode::StepClosed, "no CutOff step is open");
  }
  if (n < 1) fail(ErrorCode::InvalidArgument, "cut-off size must be at least 1");
  emit(event_kind::kCutoffConfigured, {{"step_id", open->id}, {"n", n}}, actor.alias);
}

void Engine::submit_ratings(std::string_view token, const std::map<std::string, int>& ratings,
                            std::optional<std::string> criterion) {
  tick();
  const Participant& actor = authenticate(token);
  const Step* open = state_.open_step();
  if (open == nullptr || open->kind != StepKind::Rating) {
    fail(ErrorCode::StepClosed, "no Rating step is open");
  }
  if (actor.role != Role::Stakeholder) fail(ErrorCode::NotStakeholder, "only stakeholders rate");
  const EvaluationRound& r = *state_.current_round();
  for (const auto& [item, v] : ratings) {
    if (v < 0 || v > state_.agenda.rating_scale_max) {
      fail(ErrorCode::OutOfScale, "rating " + std::to_string(v) + " outside 0.." +
                                      std::to_string(state_.agenda.rating_scale_max));
    }
    const Statement* st = state_.statement(item);
    if (st == nullptr || st->status != StatementStatus::Active ||
        std::find(r.item_ids.begin(), r.item_ids.end(), item) == r.item_ids.end()) {
      fail(ErrorCode::UnknownItem, item + " is not an item of this round");
    }
  }
  if (criterion) {
    const auto& list = state_.agenda.criteria;
    if (list.empty()) fail(ErrorCode::TaggingDisabled, "criterion tagging is not enabled");
    if (std::find(list.begin(), list.end(), *criterion) == list.end()) {
      fail(ErrorCode::UnknownCriterion, "unknown criterion " + *criterion);
    }
  }
  emit(event_kind::kRatingsSubmitted,
       {{"alias", actor.alias}, {"round", r.index}, {"ratings", ratings}, {"criterion", opt(criterion)}},
       actor.alias);
}

void Engine::submit_ranking(std::string_view token, const std::vector<std::string>& ordered_items) {
  tick();
  const Participant& actor = authenticate(token);
  const Step* open = state_.open_step();
  if (open == nullptr || open->kind != StepKind::Ranking) {
    fail(ErrorCode::StepClosed, "no Ranking step is open");
  }
  if (actor.role != Role::Stakeholder) fail(ErrorCode::NotStakeholder, "only stakeholders rank");
  if (static_cast<int>(ordered_items.size()) > state_.agenda.top_k) {
    fail(ErrorCode::TooMany, "ranking lists at most " + std::to_string(state_.agenda.top_k) + " items");
  }
  std::set<std::string> seen;
  for (const auto& item : ordered_items) {
    if (!seen.insert(item).second) fail(ErrorCode::DuplicateItem, item + " is ranked twice");
  }
  const EvaluationRound& r = *state_.current_round();
  for (const auto& item : ordered_items) {
    const Statement* st = state_.statement(item);
    if (st == nullptr || st->status != StatementStatus::Active ||
        std::find(r.item_ids.begin(), r.item_ids.end(), item) == r.item_ids.end()) {
      fail(ErrorCode::UnknownItem, item + " is not an item of this round");
    }
  }
  emit(event_kind::kRankingSubmitted,
       {{"alias", actor.alias}, {"round", r.index}, {"items", ordered_items}}, actor.alias);
}

ChatMessage Engine::post_chat(std::string_view token, const std::string& text) {
  tick();
  const Participant& actor = authenticate(token);
  const Step* open = state_.open_step();
  if (open == nullptr || open->kind != StepKind::Chat) fail(ErrorCode::StepClosed, "no Chat step is open");
  check_text(text, kMaxChatChars, "chat");
  const std::uint64_t seq = state_.chat.empty() ? 1 : state_.chat.back().seq + 1;
  emit(event_kind::kChatMessage, {{"seq", seq}, {"alias", actor.alias}, {"text", text}}, actor.alias);
  return state_.chat.back();
}

std::vector<ChatMessage> Engine::fetch_chat(std::uint64_t from_seq) const {
  std::vector<ChatMessage> out;
  for (const auto& m : state_.chat) {
    if (m.seq > from_seq) out.push_back(m);
  }
  return out;
}

void Engine::submit_self_assessment(std::string_view token, int knowledge_gain,
                                    const std::string& comment) {
  tick();
  const Participant& actor = authenticate(token);
  const Step* open = state_.open_step();
  if (open == nullptr || open->kind != StepKind::SelfAssessment) {
    fail(ErrorCode::StepClosed, "no SelfAssessment step is open");
  }
  if (knowledge_gain < 0 || knowledge_gain > kKnowledgeScaleMax) {
    fail(ErrorCode::OutOfScale, "knowledge gain must be within 0..5");
  }
  emit(event_kind::kSelfAssessment,
       {{"alias", actor.alias}, {"step_id", open->id}, {"value", knowledge_gain}, {"comment", comment}},
       actor.alias);
}

NodeResult Engine::add_node(std::string_view token, NodeKind kind, const std::string& text,
                            std::optional<std::string> parent) {
  tick();
  const Participant& actor = authenticate(token);
  const Phase needed = kind == NodeKind::Vision ? Phase::Fantasy : Phase::Implementation;
  if (state_.phase != needed) {
    fail(ErrorCode::WrongPhase, std::string(to_string(kind)) + " nodes are entered in the " +
                                    std::string(to_string(needed)) + " phase");
  }
  const Step* open = state_.open_step();
  if (open == nullptr || open->kind != StepKind::TreeBuild) {
    fail(ErrorCode::StepClosed, "no TreeBuild step is open");
  }
  check_text(text, kMaxStatementChars, "node");
  scenario::check_attach(state_.nodes, kind, parent);

  const std::string id = "N" + std::to_string(state_.nodes.size() + 1);
  emit(event_kind::kScenarioNodeAdded,
       {{"id", id}, {"kind", to_string(kind)}, {"text", text}, {"parent", opt(parent)}, {"alias", actor.alias}},
       actor.alias);
  NodeResult result;
  result.node = state_.nodes.back();
  result.warning = scenario::guard_check(state_.nodes, id, state_.agenda.guard);
  if (result.warning) {
    const auto& w = *result.warning;
    emit(event_kind::kGuardWarning,
         {{"node_id", w.node_id},
          {"vision_id", w.vision_id},
          {"subtree_nodes", w.subtree_nodes},
          {"total_nodes", w.total_nodes},
          {"per_vision_limit", w.per_vision_limit},
          {"total_limit", w.total_limit}},
         actor.alias);
  }
  return result;
}

scenario::Composition Engine::compose_scenarios(std::string_view token,
                                                const std::vector<scenario::Selection>& selections) {
  tick();
  const Participant& actor = require_facilitator(token);
  const Step* open = state_.open_step();
  if (open == nullptr || open->kind != StepKind::ScenarioCompose) {
    fail(ErrorCode::StepClosed, "no ScenarioCompose step is open");
  }
  auto comp = scenario::compose(state_.nodes, selections, state_.agenda.scenarios_min,
                                state_.agenda.scenarios_max);
  json scenarios = json::array();
  for (const auto& sc : comp.scenarios) {
    scenarios.push_back({{"id", sc.id},
                         {"label", sc.label},
                         {"group", sc.group},
                         {"vision_ids", sc.vision_ids},
                         {"member_nodes", sc.member_nodes},
                         {"narrative", sc.narrative}});
  }
  emit(event_kind::kScenariosComposed, {{"scenarios", scenarios}, {"uncovered", comp.uncovered_visions}},
       actor.alias);
  return comp;
}

std::vector<scenario::HomologousCluster> Engine::homologous_proposal(std::string_view token,
                                                                     int target) const {
  require_facilitator(token);
  std::map<std::string, scenario::GroupScenarios> by_group;
  for (const auto& sc : state_.scenarios) {
    auto& g = by_group[sc.group];
    g.group = sc.group;
    scenario::ScenarioDoc doc;
    doc.id = sc.id;
    for (const auto& nid : sc.member_nodes) {
      for (const auto& n : state_.nodes) {
        if (n.id == nid) doc.node_texts.push_back(n.text);
      }
    }
    g.scenarios.push_back(std::move(doc));
  }
  std::vector<scenario::GroupScenarios> groups;
  for (auto& [label, g] : by_group) groups.push_back(std::move(g));
  return scenario::group_homologous(groups, target, state_.agenda.similarity);
}

}  // namespace fw
