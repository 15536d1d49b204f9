#include "fw/service.hpp"

#include <algorithm>
#include <charconv>
#include <set>

#include "fw/agenda.hpp"
#include "fw/analytics.hpp"
#include "fw/canonical.hpp"
#include "fw/error.hpp"
#include "fw/export.hpp"
#include "fw/grouping.hpp"

namespace fw {
namespace fs = std::filesystem;

// ---- WorkshopService ----

WorkshopService::WorkshopService() : WorkshopService(Options{}) {}

WorkshopService::WorkshopService(Options options) : options_(std::move(options)) {
  if (options_.clock == nullptr) {
    owned_clock_ = std::make_unique<SystemClock>();
    options_.clock = owned_clock_.get();
  }
  if (!options_.tokens) options_.tokens = [](const std::string&) { return random_tokens(); };
  if (!options_.data_dir) return;

  std::error_code ec;
  fs::create_directories(*options_.data_dir, ec);
  if (ec) fail(ErrorCode::Io, "cannot create " + options_.data_dir->string() + ": " + ec.message());
  for (const auto& entry : fs::directory_iterator(*options_.data_dir)) {
    if (entry.path().extension() != ".ndjson") continue;
    const std::string id = entry.path().stem().string();
    slots_[id] = make_slot(id);
    if (id.size() > 1 && id[0] == 'W') {
      int n = 0;
      auto [p, err] = std::from_chars(id.data() + 1, id.data() + id.size(), n);
      if (err == std::errc() && p == id.data() + id.size()) next_id_ = std::max(next_id_, n + 1);
    }
  }
}

std::unique_ptr<WorkshopService::Slot> WorkshopService::make_slot(const std::string& id) {
  auto s = std::make_unique<Slot>();
  if (options_.data_dir) {
    s->log = std::make_unique<EventLog>(*options_.data_dir / (id + ".ndjson"));
  } else {
    s->log = std::make_unique<EventLog>();
  }
  s->engine = std::make_unique<Engine>(*s->log, *options_.clock, options_.tokens(id));
  return s;
}

std::string WorkshopService::create_workshop(const std::string& title, const Agenda& agenda,
                                             const std::vector<std::string>& issue_areas) {
  {
    // Dry run on a scratch log so a rejected request leaves no file behind.
    EventLog scratch;
    Engine probe(scratch, *options_.clock, [] { return std::string(); });
    probe.create("probe", title, agenda, issue_areas);
  }
  std::lock_guard lock(mu_);
  std::string id;
  do {
    id = "W" + std::to_string(next_id_++);
  } while (slots_.count(id) != 0);
  auto s = make_slot(id);
  s->engine->create(id, title, agenda, issue_areas);
  slots_[id] = std::move(s);
  return id;
}

std::vector<std::string> WorkshopService::workshop_ids() const {
  std::lock_guard lock(mu_);
  std::vector<std::string> out;
  for (const auto& [id, s] : slots_) out.push_back(id);
  return out;
}

bool WorkshopService::exists(const std::string& id) const {
  std::lock_guard lock(mu_);
  return slots_.count(id) != 0;
}

WorkshopService::Slot& WorkshopService::slot(const std::string& id) {
  std::lock_guard lock(mu_);
  auto it = slots_.find(id);
  if (it == slots_.end()) fail(ErrorCode::UnknownWorkshop, "no workshop " + id);
  return *it->second;
}

const EventLog& WorkshopService::log(const std::string& id) { return *slot(id).log; }

void WorkshopService::tick_all() {
  for (const auto& id : workshop_ids()) {
    with(id, [](Engine&) {});
  }
}

// ---- errors ----

int http_status(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::Unauthorized:
      return 401;
    case ErrorCode::NotFacilitator:
    case ErrorCode::NotStakeholder:
      return 403;
    case ErrorCode::UnknownWorkshop:
    case ErrorCode::NotFound:
      return 404;
    case ErrorCode::DuplicateFacilitator:
    case ErrorCode::WrongPhase:
    case ErrorCode::StepsIncomplete:
    case ErrorCode::OutOfOrder:
    case ErrorCode::AlreadyOpen:
    case ErrorCode::NothingOpen:
    case ErrorCode::StepClosed:
    case ErrorCode::NoReport:
    case ErrorCode::SequenceConflict:
      return 409;
    case ErrorCode::CorruptLog:
    case ErrorCode::Io:
      return 500;
    default:
      return 400;
  }
}

ApiResponse error_response(const Error& e) {
  ApiResponse r;
  r.status = http_status(e.code());
  r.body = json{{"error", e.name()}, {"message", e.what()}}.dump();
  return r;
}

// ---- event visibility ----

bool is_public_event(const std::string& kind) {
  static const std::set<std::string> kinds = {
      event_kind::kStepOpened,    event_kind::kStepClosed,      event_kind::kListUpdated,
      event_kind::kChatMessage,   event_kind::kGateDecision,    event_kind::kGuardWarning,
      event_kind::kPhaseAdvanced, event_kind::kMergeApplied,    event_kind::kScenarioNodeAdded,
      event_kind::kScenariosComposed, event_kind::kCutoffConfigured,
  };
  return kinds.count(kind) != 0;
}

json public_event_json(const Event& e, bool facilitator) {
  json j = event_to_json(e);
  if (!facilitator && e.kind == event_kind::kStepClosed) j["payload"].erase("snapshots");
  return j;
}

// ---- router helpers ----

namespace {

std::vector<std::string> split_path(const std::string& path) {
  std::vector<std::string> parts;
  std::size_t i = 0;
  while (i < path.size()) {
    while (i < path.size() && path[i] == '/') ++i;
    std::size_t j = path.find('/', i);
    if (j == std::string::npos) j = path.size();
    if (j > i) parts.push_back(path.substr(i, j - i));
    i = j;
  }
  return parts;
}

json parse_body(const std::string& body) {
  if (body.empty()) return json::object();
  try {
    json j = json::parse(body);
    if (!j.is_object()) fail(ErrorCode::InvalidArgument, "request body must be a JSON object");
    return j;
  } catch (const json::exception& e) {
    fail(ErrorCode::InvalidArgument, std::string("malformed JSON body: ") + e.what());
  }
}

std::uint64_t query_u64(const ApiRequest& req, const std::string& key, std::uint64_t fallback) {
  auto it = req.query.find(key);
  if (it == req.query.end() || it->second.empty()) return fallback;
  std::uint64_t v = 0;
  auto [p, err] = std::from_chars(it->second.data(), it->second.data() + it->second.size(), v);
  if (err != std::errc() || p != it->second.data() + it->second.size()) {
    fail(ErrorCode::InvalidArgument, key + " must be a non-negative integer");
  }
  return v;
}

bool query_flag(const ApiRequest& req, const std::string& key) {
  auto it = req.query.find(key);
  return it != req.query.end() && (it->second == "true" || it->second == "1");
}

json step_json(const Step& s) {
  return {{"step_id", s.id},
          {"kind", to_string(s.kind)},
          {"phase", to_string(s.phase)},
          {"state", to_string(s.state)},
          {"round", s.round_index},
          {"cutoff_n", s.cutoff_n ? json(*s.cutoff_n) : json(nullptr)},
          {"deadline", s.deadline ? json(*s.deadline) : json(nullptr)}};
}

json step_result_json(const StepResult& r) {
  json j = {{"step_id", r.step_id},
            {"kind", to_string(r.kind)},
            {"round", r.round},
            {"active_count", r.active_count},
            {"eliminated", r.eliminated},
            {"mean_rating", r.mean_rating},
            {"borda", r.borda},
            {"snapshots", r.snapshots}};
  j["decision"] = r.decision ? json(to_string(*r.decision)) : json(nullptr);
  return j;
}

json convergence_json(const ConvergenceReport& c) {
  return {{"round", c.round},
          {"kendall_w", c.kendall_w},
          {"eliminated_fraction", c.eliminated_fraction},
          {"decision", to_string(c.decision)},
          {"rankers", c.rankers}};
}

json summary_json(const WorkshopState& s) {
  json j = {{"id", s.id},
            {"title", s.title},
            {"phase", to_string(s.phase)},
            {"issue_areas", s.issue_areas},
            {"participants", s.participants.size()},
            {"round", s.round},
            {"active_items", s.active_item_ids().size()},
            {"last_seq", s.last_seq},
            {"state_hash", state_hash(s)}};
  j["open_step"] = s.open_step() ? step_json(*s.open_step()) : json(nullptr);
  j["critique_outcome"] = s.critique_outcome ? json(to_string(*s.critique_outcome)) : json(nullptr);
  j["reduction_rate"] = s.reduction_rate ? json(*s.reduction_rate) : json(nullptr);
  return j;
}

json statement_json(const Statement& st) {
  return {{"id", st.id},
          {"text", st.text},
          {"area", st.area},
          {"status", to_string(st.status)},
          {"merged_from", st.merged_from}};
}

// Raw statements pooled during an open IdeaEntry step are visible to their
// author only; author aliases are never listed here.
json items_json(const WorkshopState& s, const Participant& caller, bool all) {
  const Step* open = s.open_step();
  const bool pooling = open != nullptr && open->kind == StepKind::IdeaEntry;
  json items = json::array();
  for (const auto& st : s.statements) {
    if (st.status == StatementStatus::Raw && pooling && st.author_alias != caller.alias) continue;
    if (!all && st.status != StatementStatus::Active && st.status != StatementStatus::Raw) continue;
    items.push_back(statement_json(st));
  }
  return {{"phase", to_string(s.phase)}, {"round", s.round}, {"items", items}};
}

// Aggregates of a step become visible when it closes.
json round_json(const WorkshopState& s, int k) {
  const EvaluationRound* r = nullptr;
  for (const auto& x : s.rounds) {
    if (x.index == k) r = &x;
  }
  if (r == nullptr) fail(ErrorCode::NotFound, "no round " + std::to_string(k));
  const Step* open = s.open_step();
  const bool live = open != nullptr && open->round_index == k;
  json j = {{"index", r->index},
            {"item_ids", r->item_ids},
            {"raters", r->ratings.size()},
            {"rankers", r->rankings.size()},
            {"zero_support_eliminated", r->zero_support_eliminated},
            {"cutoff_eliminated", r->cutoff_eliminated},
            {"low_discrimination", r->low_discrimination}};
  const bool hide_ratings = live && open->kind == StepKind::Rating;
  const bool hide_borda = live && (open->kind == StepKind::Rating || open->kind == StepKind::Ranking);
  j["mean_rating"] = hide_ratings ? json(nullptr) : json(r->mean_rating);
  j["borda"] = hide_borda ? json(nullptr) : json(r->borda);
  j["convergence"] = r->convergence ? convergence_json(*r->convergence) : json(nullptr);
  std::vector<std::string> active;
  for (const auto& id : r->item_ids) {
    const Statement* st = s.statement(id);
    if (st != nullptr && st->status == StatementStatus::Active) active.push_back(id);
  }
  j["active"] = active;
  return j;
}

std::vector<grouping::TextItem> text_items(const WorkshopState& s, StatementStatus status) {
  std::vector<grouping::TextItem> out;
  for (const auto& st : s.statements) {
    if (st.status == status) out.push_back({st.id, st.text});
  }
  return out;
}

std::vector<AreaProfile> area_profiles(const WorkshopState& s) {
  std::vector<AreaProfile> out;
  for (const auto& label : s.issue_areas) {
    AreaProfile p;
    p.label = label;
    for (const auto& prof : s.agenda.area_profiles) {
      if (prof.label == label) p.keywords = prof.keywords;
    }
    out.push_back(std::move(p));
  }
  return out;
}

template <typename T>
T get(const json& body, const char* key) {
  if (!body.contains(key)) fail(ErrorCode::InvalidArgument, std::string("missing field '") + key + "'");
  try {
    return body.at(key).get<T>();
  } catch (const json::exception&) {
    fail(ErrorCode::InvalidArgument, std::string("field '") + key + "' has the wrong type");
  }
}

template <typename T>
std::optional<T> get_opt(const json& body, const char* key) {
  if (!body.contains(key) || body.at(key).is_null()) return std::nullopt;
  return get<T>(body, key);
}

}  // namespace

// ---- router ----

ApiResponse ApiRouter::handle(const ApiRequest& req) {
  ApiResponse raw;
  bool is_raw = false;
  int status = 200;
  try {
    json body = dispatch(req, status, raw, is_raw);
    if (is_raw) return raw;
    ApiResponse r;
    r.status = status;
    r.body = body.dump();
    return r;
  } catch (const Error& e) {
    return error_response(e);
  } catch (const std::exception& e) {
    ApiResponse r;
    r.status = 500;
    r.body = json{{"error", "Internal"}, {"message", e.what()}}.dump();
    return r;
  }
}

json ApiRouter::dispatch(const ApiRequest& req, int& status, ApiResponse& raw, bool& is_raw) {
  const auto parts = split_path(req.path);
  const bool get_m = req.method == "GET";
  const bool post_m = req.method == "POST";
  if (parts.empty() || parts[0] != "workshops") fail(ErrorCode::NotFound, "no route " + req.path);

  if (parts.size() == 1) {
    if (get_m) return {{"workshops", service_.workshop_ids()}};
    if (!post_m) fail(ErrorCode::NotFound, "no route " + req.method + " " + req.path);
    json body = parse_body(req.body);
    Agenda agenda = default_agenda();
    if (body.contains("agenda") && !body["agenda"].is_null()) agenda = agenda_from_json(body["agenda"]);
    auto areas = get<std::vector<std::string>>(body, "issue_areas");
    std::string title = body.value("title", std::string());
    std::string id = service_.create_workshop(title, agenda, areas);
    status = 201;
    return service_.with(id, [&](Engine& e) { return summary_json(e.state()); });
  }

  const std::string& id = parts[1];
  const std::string route = parts.size() >= 3 ? parts[2] : "";
  const std::string sub = parts.size() >= 4 ? parts[3] : "";
  const std::string& tok = req.token;
  auto no_route = [&]() -> json { fail(ErrorCode::NotFound, "no route " + req.method + " " + req.path); };
  if (parts.size() > 4) return no_route();

  if (get_m) {
    if (route.empty()) return service_.with(id, [&](Engine& e) { return summary_json(e.state()); });
    if (route == "agenda" && sub.empty()) {
      return service_.with(id, [&](Engine& e) { return agenda_to_json(e.state().agenda); });
    }
    if (route == "items" && sub.empty()) {
      return service_.with(id, [&](Engine& e) {
        return items_json(e.state(), e.authenticate(tok), query_flag(req, "all"));
      });
    }
    if (route == "rounds" && !sub.empty()) {
      int k = 0;
      auto [p, err] = std::from_chars(sub.data(), sub.data() + sub.size(), k);
      if (err != std::errc() || p != sub.data() + sub.size()) fail(ErrorCode::NotFound, "bad round " + sub);
      return service_.with(id, [&](Engine& e) {
        e.authenticate(tok);
        return round_json(e.state(), k);
      });
    }
    if (route == "chat" && sub.empty()) {
      const std::uint64_t from = query_u64(req, "from_seq", 0);
      return service_.with(id, [&](Engine& e) {
        e.authenticate(tok);
        json msgs = json::array();
        for (const auto& m : e.fetch_chat(from)) {
          msgs.push_back({{"seq", m.seq}, {"alias", m.alias}, {"at", m.at}, {"text", m.text}});
        }
        return json{{"messages", msgs}};
      });
    }
    if (route == "export" && sub.empty()) {
      auto fmt_it = req.query.find("format");
      const ExportFormat fmt =
          parse_export_format(fmt_it == req.query.end() ? "full-record" : fmt_it->second);
      const bool disclose = query_flag(req, "disclose");
      raw = service_.with(id, [&](Engine& e) {
        if (disclose) {
          e.require_facilitator(tok);
        } else {
          e.authenticate(tok);
        }
        ApiResponse r;
        r.content_type = std::string(content_type(fmt));
        r.body = export_document(e.state(), fmt, disclose);
        return r;
      });
      is_raw = true;
      return {};
    }
    if (route == "events" && sub.empty()) {
      const std::uint64_t from = query_u64(req, "from_seq", 0);
      const bool facilitator = service_.with(id, [&](Engine& e) {
        return e.authenticate(tok).role == Role::Facilitator;
      });
      raw.content_type = "application/x-ndjson";
      for (const auto& ev : service_.log(id).since(from)) {
        if (facilitator || is_public_event(ev.kind)) raw.body += public_event_json(ev, facilitator).dump() + "\n";
      }
      is_raw = true;
      return {};
    }
    if (route == "homologous" && sub.empty()) {
      const int target = static_cast<int>(query_u64(req, "target", 3));
      return service_.with(id, [&](Engine& e) {
        json clusters = json::array();
        for (const auto& c : e.homologous_proposal(tok, target)) {
          clusters.push_back({{"scenario_ids", c.scenario_ids}, {"cohesion", c.cohesion}});
        }
        return json{{"clusters", clusters}};
      });
    }
    if (route == "merge-suggestions" && sub.empty()) {
      return service_.with(id, [&](Engine& e) {
        e.require_facilitator(tok);
        const auto& s = e.state();
        auto items = text_items(s, StatementStatus::Raw);
        std::vector<grouping::ClusterSuggestion> clusters;
        if (req.query.count("target") != 0) {
          clusters = grouping::clusters_for_target(items, s.agenda.similarity, query_u64(req, "target", 1));
        } else {
          clusters = grouping::suggest_clusters(items, s.agenda.similarity);
        }
        json out = json::array();
        for (const auto& c : clusters) out.push_back({{"members", c.member_ids}, {"heading", c.heading}});
        return json{{"groups", out}};
      });
    }
    if (route == "area-assignment" && sub.empty()) {
      return service_.with(id, [&](Engine& e) {
        e.require_facilitator(tok);
        const auto& s = e.state();
        auto items = text_items(s, StatementStatus::Raw);
        if (items.empty()) items = text_items(s, StatementStatus::Active);
        grouping::GaParams params;
        params.seed = query_u64(req, "seed", 1);
        auto a = grouping::ga_assign_areas(items, area_profiles(s), params, s.agenda.similarity);
        return json{{"areas", a.areas}, {"fitness", a.fitness}};
      });
    }
    if (route == "analytics" && sub.empty()) {
      return service_.with(id, [&](Engine& e) {
        e.require_facilitator(tok);
        const auto& s = e.state();
        json stab = json::object();
        for (const auto& p : s.participants) {
          try {
            stab[p.alias] = analytics::stability(s, p.alias);
          } catch (const Error&) {
            stab[p.alias] = nullptr;
          }
        }
        json know = json::array();
        for (const auto& k : analytics::knowledge_gain_summary(s).per_step) {
          know.push_back({{"step_id", k.step_id},
                          {"mean", k.mean ? json(*k.mean) : json(nullptr)},
                          {"count", k.count}});
        }
        json crit = json::array();
        if (!s.agenda.criteria.empty()) {
          for (const auto& d : analytics::criteria_shift(s)) {
            crit.push_back({{"round", d.round},
                            {"fractions", d.fractions},
                            {"dominant", d.dominant ? json(*d.dominant) : json(nullptr)}});
          }
        }
        return json{{"stability", stab}, {"knowledge_gain", know}, {"criteria", crit}};
      });
    }
    return no_route();
  }

  if (!post_m) return no_route();
  const json body = parse_body(req.body);

  if (route == "participants" && sub.empty()) {
    const Role role = parse_role(body.value("role", std::string("Stakeholder")));
    auto group = get_opt<std::string>(body, "group_label");
    status = 201;
    return service_.with(id, [&](Engine& e) {
      auto reg = e.register_participant(role, group);
      return json{{"alias", reg.alias}, {"token", reg.token}};
    });
  }
  if (route == "steps" && sub == "open") {
    const StepKind kind = parse_step_kind(get<std::string>(body, "kind"));
    return service_.with(id, [&](Engine& e) { return step_json(e.open_step(tok, kind)); });
  }
  if (route == "steps" && sub == "close") {
    return service_.with(id, [&](Engine& e) { return step_result_json(e.close_step(tok)); });
  }
  if (route == "phase" && sub == "advance") {
    return service_.with(id, [&](Engine& e) {
      e.advance_phase(tok);
      return json{{"phase", to_string(e.state().phase)}};
    });
  }
  if (!sub.empty()) return no_route();

  if (route == "merge-plan") {
    std::vector<MergeEntry> plan;
    const json groups = body.value("groups", json::array());
    if (!groups.is_array()) fail(ErrorCode::InvalidArgument, "groups must be an array");
    for (const auto& g : groups) {
      MergeEntry m;
      m.members = get<std::vector<std::string>>(g, "members");
      m.heading = get<std::string>(g, "heading");
      m.area = g.value("area", std::string(kOthersArea));
      plan.push_back(std::move(m));
    }
    return service_.with(id, [&](Engine& e) {
      auto r = e.apply_merge_plan(tok, plan);
      return json{{"issue_ids", r.issue_ids},
                  {"active_count", r.active_count},
                  {"reduction_rate", r.reduction_rate ? json(*r.reduction_rate) : json(nullptr)}};
    });
  }
  if (route == "cutoff") {
    const int n = get<int>(body, "n");
    return service_.with(id, [&](Engine& e) {
      e.configure_cutoff(tok, n);
      return json{{"n", n}};
    });
  }
  if (route == "gate") {
    return service_.with(id, [&](Engine& e) {
      const GateDecision d = e.delphi_gate(tok);
      const auto& rounds = e.state().rounds;
      json j = {{"decision", to_string(d)}, {"active", e.state().active_item_ids()}};
      if (!rounds.empty() && rounds.back().convergence) j["report"] = convergence_json(*rounds.back().convergence);
      j["phase"] = to_string(e.state().phase);
      return j;
    });
  }
  if (route == "ideas") {
    std::vector<IdeaInput> ideas;
    for (const auto& item : get<json>(body, "ideas")) {
      if (item.is_string()) {
        ideas.push_back({item.get<std::string>(), std::nullopt});
      } else {
        ideas.push_back({get<std::string>(item, "text"), get_opt<std::string>(item, "area")});
      }
    }
    return service_.with(id, [&](Engine& e) {
      auto r = e.submit_ideas(tok, ideas);
      return json{{"accepted", r.accepted}, {"rejected_duplicates", r.rejected_duplicates}};
    });
  }
  if (route == "ratings") {
    auto ratings = get<std::map<std::string, int>>(body, "ratings");
    auto criterion = get_opt<std::string>(body, "criterion");
    return service_.with(id, [&](Engine& e) {
      e.submit_ratings(tok, ratings, criterion);
      return json{{"accepted", ratings.size()}};
    });
  }
  if (route == "ranking") {
    auto items = get<std::vector<std::string>>(body, "items");
    return service_.with(id, [&](Engine& e) {
      e.submit_ranking(tok, items);
      return json{{"accepted", items.size()}};
    });
  }
  if (route == "chat") {
    auto text = get<std::string>(body, "text");
    status = 201;
    return service_.with(id, [&](Engine& e) {
      auto m = e.post_chat(tok, text);
      return json{{"seq", m.seq}, {"alias", m.alias}, {"at", m.at}, {"text", m.text}};
    });
  }
  if (route == "self-assessment") {
    const int value = get<int>(body, "value");
    const std::string comment = body.value("comment", std::string());
    return service_.with(id, [&](Engine& e) {
      e.submit_self_assessment(tok, value, comment);
      return json{{"value", value}};
    });
  }
  if (route == "scenario-nodes") {
    const NodeKind kind = parse_node_kind(get<std::string>(body, "kind"));
    const auto text = get<std::string>(body, "text");
    const auto parent = get_opt<std::string>(body, "parent");
    status = 201;
    return service_.with(id, [&](Engine& e) {
      auto r = e.add_node(tok, kind, text, parent);
      json j = {{"id", r.node.id}, {"kind", to_string(r.node.kind)}, {"parent", parent ? json(*parent) : json(nullptr)}};
      if (r.warning) {
        j["warning"] = {{"vision_id", r.warning->vision_id},
                        {"subtree_nodes", r.warning->subtree_nodes},
                        {"total_nodes", r.warning->total_nodes}};
      } else {
        j["warning"] = nullptr;
      }
      return j;
    });
  }
  if (route == "scenarios") {
    std::vector<scenario::Selection> selections;
    for (const auto& s : get<json>(body, "selections")) {
      scenario::Selection sel;
      sel.label = get<std::string>(s, "label");
      sel.vision_ids = get<std::vector<std::string>>(s, "vision_ids");
      sel.group = s.value("group", std::string());
      sel.narrative = s.value("narrative", std::string());
      selections.push_back(std::move(sel));
    }
    return service_.with(id, [&](Engine& e) {
      auto c = e.compose_scenarios(tok, selections);
      json scs = json::array();
      for (const auto& sc : c.scenarios) {
        scs.push_back({{"id", sc.id}, {"label", sc.label}, {"group", sc.group}, {"vision_ids", sc.vision_ids},
                       {"member_nodes", sc.member_nodes}});
      }
      return json{{"scenarios", scs}, {"uncovered", c.uncovered_visions}};
    });
  }
  return no_route();
}

}  // namespace fw
