#include "fw/export.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>

#include "fw/agenda.hpp"
#include "fw/analytics.hpp"
#include "fw/canonical.hpp"
#include "fw/error.hpp"

namespace fw {
namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

std::string number(double v) {
  if (std::floor(v) == v && std::abs(v) < 1e15) return std::to_string(static_cast<long long>(v));
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9f", round9(v));
  return buf;
}

json rounded(std::map<std::string, double> m) {
  for (auto& [k, v] : m) v = round9(v);
  return m;
}

json forest_json(const WorkshopState& s) {
  std::function<json(const ScenarioNode&)> build = [&](const ScenarioNode& n) {
    json children = json::array();
    for (const auto& c : s.nodes) {
      if (c.parent && *c.parent == n.id) children.push_back(build(c));
    }
    return json{{"id", n.id},
                {"kind", to_string(n.kind)},
                {"text", n.text},
                {"author_alias", n.author_alias},
                {"created_at", n.created_at},
                {"children", std::move(children)}};
  };
  json roots = json::array();
  for (const auto& n : s.nodes) {
    if (!n.parent) roots.push_back(build(n));
  }
  return roots;
}

}  // namespace

ExportFormat parse_export_format(std::string_view name) {
  if (name == "full-record") return ExportFormat::FullRecord;
  if (name == "ratings-csv") return ExportFormat::RatingsCsv;
  if (name == "chat-log") return ExportFormat::ChatLog;
  if (name == "scenario-outline") return ExportFormat::ScenarioOutline;
  if (name == "criteria-csv") return ExportFormat::CriteriaCsv;
  fail(ErrorCode::InvalidArgument, "unknown export format '" + std::string(name) + "'");
}

std::string_view to_string(ExportFormat f) noexcept {
  switch (f) {
    case ExportFormat::FullRecord:
      return "full-record";
    case ExportFormat::RatingsCsv:
      return "ratings-csv";
    case ExportFormat::ChatLog:
      return "chat-log";
    case ExportFormat::ScenarioOutline:
      return "scenario-outline";
    case ExportFormat::CriteriaCsv:
      return "criteria-csv";
  }
  return "full-record";
}

std::string_view content_type(ExportFormat f) noexcept {
  switch (f) {
    case ExportFormat::FullRecord:
      return "application/json";
    case ExportFormat::ChatLog:
      return "application/x-ndjson";
    case ExportFormat::RatingsCsv:
    case ExportFormat::CriteriaCsv:
      return "text/csv";
    case ExportFormat::ScenarioOutline:
      return "text/plain";
  }
  return "text/plain";
}

json full_record(const WorkshopState& s, bool disclose) {
  json history = json::array();
  for (Phase p : s.phase_history) history.push_back(to_string(p));
  json metadata = {
      {"id", s.id},
      {"title", s.title},
      {"phase", to_string(s.phase)},
      {"phase_history", history},
      {"issue_areas", s.issue_areas},
      {"created_at", s.created_at},
      {"agenda", s.created ? agenda_to_json(s.agenda) : json(nullptr)},
      {"raw_pool_size", s.raw_pool_size},
      {"reduction_rate", s.reduction_rate ? json(round9(*s.reduction_rate)) : json(nullptr)},
      {"critique_outcome", s.critique_outcome ? json(to_string(*s.critique_outcome)) : json(nullptr)},
      {"last_seq", s.last_seq},
  };

  json participants = json::array();
  for (const auto& p : s.participants) {
    participants.push_back({{"alias", p.alias},
                            {"role", to_string(p.role)},
                            {"group_label", p.group_label ? json(*p.group_label) : json(nullptr)}});
  }
  json statements = json::array();
  for (const auto& st : s.statements) {
    statements.push_back({{"id", st.id},
                          {"text", st.text},
                          {"area", st.area},
                          {"merged_from", st.merged_from},
                          {"status", to_string(st.status)}});
  }
  json rounds = json::array();
  for (const auto& r : s.rounds) {
    json conv = nullptr;
    if (r.convergence) {
      conv = {{"round", r.convergence->round},
              {"kendall_w", round9(r.convergence->kendall_w)},
              {"eliminated_fraction", round9(r.convergence->eliminated_fraction)},
              {"decision", to_string(r.convergence->decision)},
              {"rankers", r.convergence->rankers}};
    }
    rounds.push_back({{"index", r.index},
                      {"item_ids", r.item_ids},
                      {"ratings", r.ratings},
                      {"rankings", r.rankings},
                      {"criterion_tags", r.criterion_tags},
                      {"mean_rating", rounded(r.mean_rating)},
                      {"borda", rounded(r.borda)},
                      {"zero_support_eliminated", r.zero_support_eliminated},
                      {"cutoff_eliminated", r.cutoff_eliminated},
                      {"low_discrimination", r.low_discrimination},
                      {"convergence", conv}});
  }
  json steps = json::array();
  for (const auto& st : s.steps) {
    steps.push_back({{"id", st.id},
                     {"kind", to_string(st.kind)},
                     {"phase", to_string(st.phase)},
                     {"state", to_string(st.state)},
                     {"round", st.round_index},
                     {"opened_at", st.opened_at ? json(*st.opened_at) : json(nullptr)},
                     {"closed_at", st.closed_at ? json(*st.closed_at) : json(nullptr)},
                     {"deadline", st.deadline ? json(*st.deadline) : json(nullptr)},
                     {"auto_closed", st.auto_closed}});
  }
  json chat = json::array();
  for (const auto& m : s.chat) {
    chat.push_back({{"seq", m.seq}, {"alias", m.alias}, {"at", m.at}, {"text", m.text}});
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
                        {"total_nodes", w.total_nodes}});
  }

  json snapshot_rows = json::array();
  for (const auto& sn : s.snapshots) {
    for (const auto& [item, v] : sn.vector) {
      snapshot_rows.push_back({{"alias", sn.alias},
                               {"round", sn.round},
                               {"step", to_string(sn.step_kind)},
                               {"item", item},
                               {"value", round9(v)}});
    }
  }
  json criteria = json::array();
  if (!s.agenda.criteria.empty()) {
    for (const auto& d : analytics::criteria_shift(s)) {
      criteria.push_back({{"round", d.round},
                          {"fractions", rounded(d.fractions)},
                          {"tagged", d.tagged},
                          {"untagged", d.untagged},
                          {"dominant", d.dominant ? json(*d.dominant) : json(nullptr)}});
    }
  }
  auto knowledge = analytics::knowledge_gain_summary(s);
  json per_step = json::array();
  for (const auto& k : knowledge.per_step) {
    per_step.push_back({{"step_id", k.step_id},
                        {"mean", k.mean ? json(round9(*k.mean)) : json(nullptr)},
                        {"count", k.count}});
  }

  json doc = {
      {"metadata", metadata},
      {"participants", participants},
      {"statements", statements},
      {"steps", steps},
      {"rounds", rounds},
      {"chat_log", chat},
      {"scenario_forest", forest_json(s)},
      {"scenarios", scenarios},
      {"uncovered_visions", s.uncovered_visions},
      {"guard_warnings", warnings},
      {"analytics",
       {{"snapshots", snapshot_rows}, {"criteria", criteria}, {"knowledge_gain", per_step}}},
  };
  if (disclose) {
    json audit = json::array();
    for (const auto& p : s.participants) {
      json authored = json::array();
      for (const auto& st : s.statements) {
        if (st.author_alias == p.alias) authored.push_back(st.id);
      }
      json nodes = json::array();
      for (const auto& n : s.nodes) {
        if (n.author_alias == p.alias) nodes.push_back(n.id);
      }
      audit.push_back({{"alias", p.alias}, {"statements", authored}, {"scenario_nodes", nodes}});
    }
    doc["audit"] = audit;
  }
  return doc;
}

std::string export_document(const WorkshopState& s, ExportFormat format, bool disclose) {
  std::ostringstream out;
  switch (format) {
    case ExportFormat::FullRecord:
      return canonical_dump(full_record(s, disclose), 2) + "\n";
    case ExportFormat::RatingsCsv: {
      out << "alias,round,step,item,value\n";
      std::vector<const BehaviorSnapshot*> snaps;
      for (const auto& sn : s.snapshots) snaps.push_back(&sn);
      std::stable_sort(snaps.begin(), snaps.end(), [](const auto* a, const auto* b) {
        if (a->round != b->round) return a->round < b->round;
        if (a->step_kind != b->step_kind) return static_cast<int>(a->step_kind) < static_cast<int>(b->step_kind);
        return a->alias < b->alias;
      });
      for (const auto* sn : snaps) {
        for (const auto& [item, v] : sn->vector) {
          out << csv_field(sn->alias) << ',' << sn->round << ',' << to_string(sn->step_kind) << ','
              << csv_field(item) << ',' << number(v) << '\n';
        }
      }
      return out.str();
    }
    case ExportFormat::ChatLog:
      for (const auto& m : s.chat) {
        out << canonical_dump({{"seq", m.seq}, {"alias", m.alias}, {"at", m.at}, {"text", m.text}})
            << '\n';
      }
      return out.str();
    case ExportFormat::ScenarioOutline: {
      std::function<void(const ScenarioNode&, int)> walk = [&](const ScenarioNode& n, int depth) {
        out << std::string(static_cast<std::size_t>(depth * 2), ' ') << to_string(n.kind) << ' '
            << n.id << ": " << n.text << '\n';
        for (const auto& c : s.nodes) {
          if (c.parent && *c.parent == n.id) walk(c, depth + 1);
        }
      };
      for (const auto& n : s.nodes) {
        if (!n.parent) walk(n, 0);
      }
      for (const auto& sc : s.scenarios) {
        out << "Scenario " << sc.id << " [" << sc.group << "] " << sc.label << ':';
        for (const auto& v : sc.vision_ids) out << ' ' << v;
        out << '\n';
        if (!sc.narrative.empty()) out << "  " << sc.narrative << '\n';
      }
      if (!s.uncovered_visions.empty()) {
        out << "Uncovered:";
        for (const auto& v : s.uncovered_visions) out << ' ' << v;
        out << '\n';
      }
      return out.str();
    }
    case ExportFormat::CriteriaCsv: {
      out << "round,criterion,fraction\n";
      for (const auto& d : analytics::criteria_shift(s)) {
        for (const auto& c : s.agenda.criteria) {
          auto it = d.fractions.find(c);
          if (it == d.fractions.end()) continue;
          out << d.round << ',' << csv_field(c) << ',' << number(it->second) << '\n';
        }
      }
      return out.str();
    }
  }
  return {};
}

}  // namespace fw
