#include "fw/agenda.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "fw/error.hpp"

namespace fw {
namespace {

[[noreturn]] void invalid(const std::string& why) { fail(ErrorCode::InvalidAgenda, why); }

bool critique_only(StepKind k) {
  switch (k) {
    case StepKind::IdeaEntry:
    case StepKind::Merge:
    case StepKind::Rating:
    case StepKind::Ranking:
    case StepKind::CutOff:
    case StepKind::DelphiGate:
      return true;
    default:
      return false;
  }
}

bool collateral(StepKind k) {
  return k == StepKind::SelfAssessment || k == StepKind::BehaviorSnapshot;
}

StepSpec step(StepKind k) { return StepSpec{k, std::nullopt, std::nullopt}; }

template <typename T>
T get_or(const json& doc, const char* key, T fallback) {
  auto it = doc.find(key);
  if (it == doc.end() || it->is_null()) return fallback;
  return it->get<T>();
}

}  // namespace

const std::vector<StepKind>& critique_core_sequence() {
  static const std::vector<StepKind> seq = {StepKind::IdeaEntry, StepKind::Merge,
                                            StepKind::Rating,    StepKind::Ranking,
                                            StepKind::CutOff,    StepKind::Chat,
                                            StepKind::DelphiGate};
  return seq;
}

const PhaseSpec* Agenda::phase_spec(Phase p) const {
  for (const auto& ps : phases) {
    if (ps.phase == p) return &ps;
  }
  return nullptr;
}

Agenda default_agenda() {
  Agenda a;
  a.phases = {
      {Phase::Preparation, {}},
      {Phase::Critique,
       {step(StepKind::IdeaEntry), step(StepKind::Merge), step(StepKind::Rating),
        step(StepKind::Ranking), step(StepKind::CutOff), step(StepKind::Chat),
        step(StepKind::SelfAssessment), step(StepKind::DelphiGate)}},
      {Phase::Fantasy, {step(StepKind::TreeBuild), step(StepKind::Chat)}},
      {Phase::Implementation,
       {step(StepKind::TreeBuild), step(StepKind::ScenarioCompose),
        step(StepKind::HomologousGroup)}},
  };
  return a;
}

void validate_agenda(const Agenda& a) {
  static const Phase order[] = {Phase::Preparation, Phase::Critique, Phase::Fantasy,
                                Phase::Implementation};
  if (a.phases.size() != 4) invalid("agenda must list the Preparation, Critique, Fantasy and Implementation phases");
  for (std::size_t i = 0; i < 4; ++i) {
    if (a.phases[i].phase != order[i]) {
      invalid("phase " + std::to_string(i + 1) + " must be " + std::string(to_string(order[i])));
    }
  }
  for (const auto& ps : a.phases) {
    for (const auto& s : ps.steps) {
      if (ps.phase != Phase::Critique && critique_only(s.kind)) {
        invalid(std::string(to_string(s.kind)) + " steps belong to the Critique phase");
      }
      if ((ps.phase == Phase::Preparation) &&
          (s.kind == StepKind::TreeBuild || s.kind == StepKind::ScenarioCompose ||
           s.kind == StepKind::HomologousGroup)) {
        invalid(std::string(to_string(s.kind)) + " is not a Preparation step");
      }
      if (ps.phase == Phase::Critique &&
          (s.kind == StepKind::TreeBuild || s.kind == StepKind::ScenarioCompose ||
           s.kind == StepKind::HomologousGroup)) {
        invalid(std::string(to_string(s.kind)) + " is not a Critique step");
      }
      if (s.time_limit_s && *s.time_limit_s <= 0) invalid("time limits must be positive");
      if (s.cutoff_n) {
        if (s.kind != StepKind::CutOff) invalid("cutoff_n is only valid on CutOff steps");
        if (*s.cutoff_n < 1) invalid("cutoff_n must be at least 1");
      }
    }
  }
  std::vector<StepKind> core;
  for (const auto& s : a.phases[1].steps) {
    if (!collateral(s.kind)) core.push_back(s.kind);
  }
  if (core != critique_core_sequence()) {
    invalid("Critique steps must run IdeaEntry, Merge, Rating, Ranking, CutOff, Chat, DelphiGate in order");
  }
  if (a.top_k < 1) invalid("top_k must be at least 1");
  if (a.rating_scale_max < 1) invalid("rating_scale_max must be at least 1");
  const auto& p = a.policy;
  if (!(p.w_min >= 0.0 && p.w_min <= 1.0)) invalid("w_min must be in [0,1]");
  if (p.max_rounds < 0) invalid("max_rounds must be non-negative");
  if (!(p.min_elimination_fraction >= 0.0 && p.min_elimination_fraction <= 1.0)) {
    invalid("min_elimination_fraction must be in [0,1]");
  }
  if (a.zero_support_mean_below < 0.0) invalid("zero-support mean threshold must be >= 0");
  if (a.guard.max_nodes_per_vision < 1 || a.guard.max_total_nodes < 1 ||
      a.guard.max_nodes_per_vision > a.guard.max_total_nodes) {
    invalid("guard limits must be positive with per-vision <= total");
  }
  if (a.scenarios_min < 1 || a.scenarios_min > a.scenarios_max) {
    invalid("scenario range must satisfy 1 <= min <= max");
  }
  if (!(a.similarity.threshold >= 0.0 && a.similarity.threshold <= 1.0)) {
    invalid("similarity threshold must be in [0,1]");
  }
  std::set<std::string> labels;
  for (const auto& area : a.area_profiles) {
    if (area.label.empty() || !labels.insert(area.label).second) {
      invalid("area labels must be non-empty and unique");
    }
  }
  std::set<std::string> criteria;
  for (const auto& c : a.criteria) {
    if (c.empty() || !criteria.insert(c).second) invalid("criteria must be non-empty and unique");
  }
}

json agenda_to_json(const Agenda& a) {
  json phases = json::array();
  for (const auto& ps : a.phases) {
    json steps = json::array();
    for (const auto& s : ps.steps) {
      json js = {{"kind", to_string(s.kind)}};
      if (s.time_limit_s) js["time_limit_s"] = *s.time_limit_s;
      if (s.cutoff_n) js["cutoff_n"] = *s.cutoff_n;
      steps.push_back(std::move(js));
    }
    phases.push_back({{"phase", to_string(ps.phase)}, {"steps", std::move(steps)}});
  }
  json areas = json::array();
  for (const auto& area : a.area_profiles) {
    areas.push_back({{"label", area.label}, {"keywords", area.keywords}});
  }
  return {
      {"phases", std::move(phases)},
      {"top_k", a.top_k},
      {"rating_scale_max", a.rating_scale_max},
      {"convergence",
       {{"w_min", a.policy.w_min},
        {"max_rounds", a.policy.max_rounds},
        {"min_elimination_fraction", a.policy.min_elimination_fraction}}},
      {"cutoff_basis", to_string(a.cutoff_basis)},
      {"zero_support", {{"enabled", a.zero_support_rule}, {"mean_below", a.zero_support_mean_below}}},
      {"issue_areas", std::move(areas)},
      {"criteria", a.criteria},
      {"guard",
       {{"max_nodes_per_vision", a.guard.max_nodes_per_vision},
        {"max_total_nodes", a.guard.max_total_nodes}}},
      {"scenarios", {{"min", a.scenarios_min}, {"max", a.scenarios_max}}},
      {"similarity", {{"threshold", a.similarity.threshold}, {"stopwords", a.similarity.stopwords}}},
  };
}

Agenda agenda_from_json(const json& doc, const std::filesystem::path& base_dir) {
  if (!doc.is_object()) invalid("agenda must be an object");
  Agenda a;
  try {
    if (auto it = doc.find("phases"); it != doc.end()) {
      a.phases.clear();
      for (const auto& jp : *it) {
        PhaseSpec ps;
        ps.phase = parse_phase(jp.at("phase").get<std::string>());
        for (const auto& js : jp.value("steps", json::array())) {
          StepSpec s;
          s.kind = parse_step_kind(js.at("kind").get<std::string>());
          if (js.contains("time_limit_s")) s.time_limit_s = js["time_limit_s"].get<std::int64_t>();
          if (js.contains("cutoff_n")) s.cutoff_n = js["cutoff_n"].get<int>();
          ps.steps.push_back(s);
        }
        a.phases.push_back(std::move(ps));
      }
    } else {
      a.phases = default_agenda().phases;
    }
    a.top_k = get_or(doc, "top_k", a.top_k);
    a.rating_scale_max = get_or(doc, "rating_scale_max", a.rating_scale_max);
    if (auto it = doc.find("convergence"); it != doc.end()) {
      a.policy.w_min = get_or(*it, "w_min", a.policy.w_min);
      a.policy.max_rounds = get_or(*it, "max_rounds", a.policy.max_rounds);
      a.policy.min_elimination_fraction =
          get_or(*it, "min_elimination_fraction", a.policy.min_elimination_fraction);
    }
    if (doc.contains("cutoff_basis")) {
      a.cutoff_basis = parse_score_basis(doc["cutoff_basis"].get<std::string>());
    }
    if (auto it = doc.find("zero_support"); it != doc.end()) {
      a.zero_support_rule = get_or(*it, "enabled", a.zero_support_rule);
      a.zero_support_mean_below = get_or(*it, "mean_below", a.zero_support_mean_below);
    }
    if (auto it = doc.find("issue_areas"); it != doc.end()) {
      for (const auto& ja : *it) {
        AreaProfile area;
        if (ja.is_string()) {
          area.label = ja.get<std::string>();
        } else {
          area.label = ja.at("label").get<std::string>();
          area.keywords = ja.value("keywords", std::vector<std::string>{});
        }
        a.area_profiles.push_back(std::move(area));
      }
    }
    a.criteria = get_or(doc, "criteria", a.criteria);
    if (auto it = doc.find("guard"); it != doc.end()) {
      a.guard.max_nodes_per_vision = get_or(*it, "max_nodes_per_vision", a.guard.max_nodes_per_vision);
      a.guard.max_total_nodes = get_or(*it, "max_total_nodes", a.guard.max_total_nodes);
    }
    if (auto it = doc.find("scenarios"); it != doc.end()) {
      a.scenarios_min = get_or(*it, "min", a.scenarios_min);
      a.scenarios_max = get_or(*it, "max", a.scenarios_max);
    }
    if (auto it = doc.find("similarity"); it != doc.end()) {
      a.similarity.threshold = get_or(*it, "threshold", a.similarity.threshold);
      a.similarity.stopwords = get_or(*it, "stopwords", a.similarity.stopwords);
      if (it->contains("stopwords_file")) {
        auto path = base_dir / (*it)["stopwords_file"].get<std::string>();
        std::ifstream in(path);
        if (!in) invalid("cannot read stopwords file " + path.string());
        std::string word;
        while (in >> word) a.similarity.stopwords.push_back(word);
      }
    }
  } catch (const json::exception& e) {
    invalid(std::string("malformed agenda: ") + e.what());
  } catch (const Error& e) {
    if (e.code() == ErrorCode::InvalidAgenda) throw;
    invalid(e.what());
  }
  validate_agenda(a);
  return a;
}

Agenda load_agenda_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::Io, "cannot read agenda file " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    invalid(std::string("agenda file is not valid JSON: ") + e.what());
  }
  return agenda_from_json(doc, path.parent_path());
}

}  // namespace fw
