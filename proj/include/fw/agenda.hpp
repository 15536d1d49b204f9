#pragma once

#include <filesystem>
#include <string>

#include "json.hpp"

#include "fw/model.hpp"

namespace fw {

using json = nlohmann::json;

// Four phases; Critique runs IdeaEntry, Merge, Rating, Ranking, CutOff, Chat,
// SelfAssessment, DelphiGate; Fantasy runs TreeBuild, Chat; Implementation
// runs TreeBuild, ScenarioCompose, HomologousGroup.
Agenda default_agenda();

// Throws InvalidAgenda naming the first violated rule.
void validate_agenda(const Agenda& agenda);

json agenda_to_json(const Agenda& agenda);

// Missing fields take their defaults. A "stopwords_file" entry is read
// relative to `base_dir`. The result is validated.
Agenda agenda_from_json(const json& doc, const std::filesystem::path& base_dir = {});
Agenda load_agenda_file(const std::filesystem::path& path);

// Critique step kinds in their required order, collateral kinds excluded.
const std::vector<StepKind>& critique_core_sequence();

}  // namespace fw
