#pragma once

// Shared fixtures: a workshop driven directly through the engine.

#include <string>
#include <vector>

#include "doctest.h"

#include "fw/agenda.hpp"
#include "fw/engine.hpp"
#include "fw/error.hpp"

namespace fwtest {

#define CHECK_CODE(expr, expected_code)                              \
  do {                                                               \
    bool caught_ = false;                                            \
    try {                                                            \
      (void)(expr);                                                  \
    } catch (const fw::Error& e_) {                                  \
      caught_ = true;                                                \
      CHECK_MESSAGE(e_.code() == (expected_code), std::string(e_.name()) << ": " << e_.what()); \
    }                                                                \
    CHECK_MESSAGE(caught_, "no fw::Error thrown by " #expr);         \
  } while (0)

struct Bench {
  fw::EventLog log;
  fw::ManualClock clock{1'700'000'000'000, 0};
  fw::Engine engine{log, clock, fw::seeded_tokens(11)};
  std::string fac;
  std::vector<std::string> alias;
  std::vector<std::string> tok;

  explicit Bench(int stakeholders = 3, fw::Agenda agenda = fw::default_agenda(),
                 std::vector<std::string> areas = {"Economic", "Social"}) {
    engine.create("W1", "bench", agenda, std::move(areas));
    for (int i = 0; i < stakeholders; ++i) {
      auto r = engine.register_participant(fw::Role::Stakeholder, i % 2 == 0 ? "G1" : "G2");
      alias.push_back(r.alias);
      tok.push_back(r.token);
    }
    fac = engine.register_participant(fw::Role::Facilitator, std::nullopt).token;
  }

  const fw::WorkshopState& state() const { return engine.state(); }

  void open(fw::StepKind k) { engine.open_step(fac, k); }
  fw::StepResult close() { return engine.close_step(fac); }

  void to_critique() { engine.advance_phase(fac); }

  // Critique up to and including an identity merge; returns the active ids.
  std::vector<std::string> seed_items(const std::vector<std::vector<std::string>>& ideas) {
    to_critique();
    open(fw::StepKind::IdeaEntry);
    for (std::size_t i = 0; i < ideas.size(); ++i) {
      std::vector<fw::IdeaInput> in;
      for (const auto& t : ideas[i]) in.push_back({t, std::nullopt});
      engine.submit_ideas(tok[i], in);
    }
    close();
    open(fw::StepKind::Merge);
    close();
    return state().active_item_ids();
  }
};

}  // namespace fwtest
