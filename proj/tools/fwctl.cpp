// Facilitator command-line client. Talks to a running server with --url, or
// operates directly on the logs in --data-dir.

#include <csignal>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include "CLI11.hpp"

#include "fw/agenda.hpp"
#include "fw/canonical.hpp"
#include "fw/error.hpp"
#include "fw/event_log.hpp"
#include "fw/http.hpp"
#include "fw/sim.hpp"

namespace {

using fw::json;

struct Globals {
  std::string url;
  std::string data_dir = "data";
  std::string token;
  std::string workshop;
};

// Owns whichever backend the globals select.
struct Backend {
  std::unique_ptr<fw::WorkshopService> service;
  std::unique_ptr<fw::ApiRouter> router;
  std::unique_ptr<fw::ApiClient> client;

  explicit Backend(const Globals& g) {
    if (!g.url.empty()) {
      client = std::make_unique<fw::HttpClient>(g.url);
      return;
    }
    fw::WorkshopService::Options opts;
    opts.data_dir = g.data_dir;
    service = std::make_unique<fw::WorkshopService>(opts);
    router = std::make_unique<fw::ApiRouter>(*service);
    client = std::make_unique<fw::InProcessClient>(*router);
  }
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fw::fail(fw::ErrorCode::Io, "cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json parse_json_file(const std::string& path) {
  try {
    return json::parse(read_file(path));
  } catch (const json::exception& e) {
    fw::fail(fw::ErrorCode::InvalidArgument, path + ": " + e.what());
  }
}

std::string require_workshop(const Globals& g) {
  if (g.workshop.empty()) fw::fail(fw::ErrorCode::InvalidArgument, "--workshop is required");
  return "/workshops/" + g.workshop;
}

void print(const json& j) { std::cout << fw::canonical_dump(j, 2) << '\n'; }

fw::HttpServer* g_server = nullptr;
void on_signal(int) {
  if (g_server != nullptr) g_server->stop();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Future-workshop facilitator client"};
  app.require_subcommand(1);
  Globals g;
  if (const char* t = std::getenv("FW_TOKEN")) g.token = t;
  app.add_option("--url", g.url, "Server base URL, e.g. http://127.0.0.1:8080 (omit for local mode)");
  app.add_option("--data-dir", g.data_dir, "Event-log directory for local mode")->capture_default_str();
  app.add_option("--token", g.token, "Bearer token (default: $FW_TOKEN)");
  app.add_option("-w,--workshop", g.workshop, "Workshop id");

  std::function<void()> action;

  // create
  auto* create = app.add_subcommand("create", "Create a workshop");
  std::string title;
  std::vector<std::string> areas;
  std::string agenda_file;
  create->add_option("--title", title)->required();
  create->add_option("--areas", areas, "Issue-area labels")->required()->delimiter(',');
  create->add_option("--agenda", agenda_file, "Agenda file (default agenda when omitted)");
  create->callback([&] {
    action = [&] {
      Backend b(g);
      json body = {{"title", title}, {"issue_areas", areas}};
      if (!agenda_file.empty()) body["agenda"] = fw::agenda_to_json(fw::load_agenda_file(agenda_file));
      print(b.client->post("/workshops", body));
    };
  });

  // load-agenda
  auto* load = app.add_subcommand("load-agenda", "Validate an agenda file and print its normalized form");
  std::string load_file;
  load->add_option("file", load_file)->required();
  load->callback([&] { action = [&] { print(fw::agenda_to_json(fw::load_agenda_file(load_file))); }; });

  // join
  auto* join = app.add_subcommand("join", "Register a participant; prints alias and token");
  std::string role = "Stakeholder";
  std::string group;
  join->add_option("--role", role)->check(CLI::IsMember({"Facilitator", "Stakeholder"}));
  join->add_option("--group", group, "Group label");
  join->callback([&] {
    action = [&] {
      Backend b(g);
      json body = {{"role", role}};
      if (!group.empty()) body["group_label"] = group;
      print(b.client->post(require_workshop(g) + "/participants", body));
    };
  });

  // advance / open / close / gate / cutoff
  auto* advance = app.add_subcommand("advance", "Advance to the next phase");
  advance->callback([&] {
    action = [&] {
      Backend b(g);
      print(b.client->post(require_workshop(g) + "/phase/advance", json::object(), g.token));
    };
  });
  auto* open = app.add_subcommand("open", "Open the next agenda step");
  std::string kind;
  open->add_option("kind", kind, "Step kind, e.g. Rating")->required();
  open->callback([&] {
    action = [&] {
      Backend b(g);
      print(b.client->post(require_workshop(g) + "/steps/open", {{"kind", kind}}, g.token));
    };
  });
  auto* close = app.add_subcommand("close", "Close the open step");
  close->callback([&] {
    action = [&] {
      Backend b(g);
      print(b.client->post(require_workshop(g) + "/steps/close", json::object(), g.token));
    };
  });
  auto* gate = app.add_subcommand("gate", "Apply the Delphi gate decision");
  gate->callback([&] {
    action = [&] {
      Backend b(g);
      print(b.client->post(require_workshop(g) + "/gate", json::object(), g.token));
    };
  });
  auto* cutoff = app.add_subcommand("cutoff", "Set the cut-off size of the open CutOff step");
  int cutoff_n = 0;
  cutoff->add_option("n", cutoff_n)->required();
  cutoff->callback([&] {
    action = [&] {
      Backend b(g);
      print(b.client->post(require_workshop(g) + "/cutoff", {{"n", cutoff_n}}, g.token));
    };
  });

  // merge
  auto* merge = app.add_subcommand("merge", "Apply a merge plan file ({\"groups\": [...]})");
  std::string plan_file;
  merge->add_option("plan", plan_file)->required()->check(CLI::ExistingFile);
  merge->callback([&] {
    action = [&] {
      Backend b(g);
      print(b.client->post(require_workshop(g) + "/merge-plan", parse_json_file(plan_file), g.token));
    };
  });

  // status
  auto* status = app.add_subcommand("status", "Show a workshop summary");
  status->callback([&] {
    action = [&] {
      Backend b(g);
      print(b.client->get(require_workshop(g), g.token));
    };
  });

  // export
  auto* exp = app.add_subcommand("export", "Export a workshop document");
  std::string format = "full-record";
  bool disclose = false;
  std::string out_file;
  exp->add_option("--format", format)
      ->check(CLI::IsMember({"full-record", "ratings-csv", "chat-log", "scenario-outline", "criteria-csv"}))
      ->capture_default_str();
  exp->add_flag("--disclose", disclose, "Include the alias audit table (facilitator only)");
  exp->add_option("-o,--out", out_file, "Write to a file instead of stdout");
  exp->callback([&] {
    action = [&] {
      Backend b(g);
      fw::ApiClient::Query q = {{"format", format}};
      if (disclose) q["disclose"] = "true";
      const std::string doc = b.client->get_text(require_workshop(g) + "/export", g.token, q);
      if (out_file.empty()) {
        std::cout << doc;
      } else {
        std::ofstream(out_file, std::ios::binary) << doc;
      }
    };
  });

  // replay-verify
  auto* verify = app.add_subcommand("replay-verify", "Replay a log file and print its state hash");
  std::string log_file;
  std::string expect;
  verify->add_option("log", log_file)->required()->check(CLI::ExistingFile);
  verify->add_option("--expect", expect, "Fail unless the hash equals this value");
  verify->callback([&] {
    action = [&] {
      const auto result = fw::replay(fw::read_log_file(log_file));
      print({{"events", result.events}, {"state_hash", result.hash}, {"phase", fw::to_string(result.state.phase)}});
      if (!expect.empty() && expect != result.hash) {
        fw::fail(fw::ErrorCode::CorruptLog, "state hash " + result.hash + " differs from expected " + expect);
      }
    };
  });

  // serve
  auto* serve = app.add_subcommand("serve", "Run the HTTP API");
  std::string host = "127.0.0.1";
  int port = 8080;
  serve->add_option("--host", host)->capture_default_str();
  serve->add_option("--port", port)->capture_default_str();
  serve->callback([&] {
    action = [&] {
      fw::WorkshopService::Options opts;
      opts.data_dir = g.data_dir;
      fw::WorkshopService service(opts);
      fw::ApiRouter router(service);
      fw::HttpServer server(router);
      g_server = &server;
      std::signal(SIGINT, on_signal);
      std::signal(SIGTERM, on_signal);
      std::cerr << "serving " << service.workshop_ids().size() << " workshop(s) from " << g.data_dir << " on "
                << host << ':' << port << '\n';
      server.run(host, port);
      g_server = nullptr;
    };
  });

  // simulate
  auto* simulate = app.add_subcommand("simulate", "Run a seeded synthetic workshop and print its metrics");
  std::string preset = "rabat";
  std::uint64_t seed = fw::sim::kRabatSeed;
  bool with_trace = false;
  simulate->add_option("--preset", preset)->check(CLI::IsMember({"rabat", "conformist", "random"}))->capture_default_str();
  simulate->add_option("--seed", seed)->capture_default_str();
  simulate->add_flag("--trace", with_trace, "Also print the event trace as NDJSON");
  simulate->callback([&] {
    action = [&] {
      fw::sim::SimScenario sc = fw::sim::rabat_scenario(seed);
      if (preset == "conformist") sc = fw::sim::conformist_scenario(seed);
      if (preset == "random") {
        sc = fw::sim::conformist_scenario(seed);
        sc.mix = {{fw::sim::PolicyKind::Random, 1.0, 0.5}};
      }
      auto r = fw::sim::run_simulation(sc);
      json rounds = json::array();
      for (const auto& m : r.rounds) {
        rounds.push_back({{"round", m.round},
                          {"items", m.items},
                          {"kendall_w", fw::round9(m.kendall_w)},
                          {"eliminated_fraction", fw::round9(m.eliminated_fraction)},
                          {"zero_support", m.zero_support},
                          {"cutoff", m.cutoff},
                          {"active_after", m.active_after},
                          {"decision", fw::to_string(m.decision)}});
      }
      print({{"seed", seed},
             {"raw_ideas", r.raw_ideas},
             {"merged_list", r.merged_list},
             {"reduction_rate", r.reduction_rate ? json(fw::round9(*r.reduction_rate)) : json(nullptr)},
             {"rounds", rounds},
             {"final_list", r.final_list},
             {"outcome", fw::to_string(r.outcome)},
             {"state_hash", r.state_hash}});
      if (with_trace) {
        for (const auto& e : r.trace) std::cout << fw::event_to_line(e) << '\n';
      }
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }
  try {
    if (action) action();
  } catch (const fw::Error& e) {
    std::cerr << e.name() << ": " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "Io: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
