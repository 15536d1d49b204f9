#include <chrono>
#include <sstream>
#include <thread>

#include "httplib.h"

#include "support.hpp"

#include "fw/http.hpp"

using namespace fw;

namespace {

struct Api {
  ManualClock clock{1'700'000'000'000, 0};
  WorkshopService svc{{std::nullopt, &clock, [](const std::string&) { return seeded_tokens(4); }}};
  ApiRouter router{svc};
  InProcessClient client{router};
  std::string fac;
  std::vector<std::string> tok;

  Api() {
    client.post("/workshops", {{"title", "Rabat"}, {"issue_areas", {"Economic", "Social"}}});
    for (int i = 0; i < 2; ++i) {
      tok.push_back(client.post("/workshops/W1/participants", {{"role", "Stakeholder"}, {"group_label", "G1"}})["token"]);
    }
    fac = client.post("/workshops/W1/participants", {{"role", "Facilitator"}})["token"];
  }

  json post(const std::string& sub, const json& body, const std::string& token) {
    return client.post("/workshops/W1" + sub, body, token);
  }
  json step(const char* kind) { return post("/steps/open", {{"kind", kind}}, fac); }
  json close() { return post("/steps/close", json::object(), fac); }

  std::vector<json> events(const std::string& token) {
    std::istringstream in(client.get_text("/workshops/W1/events", token));
    std::vector<json> out;
    for (std::string line; std::getline(in, line);) out.push_back(json::parse(line));
    return out;
  }
};

}  // namespace

TEST_CASE("status mapping") {
  CHECK(http_status(ErrorCode::Unauthorized) == 401);
  CHECK(http_status(ErrorCode::NotFacilitator) == 403);
  CHECK(http_status(ErrorCode::UnknownWorkshop) == 404);
  CHECK(http_status(ErrorCode::OutOfOrder) == 409);
  CHECK(http_status(ErrorCode::OutOfScale) == 400);
  CHECK(http_status(ErrorCode::CorruptLog) == 500);
}

TEST_CASE("routing basics") {
  Api api;
  auto list = api.client.get("/workshops");
  CHECK(list.dump().find("W1") != std::string::npos);
  auto summary = api.client.get("/workshops/W1");
  CHECK(summary["phase"] == "Preparation");
  CHECK(summary["participants"] == 3);
  CHECK(summary["issue_areas"].back() == "Others");

  auto r = api.router.handle({"GET", "/workshops/W9", {}, "", ""});
  CHECK(r.status == 404);
  CHECK(json::parse(r.body)["error"] == "UnknownWorkshop");
  CHECK(api.router.handle({"GET", "/nowhere", {}, "", ""}).status == 404);
  auto bad = api.router.handle({"POST", "/workshops", {}, "{not json", ""});
  CHECK(bad.status == 400);
  CHECK_CODE(api.client.get("/workshops/W1/items", "bogus"), ErrorCode::Unauthorized);
  CHECK_CODE(api.post("/phase/advance", json::object(), api.tok[0]), ErrorCode::NotFacilitator);
}

TEST_CASE("a round over the wire, with visibility rules") {
  Api api;
  api.post("/phase/advance", json::object(), api.fac);
  api.step("IdeaEntry");
  api.post("/ideas", {{"ideas", {"clean river", {{"text", "bus lanes"}, {"area", "Economic"}}}}}, api.tok[0]);
  api.post("/ideas", {{"ideas", {"night market"}}}, api.tok[1]);

  // pooled ideas stay private while entry is open
  CHECK(api.client.get("/workshops/W1/items", api.tok[0])["items"].size() == 2);
  CHECK(api.client.get("/workshops/W1/items", api.tok[1])["items"].size() == 1);
  api.close();
  CHECK(api.client.get("/workshops/W1/items", api.tok[1])["items"].size() == 3);

  api.step("Merge");
  auto sugg = api.client.get("/workshops/W1/merge-suggestions", api.fac);
  CHECK(sugg.is_object());
  auto merged = api.post("/merge-plan", {{"groups", {{{"members", {"S1", "S3"}}, {"heading", "river market"}}}}}, api.fac);
  CHECK(merged["active_count"] == 2);
  api.close();

  auto items = api.client.get("/workshops/W1/items", api.tok[0])["items"];
  REQUIRE(items.size() == 2);
  const std::string a = items[0]["id"], b = items[1]["id"];

  api.step("Rating");
  CHECK_CODE(api.post("/ratings", {{"ratings", {{a, 6}}}}, api.tok[0]), ErrorCode::OutOfScale);
  api.post("/ratings", {{"ratings", {{a, 4}, {b, 2}}}}, api.tok[0]);
  api.post("/ratings", {{"ratings", {{a, 5}, {b, 1}}}}, api.tok[1]);
  auto hidden = api.client.get("/workshops/W1/rounds/1", api.tok[0]);
  CHECK(hidden["mean_rating"].is_null());
  auto closed = api.close();
  CHECK(closed["mean_rating"][a] == 4.5);
  CHECK(api.client.get("/workshops/W1/rounds/1", api.tok[0])["mean_rating"][a] == 4.5);

  api.step("Ranking");
  api.post("/ranking", {{"items", {a, b}}}, api.tok[0]);
  api.post("/ranking", {{"items", {a, b}}}, api.tok[1]);
  CHECK(api.client.get("/workshops/W1/rounds/1", api.tok[0])["borda"].is_null());
  api.close();
  api.step("CutOff");
  api.post("/cutoff", {{"n", 1}}, api.fac);
  auto cut = api.close();
  CHECK(cut["eliminated"] == json::array({b}));
  api.step("Chat");
  CHECK(api.client.post("/workshops/W1/chat", {{"text", "hello"}}, api.tok[0])["text"] == "hello");
  CHECK(api.client.get("/workshops/W1/chat", api.tok[1])["messages"].size() == 1);
  api.close();
  api.step("SelfAssessment");
  api.post("/self-assessment", {{"value", 3}, {"comment", ""}}, api.tok[0]);
  CHECK_CODE(api.post("/self-assessment", {{"value", 7}}, api.tok[0]), ErrorCode::OutOfScale);
  api.close();
  api.step("DelphiGate");
  auto gate = api.post("/gate", json::object(), api.fac);
  CHECK(gate["decision"] == "Converged");
  CHECK(gate["active"] == json::array({a}));

  // participants see a filtered stream without snapshots
  const auto mine = api.events(api.tok[0]);
  const auto all = api.events(api.fac);
  CHECK(mine.size() < all.size());
  for (const auto& e : mine) {
    CHECK(e["kind"] != "ratings_submitted");
    if (e["kind"] == "step_closed") CHECK_FALSE(e["payload"].contains("snapshots"));
  }
  auto analytics = api.client.get("/workshops/W1/analytics", api.fac);
  CHECK(analytics.contains("knowledge_gain"));

  auto csv = api.client.get_text("/workshops/W1/export", api.tok[0], {{"format", "ratings-csv"}});
  CHECK(csv.find("alias,round,step,item,value") == 0);
}

TEST_CASE("HTTP transport with live event feed") {
  Api api;
  HttpServer server(api.router);
  const int port = server.start("127.0.0.1", 0);
  REQUIRE(port > 0);
  HttpClient http("http://127.0.0.1:" + std::to_string(port));

  CHECK(http.get("/workshops/W1")["title"] == "Rabat");
  CHECK_CODE(http.get("/workshops/W1/items", "wrong"), ErrorCode::Unauthorized);
  CHECK_CODE(http.post("/workshops/W1/steps/open", {{"kind", "IdeaEntry"}}, api.tok[0]), ErrorCode::NotFacilitator);

  // follow the stream on another connection while posting
  std::string streamed;
  std::thread follower([&] {
    httplib::Client c("127.0.0.1", port);
    c.set_read_timeout(5, 0);
    httplib::Headers h{{"Authorization", "Bearer " + api.fac}};
    c.Get("/workshops/W1/events?follow=true", h, [&](const char* data, std::size_t n) {
      streamed.append(data, n);
      return streamed.find("phase_advanced") == std::string::npos;
    });
  });
  std::this_thread::sleep_for(std::chrono::milliseconds(300));
  http.post("/workshops/W1/phase/advance", json::object(), api.fac);
  follower.join();
  CHECK(streamed.find("workshop_created") != std::string::npos);
  CHECK(streamed.find("phase_advanced") != std::string::npos);

  server.stop();
}
