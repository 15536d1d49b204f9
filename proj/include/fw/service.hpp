#pragma once

// Multi-workshop host and the transport-independent request router. The
// router speaks the public wire API (paths, JSON bodies, bearer tokens); the
// HTTP server and the in-process client both go through it.

#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "fw/engine.hpp"
#include "fw/error.hpp"

namespace fw {

class WorkshopService {
 public:
  struct Options {
    std::optional<std::filesystem::path> data_dir;  // nullopt = in-memory logs
    Clock* clock = nullptr;                         // nullptr = system clock
    // Token source for each new workshop, keyed by workshop id.
    std::function<TokenSource(const std::string&)> tokens;
  };

  WorkshopService();
  // Replays every "<id>.ndjson" log found in data_dir.
  explicit WorkshopService(Options options);

  std::string create_workshop(const std::string& title, const Agenda& agenda,
                              const std::vector<std::string>& issue_areas);
  std::vector<std::string> workshop_ids() const;
  bool exists(const std::string& id) const;

  // Runs `fn(Engine&)` under the workshop's writer lock, after firing any
  // expired deadline. Throws UnknownWorkshop.
  template <typename Fn>
  decltype(auto) with(const std::string& id, Fn&& fn) {
    Slot& s = slot(id);
    std::lock_guard lock(s.mu);
    s.engine->tick();
    return fn(*s.engine);
  }

  // The log itself is internally synchronized; readers need no lock.
  const EventLog& log(const std::string& id);

  // Closes expired steps in every workshop.
  void tick_all();

 private:
  struct Slot {
    std::mutex mu;
    std::unique_ptr<EventLog> log;
    std::unique_ptr<Engine> engine;
  };

  Slot& slot(const std::string& id);
  std::unique_ptr<Slot> make_slot(const std::string& id);

  Options options_;
  std::unique_ptr<Clock> owned_clock_;
  mutable std::mutex mu_;
  std::map<std::string, std::unique_ptr<Slot>> slots_;
  int next_id_ = 1;
};

struct ApiRequest {
  std::string method;  // "GET" or "POST"
  std::string path;    // "/workshops/W1/ideas"
  std::map<std::string, std::string> query;
  std::string body;
  std::string token;  // bearer token, empty when absent
};

struct ApiResponse {
  int status = 200;
  std::string content_type = "application/json";
  std::string body;
};

int http_status(ErrorCode code) noexcept;
ApiResponse error_response(const Error& e);

class ApiRouter {
 public:
  explicit ApiRouter(WorkshopService& service) : service_(service) {}
  // Never throws for request-level failures; they become error responses.
  ApiResponse handle(const ApiRequest& request);

  WorkshopService& service() { return service_; }

 private:
  json dispatch(const ApiRequest& req, int& status, ApiResponse& raw, bool& is_raw);
  WorkshopService& service_;
};

// Event kinds streamed to participants; the facilitator sees every kind.
bool is_public_event(const std::string& kind);
// Event as a participant may see it (per-alias snapshots stripped).
json public_event_json(const Event& e, bool facilitator);

}  // namespace fw
