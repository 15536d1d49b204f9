#include "fw/http.hpp"

#include <chrono>
#include <condition_variable>

#include "httplib.h"

#include "fw/error.hpp"

namespace fw {
namespace {

constexpr auto kTickInterval = std::chrono::milliseconds(250);
constexpr auto kStreamPoll = std::chrono::milliseconds(250);

std::string bearer(const httplib::Request& req) {
  const std::string h = req.get_header_value("Authorization");
  constexpr std::string_view prefix = "Bearer ";
  if (h.compare(0, prefix.size(), prefix) == 0) return h.substr(prefix.size());
  return {};
}

std::string encode_query(const ApiClient::Query& query) {
  if (query.empty()) return {};
  httplib::Params params(query.begin(), query.end());
  return "?" + httplib::detail::params_to_query_str(params);
}

}  // namespace

struct HttpServer::Impl {
  ApiRouter& router;
  httplib::Server server;
  std::thread serve_thread;
  std::thread tick_thread;
  std::atomic<bool> stopping{false};
  std::mutex tick_mu;
  std::condition_variable tick_cv;

  explicit Impl(ApiRouter& r) : router(r) { install(); }

  void reply(const ApiResponse& r, httplib::Response& res) {
    res.status = r.status;
    res.set_content(r.body, r.content_type);
  }

  void install() {
    auto handler = [this](const httplib::Request& req, httplib::Response& res) {
      ApiRequest ar;
      ar.method = req.method;
      ar.path = req.path;
      for (const auto& [k, v] : req.params) ar.query[k] = v;
      ar.body = req.body;
      ar.token = bearer(req);

      const bool follow = ar.method == "GET" && ar.query.count("follow") != 0 &&
                          (ar.query["follow"] == "true" || ar.query["follow"] == "1") &&
                          ar.path.size() > 7 && ar.path.compare(ar.path.size() - 7, 7, "/events") == 0;
      if (!follow) {
        reply(router.handle(ar), res);
        return;
      }
      // Authenticate and validate through the router first; it also yields
      // the backlog.
      ApiResponse first = router.handle(ar);
      if (first.status != 200) {
        reply(first, res);
        return;
      }
      follow_stream(ar, std::move(first), res);
    };
    server.Get(R"(/workshops.*)", handler);
    server.Post(R"(/workshops.*)", handler);
  }

  void follow_stream(ApiRequest ar, ApiResponse backlog, httplib::Response& res) {
    auto last = std::make_shared<std::uint64_t>(0);
    auto pending = std::make_shared<std::string>(std::move(backlog.body));
    auto from_it = ar.query.find("from_seq");
    *last = from_it == ar.query.end() ? 0 : std::stoull(from_it->second);
    // Track the highest seq seen in the backlog (it already contains
    // everything up to the log's tail at request time).
    for (std::size_t pos = 0; pos < pending->size();) {
      std::size_t nl = pending->find('\n', pos);
      if (nl == std::string::npos) break;
      auto j = json::parse(pending->substr(pos, nl - pos));
      *last = std::max<std::uint64_t>(*last, j.at("seq").get<std::uint64_t>());
      pos = nl + 1;
    }
    auto req = std::make_shared<ApiRequest>(std::move(ar));
    res.set_chunked_content_provider(
        "application/x-ndjson", [this, last, pending, req](std::size_t, httplib::DataSink& sink) {
          if (!pending->empty()) {
            sink.write(pending->data(), pending->size());
            pending->clear();
          }
          while (!stopping) {
            if (!sink.is_writable()) return false;
            const std::string id = req->path.substr(11, req->path.size() - 11 - 7);  // "/workshops/" .. "/events"
            std::vector<Event> batch;
            try {
              batch = router.service().log(id).wait_since(*last, kStreamPoll);
            } catch (const Error&) {
              return false;
            }
            if (batch.empty()) continue;
            // Re-run the query for the new range so visibility rules stay in one place.
            ApiRequest next = *req;
            next.query["from_seq"] = std::to_string(*last);
            ApiResponse r = router.handle(next);
            if (r.status != 200) return false;
            *last = batch.back().seq;
            if (!r.body.empty() && !sink.write(r.body.data(), r.body.size())) return false;
            return true;
          }
          sink.done();
          return true;
        });
  }

  void ticker() {
    std::unique_lock lock(tick_mu);
    while (!stopping) {
      tick_cv.wait_for(lock, kTickInterval);
      if (stopping) break;
      try {
        router.service().tick_all();
      } catch (const std::exception&) {
        // Deadline enforcement retries on the next tick and on every command.
      }
    }
  }
};

HttpServer::HttpServer(ApiRouter& router) : impl_(std::make_unique<Impl>(router)) {}

HttpServer::~HttpServer() { stop(); }

int HttpServer::start(const std::string& host, int port) {
  int bound = port;
  if (port == 0) {
    bound = impl_->server.bind_to_any_port(host);
  } else if (!impl_->server.bind_to_port(host, port)) {
    bound = -1;
  }
  if (bound < 0) fail(ErrorCode::Io, "cannot bind " + host + ":" + std::to_string(port));
  impl_->serve_thread = std::thread([this] { impl_->server.listen_after_bind(); });
  impl_->tick_thread = std::thread([this] { impl_->ticker(); });
  impl_->server.wait_until_ready();
  return bound;
}

void HttpServer::run(const std::string& host, int port) {
  start(host, port);
  if (impl_->serve_thread.joinable()) impl_->serve_thread.join();
}

void HttpServer::stop() {
  if (!impl_) return;
  impl_->stopping = true;
  impl_->tick_cv.notify_all();
  impl_->server.stop();
  if (impl_->serve_thread.joinable() && impl_->serve_thread.get_id() != std::this_thread::get_id()) {
    impl_->serve_thread.join();
  }
  if (impl_->tick_thread.joinable()) impl_->tick_thread.join();
}

// ---- clients ----

void raise_for_status(const ApiResponse& r) {
  if (r.status >= 200 && r.status < 300) return;
  std::string name;
  std::string message = r.body;
  try {
    json j = json::parse(r.body);
    name = j.value("error", std::string());
    message = j.value("message", r.body);
  } catch (const json::exception&) {
  }
  auto code = error_from_name(name);
  if (!code) code = r.status == 404 ? ErrorCode::NotFound : ErrorCode::Io;
  throw Error(*code, message);
}

json ApiClient::get(const std::string& path, const std::string& token, const Query& query) {
  ApiResponse r = send("GET", path, {}, token, query);
  raise_for_status(r);
  return json::parse(r.body);
}

json ApiClient::post(const std::string& path, const json& body, const std::string& token) {
  ApiResponse r = send("POST", path, body.dump(), token, {});
  raise_for_status(r);
  return json::parse(r.body);
}

std::string ApiClient::get_text(const std::string& path, const std::string& token, const Query& query) {
  ApiResponse r = send("GET", path, {}, token, query);
  raise_for_status(r);
  return r.body;
}

ApiResponse InProcessClient::send(const std::string& method, const std::string& path,
                                  const std::string& body, const std::string& token,
                                  const Query& query) {
  ApiRequest req;
  req.method = method;
  req.path = path;
  req.query = query;
  req.body = body;
  req.token = token;
  return router_.handle(req);
}

struct HttpClient::Impl {
  httplib::Client client;
  explicit Impl(const std::string& url) : client(url) {
    client.set_connection_timeout(5);
    client.set_read_timeout(30);
  }
};

HttpClient::HttpClient(const std::string& base_url) : impl_(std::make_unique<Impl>(base_url)) {}
HttpClient::~HttpClient() = default;

ApiResponse HttpClient::send(const std::string& method, const std::string& path, const std::string& body,
                             const std::string& token, const Query& query) {
  httplib::Headers headers;
  if (!token.empty()) headers.emplace("Authorization", "Bearer " + token);
  const std::string target = path + encode_query(query);
  httplib::Result res = method == "POST"
                            ? impl_->client.Post(target, headers, body, "application/json")
                            : impl_->client.Get(target, headers);
  if (!res) fail(ErrorCode::Io, "HTTP " + method + " " + path + " failed: " + httplib::to_string(res.error()));
  ApiResponse out;
  out.status = res->status;
  out.body = res->body;
  out.content_type = res->get_header_value("Content-Type");
  return out;
}

}  // namespace fw
