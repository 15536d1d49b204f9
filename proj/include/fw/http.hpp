#pragma once

#include <atomic>
#include <map>
#include <memory>
#include <string>
#include <thread>

#include "fw/service.hpp"

namespace fw {

// HTTP transport over ApiRouter. GET /workshops/{id}/events?follow=true keeps
// the response open and streams new events as NDJSON chunks.
class HttpServer {
 public:
  explicit HttpServer(ApiRouter& router);
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  // Binds (port 0 picks a free one) and serves on a background thread.
  // Returns the bound port.
  int start(const std::string& host, int port);
  // Serves on the calling thread until stop().
  void run(const std::string& host, int port);
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// Client side of the wire API. Non-2xx responses are rethrown as fw::Error
// with the code named in the error body.
class ApiClient {
 public:
  using Query = std::map<std::string, std::string>;
  virtual ~ApiClient() = default;

  virtual ApiResponse send(const std::string& method, const std::string& path, const std::string& body,
                           const std::string& token, const Query& query) = 0;

  json get(const std::string& path, const std::string& token = {}, const Query& query = {});
  json post(const std::string& path, const json& body, const std::string& token = {});
  // Non-JSON reads (export, event feed).
  std::string get_text(const std::string& path, const std::string& token = {}, const Query& query = {});
};

class InProcessClient final : public ApiClient {
 public:
  explicit InProcessClient(ApiRouter& router) : router_(router) {}
  ApiResponse send(const std::string& method, const std::string& path, const std::string& body,
                   const std::string& token, const Query& query) override;

 private:
  ApiRouter& router_;
};

class HttpClient final : public ApiClient {
 public:
  explicit HttpClient(const std::string& base_url);  // "http://host:port"
  ~HttpClient() override;
  ApiResponse send(const std::string& method, const std::string& path, const std::string& body,
                   const std::string& token, const Query& query) override;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// Throws the fw::Error encoded in a failed response; no-op on 2xx.
void raise_for_status(const ApiResponse& response);

}  // namespace fw
