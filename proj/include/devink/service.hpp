#pragma once

#include <filesystem>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>

#include "devink/model.hpp"

namespace devink::service {

/// Status code plus JSON body.
struct Response {
  int status = 200;
  std::string body;
};

/// Request handlers for the recognizer, independent of the HTTP transport.
///
/// POST /api/recognize  {"points": [[x, y, t], ...], "top": 5, "y_down": true,
///                       "id": "...", "label": "<name>"}
///   `top`, `y_down` (default true), `id` and `label` are optional; `label`
///   is only used when recording is enabled.
/// GET  /api/primitives
/// GET  /api/health
///
/// Errors come back as {"error": {"code": "...", "message": "..."}}.
class Service {
 public:
  explicit Service(std::optional<Model> model,
                   std::optional<std::filesystem::path> record_path = std::nullopt);

  Response recognize(std::string_view body) const;
  Response primitives() const;
  Response health() const;

  bool has_model() const noexcept { return model_.has_value(); }

 private:
  std::optional<Model> model_;
  std::optional<std::filesystem::path> record_path_;
  mutable std::mutex record_mutex_;
};

/// HTTP/1.1 front end with permissive CORS for a locally served UI.
class HttpServer {
 public:
  explicit HttpServer(const Service& service);
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  /// Binds; port 0 picks a free port. Returns the bound port. Throws IoError.
  int bind(const std::string& host, int port);
  /// Serves until stop() is called. bind() must have succeeded.
  void listen();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace devink::service
