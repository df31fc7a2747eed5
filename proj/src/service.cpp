#include "devink/service.hpp"

#include <cmath>
#include <fstream>

#include <httplib.h>
#include <json.hpp>

#include "devink/error.hpp"
#include "devink/pipeline.hpp"

namespace devink::service {

using ordered_json = nlohmann::ordered_json;

namespace {

Response error(int status, std::string_view code, const std::string& message) {
  ordered_json j;
  j["error"] = {{"code", code}, {"message", message}};
  return {status, j.dump()};
}

ordered_json number(double v) { return std::isfinite(v) ? ordered_json(v) : ordered_json(nullptr); }

}  // namespace

Service::Service(std::optional<Model> model, std::optional<std::filesystem::path> record_path)
    : model_(std::move(model)), record_path_(std::move(record_path)) {}

Response Service::recognize(std::string_view body) const {
  if (!model_) return error(503, "model_not_loaded", "no model is loaded");

  ordered_json request;
  try {
    request = ordered_json::parse(body);
  } catch (const ordered_json::parse_error& e) {
    return error(400, "malformed_json", e.what());
  }
  if (!request.is_object()) return error(400, "invalid_request", "body must be a JSON object");
  if (!request.contains("points")) return error(400, "invalid_request", "missing field 'points'");

  int top = 5;
  if (auto it = request.find("top"); it != request.end()) {
    if (!it->is_number_integer() || it->get<std::int64_t>() < 1) {
      return error(400, "invalid_request", "'top' must be an integer >= 1");
    }
    top = static_cast<int>(std::min<std::int64_t>(it->get<std::int64_t>(), kPrimitiveCount));
  }
  bool y_down = true;
  if (auto it = request.find("y_down"); it != request.end()) {
    if (!it->is_boolean()) return error(400, "invalid_request", "'y_down' must be a boolean");
    y_down = it->get<bool>();
  }
  std::optional<PrimitiveId> label;
  if (auto it = request.find("label"); it != request.end() && !it->is_null()) {
    if (!it->is_string()) return error(400, "invalid_label", "'label' must be a string");
    try {
      label = PrimitiveId::from_name(it->get<std::string>());
    } catch (const DataError& e) {
      return error(400, "invalid_label", e.what());
    }
  }

  if (auto it = request.find("id"); it != request.end() && !it->is_string()) {
    return error(400, "invalid_request", "'id' must be a string");
  }
  ordered_json record;
  record["id"] = request.value("id", std::string("request"));
  record["label"] = nullptr;
  record["y_down"] = y_down;
  record["points"] = request["points"];

  std::string rejection;
  std::optional<Stroke> stroke;
  try {
    stroke = parse_stroke_record(record.dump(), 1, nullptr, &rejection);
  } catch (const ParseError& e) {
    return error(400, "invalid_request", e.what());
  }
  if (!stroke) return error(400, "invalid_stroke", rejection);

  const double flip = y_down ? -1.0 : 1.0;
  ordered_json response;
  try {
    const auto f = pipeline::extract(*stroke, model_->config);
    const auto ranking = pipeline::rank(*model_, f);

    ordered_json candidates = ordered_json::array();
    const auto count = std::min(ranking.size(), static_cast<std::size_t>(top));
    for (std::size_t i = 0; i < count; ++i) {
      candidates.push_back({{"name", std::string(ranking[i].id.name())},
                            {"rank", i + 1},
                            {"score", number(ranking[i].score)}});
    }
    ordered_json smoothed = ordered_json::array();
    for (const auto& c : f.smoothed) smoothed.push_back({c.x, flip * c.y});
    ordered_json critical = ordered_json::array();
    for (const auto& c : f.critical.coords) critical.push_back({c.x, flip * c.y});

    response["candidates"] = std::move(candidates);
    response["smoothed"] = std::move(smoothed);
    response["critical_points"] = std::move(critical);
    response["feature"] = f.fdf;
  } catch (const DataError& e) {
    return error(400, "invalid_stroke", e.what());
  }

  bool recorded = false;
  if (label && record_path_) {
    const std::lock_guard lock(record_mutex_);
    std::ofstream out(*record_path_, std::ios::binary | std::ios::app);
    out << format_stroke_record(stroke->with_label(label)) << '\n';
    if (!out) return error(500, "record_failed", "cannot append to " + record_path_->string());
    recorded = true;
  }
  response["recorded"] = recorded;
  return {200, response.dump()};
}

Response Service::primitives() const {
  ordered_json list = ordered_json::array();
  const auto names = primitive_names();
  for (std::size_t i = 0; i < names.size(); ++i) {
    list.push_back({{"index", i + 1}, {"name", std::string(names[i])}});
  }
  return {200, list.dump()};
}

Response Service::health() const {
  ordered_json j;
  j["status"] = "ok";
  if (model_) {
    j["model_kind"] = to_string(model_->kind());
    j["feature_kind"] = features::to_string(model_->config.feature);
    j["preprocess"] = preprocess::to_string(model_->config.preprocess);
  } else {
    j["model_kind"] = nullptr;
    j["feature_kind"] = nullptr;
    j["preprocess"] = nullptr;
  }
  j["registry"] = kRegistryVersion;
  return {200, j.dump()};
}

struct HttpServer::Impl {
  httplib::Server server;
};

HttpServer::HttpServer(const Service& service) : impl_(std::make_unique<Impl>()) {
  auto& srv = impl_->server;
  auto reply = [](httplib::Response& res, const Response& r) {
    res.status = r.status;
    res.set_content(r.body, "application/json");
  };
  srv.set_default_headers({{"Access-Control-Allow-Origin", "*"},
                           {"Access-Control-Allow-Methods", "GET, POST, OPTIONS"},
                           {"Access-Control-Allow-Headers", "Content-Type"}});
  srv.Post("/api/recognize", [&service, reply](const httplib::Request& req, httplib::Response& res) {
    reply(res, service.recognize(req.body));
  });
  srv.Get("/api/primitives", [&service, reply](const httplib::Request&, httplib::Response& res) {
    reply(res, service.primitives());
  });
  srv.Get("/api/health", [&service, reply](const httplib::Request&, httplib::Response& res) {
    reply(res, service.health());
  });
  srv.Options(R"(/api/.*)", [](const httplib::Request&, httplib::Response& res) {
    res.status = 204;
  });
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind(const std::string& host, int port) {
  if (port == 0) {
    const int bound = impl_->server.bind_to_any_port(host);
    if (bound <= 0) throw IoError("cannot bind to " + host);
    return bound;
  }
  if (!impl_->server.bind_to_port(host, port)) {
    throw IoError("cannot bind to " + host + ":" + std::to_string(port));
  }
  return port;
}

void HttpServer::listen() { impl_->server.listen_after_bind(); }

void HttpServer::stop() {
  if (impl_) impl_->server.stop();
}

}  // namespace devink::service
