#include "geomir/http_server.hpp"

#include <httplib.h>

#include "geomir/error.hpp"

namespace geomir {

using nlohmann::json;

int http_status(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::UndecodableImage:
    case ErrorKind::DegenerateImage:
    case ErrorKind::ParseError:
    case ErrorKind::InvalidConfig:
    case ErrorKind::CannotReleaseRoot:
      return 400;
    case ErrorKind::UnknownSession:
    case ErrorKind::UnknownParticle:
    case ErrorKind::UnknownImage:
      return 404;
    case ErrorKind::SessionBusy:
      return 409;
    case ErrorKind::EmptyIndex:
      return 422;
    default:
      return 500;
  }
}

struct HttpServer::Impl {
  std::shared_ptr<SessionStore> store;
  httplib::Server server;
};

namespace {

void send_json(httplib::Response& res, const json& body, int status = 200) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void send_error(httplib::Response& res, int status, std::string_view name, const std::string& detail) {
  send_json(res, {{"error", name}, {"detail", detail}}, status);
}

template <typename F>
httplib::Server::Handler guarded(F&& body) {
  return [body = std::forward<F>(body)](const httplib::Request& req, httplib::Response& res) {
    try {
      body(req, res);
    } catch (const Error& e) {
      send_error(res, http_status(e.kind()), e.name(), e.detail());
    } catch (const json::exception& e) {
      send_error(res, 400, "ParseError", e.what());
    } catch (const std::exception& e) {
      send_error(res, 500, "InternalError", e.what());
    }
  };
}

json body_json(const httplib::Request& req) {
  try {
    return json::parse(req.body);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::ParseError, std::string("request body: ") + e.what());
  }
}

int int_param(const httplib::Request& req, const char* name, int fallback) {
  if (!req.has_param(name)) return fallback;
  const std::string value = req.get_param_value(name);
  try {
    std::size_t used = 0;
    const int parsed = std::stoi(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return parsed;
  } catch (const std::exception&) {
    throw Error(ErrorKind::InvalidConfig, std::string(name) + " must be an integer, got \"" + value + "\"");
  }
}

}  // namespace

HttpServer::HttpServer(std::shared_ptr<SessionStore> store) : impl_(std::make_unique<Impl>()) {
  impl_->store = std::move(store);
  auto& srv = impl_->server;
  SessionStore* sessions = impl_->store.get();

  srv.set_default_headers({{"Access-Control-Allow-Origin", "*"},
                           {"Access-Control-Allow-Headers", "Content-Type"}});
  srv.Options(R"(.*)", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });

  srv.Get("/healthz", guarded([sessions](const httplib::Request&, httplib::Response& res) {
            send_json(res, {{"status", "ok"}, {"images", sessions->index().size()}});
          }));

  srv.Post("/query", guarded([sessions](const httplib::Request& req, httplib::Response& res) {
             std::string bytes;
             if (req.is_multipart_form_data()) {
               if (!req.has_file("image")) throw Error(ErrorKind::UndecodableImage, "multipart field \"image\" missing");
               bytes = req.get_file_value("image").content;
             } else {
               bytes = req.body;
             }
             QueryConfig cfg;
             cfg.radius = int_param(req, "radius", cfg.radius);
             const int top = int_param(req, "top", static_cast<int>(cfg.max_images));
             if (top < 1) throw Error(ErrorKind::InvalidConfig, "top must be >= 1");
             cfg.max_images = static_cast<std::size_t>(top);
             const auto* data = reinterpret_cast<const std::uint8_t*>(bytes.data());
             auto created = sessions->create({data, bytes.size()}, cfg);
             send_json(res, {{"session", created.session->id()},
                             {"result", std::move(created.result)},
                             {"frame", *created.session->frame()}});
           }));

  srv.Post(R"(/session/([^/]+)/step)", guarded([sessions](const httplib::Request& req, httplib::Response& res) {
             send_json(res, sessions->step(req.matches[1].str(), int_param(req, "n", 1)));
           }));

  srv.Get(R"(/session/([^/]+)/frame)", guarded([sessions](const httplib::Request& req, httplib::Response& res) {
            send_json(res, sessions->frame(req.matches[1].str()));
          }));

  srv.Post(R"(/session/([^/]+)/pin)", guarded([sessions](const httplib::Request& req, httplib::Response& res) {
             const json body = body_json(req);
             send_json(res, sessions->pin(req.matches[1].str(), body.at("particle").get<std::string>(),
                                          body.at("x").get<double>(), body.at("y").get<double>()));
           }));

  srv.Post(R"(/session/([^/]+)/release)", guarded([sessions](const httplib::Request& req, httplib::Response& res) {
             const json body = body_json(req);
             send_json(res, sessions->release(req.matches[1].str(), body.at("particle").get<std::string>()));
           }));

  srv.Get(R"(/thumb/([^/]+))", guarded([sessions](const httplib::Request& req, httplib::Response& res) {
            const auto png = sessions->thumbnail(req.matches[1].str());
            res.set_content(std::string(png.begin(), png.end()), "image/png");
          }));
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind(const std::string& host, int port) {
  if (port == 0) return impl_->server.bind_to_any_port(host);
  return impl_->server.bind_to_port(host, port) ? port : -1;
}

bool HttpServer::listen() { return impl_->server.listen_after_bind(); }

void HttpServer::stop() {
  if (impl_ && impl_->server.is_running()) impl_->server.stop();
}

}  // namespace geomir
