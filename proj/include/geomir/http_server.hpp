#pragma once

#include <memory>
#include <string>

#include "geomir/session.hpp"

namespace geomir {

/// HTTP status for a library error.
int http_status(ErrorKind kind);

/// JSON facade over a SessionStore.
///
///   POST /query                      multipart field "image" or raw body
///                                    (?radius=R&top=N) -> {session, result}
///   POST /session/{id}/step?n=K      advance K ticks -> frame
///   GET  /session/{id}/frame         latest frame
///   POST /session/{id}/pin           {"particle","x","y"} -> frame
///   POST /session/{id}/release       {"particle"} -> frame
///   GET  /thumb/{image_id}           PNG, longest side <= 128
///   GET  /healthz
///
/// Errors come back as {"error": Name, "detail": text}.
class HttpServer {
 public:
  explicit HttpServer(std::shared_ptr<SessionStore> store);
  ~HttpServer();

  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  /// Binds; port 0 picks a free port. Returns the bound port or -1.
  int bind(const std::string& host, int port);
  /// Blocks until stop().
  bool listen();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace geomir
