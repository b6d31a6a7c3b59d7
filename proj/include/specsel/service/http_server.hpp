#pragma once

#include <memory>
#include <string>

#include "specsel/service/service.hpp"

namespace specsel {

/// Serves a Service over HTTP/1.1 with cpp-httplib.
class HttpServer {
 public:
  explicit HttpServer(Service& service);
  ~HttpServer();

  /// Binds host:port (port 0 picks a free one) and returns the bound port.
  /// Throws io when binding fails.
  int bind(const std::string& host, int port);
  /// Serves until stop() is called. Requires a successful bind().
  void listen();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace specsel
