#include "specsel/service/http_server.hpp"

#include <httplib.h>

namespace specsel {

struct HttpServer::Impl {
  Service& service;
  httplib::Server server;

  explicit Impl(Service& s) : service(s) {
    auto handler = [this](const httplib::Request& req, httplib::Response& res) {
      Request request{req.method, req.path, {}, req.body};
      for (const auto& [key, value] : req.params) request.query.emplace(key, value);
      Response response = service.handle(request);
      res.status = response.status;
      res.set_content(response.body, "application/json");
    };
    const std::string any = R"(/.*)";
    server.Get(any, handler);
    server.Post(any, handler);
    server.Put(any, handler);
    server.Delete(any, handler);
    server.Patch(any, handler);
  }
};

HttpServer::HttpServer(Service& service) : impl_(std::make_unique<Impl>(service)) {}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind(const std::string& host, int port) {
  const int bound = port == 0 ? impl_->server.bind_to_any_port(host)
                              : (impl_->server.bind_to_port(host, port) ? port : -1);
  if (bound < 0) fail(ErrorCode::io, "cannot listen on " + host + ":" + std::to_string(port));
  return bound;
}

void HttpServer::listen() { impl_->server.listen_after_bind(); }

void HttpServer::stop() { impl_->server.stop(); }

}  // namespace specsel
