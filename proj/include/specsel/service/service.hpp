#pragma once

#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "specsel/error.hpp"
#include "specsel/service/config.hpp"

namespace specsel {

/// Transport-independent request; `path` has no query string.
struct Request {
  std::string method;
  std::string path;
  std::map<std::string, std::string> query;
  std::string body;
};

struct Response {
  int status = 200;
  std::string body;  // JSON document
};

/// Timestamp source for history entries (ISO 8601 UTC by default).
using Clock = std::function<std::string()>;
std::string utc_timestamp();

/// Session and dataset state behind the HTTP API.
///
///   GET  /health
///   POST /datasets                      {kind, csv, target?, name?, registry?, registry_text?}
///   GET  /datasets/{id}
///   GET  /datasets/{id}/correlation
///   GET  /datasets/{id}/scatter?x=&y=&grid=
///   POST /sessions                      {dataset_id, k?, seed?}
///   GET  /sessions/{id}
///   POST /sessions/{id}/features        {name, direction}
///   POST /sessions/{id}/jobs            {kind, m?, k?, seed?}
///   GET  /sessions/{id}/report
///   GET  /sessions/{id}/wavelengths
///   GET  /jobs/{id}
///
/// Errors come back as {code, message, details}. State lives under
/// config.data_dir and is reloaded on construction; documents that fail to load
/// are listed by load_errors() and skipped.
class Service {
 public:
  explicit Service(ServiceConfig config, Clock clock = utc_timestamp);
  ~Service();

  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  Response handle(const Request& request);

  /// Blocks until every submitted job has finished.
  void wait_idle();

  const std::vector<std::string>& load_errors() const;
  const ServiceConfig& config() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// HTTP status for an error code.
int http_status(ErrorCode code);

}  // namespace specsel
