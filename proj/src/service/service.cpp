#include "specsel/service/service.hpp"

#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <sstream>
#include <unordered_map>

#include "specsel/io/report_json.hpp"
#include "specsel/select/compare.hpp"
#include "specsel/select/ranking.hpp"
#include "specsel/select/wavelengths.hpp"
#include "specsel/service/persistence.hpp"
#include "specsel/service/worker_pool.hpp"
#include "specsel/spectra/dataset.hpp"
#include "specsel/spectra/feature_table.hpp"
#include "specsel/stats/correlation.hpp"
#include "specsel/stats/hcluster.hpp"
#include "specsel/stats/histogram.hpp"
#include "specsel/stats/kde.hpp"

namespace specsel {

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

int http_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_argument:
    case ErrorCode::parse:
    case ErrorCode::out_of_range:
      return 400;
    case ErrorCode::not_found:
      return 404;
    case ErrorCode::busy:
      return 409;
    case ErrorCode::numeric:
      return 422;
    case ErrorCode::io:
    case ErrorCode::internal:
      return 500;
  }
  return 500;
}

namespace {

// Error carrying a structured `details` object for the response body.
class DetailedError : public Error {
 public:
  DetailedError(ErrorCode code, const std::string& message, json details)
      : Error(code, message), details_(std::move(details)) {}
  const json& details() const noexcept { return details_; }

 private:
  json details_;
};

Response json_response(int status, const json& body) { return {status, dump(body)}; }

Response error_response(ErrorCode code, const std::string& message, json details) {
  return json_response(http_status(code), json{{"code", std::string(to_string(code))},
                                               {"message", message},
                                               {"details", std::move(details)}});
}

json parse_body(const std::string& body) {
  try {
    json j = json::parse(body);
    if (!j.is_object()) fail(ErrorCode::parse, "request body must be a JSON object");
    return j;
  } catch (const json::parse_error& e) {
    throw DetailedError(ErrorCode::parse, std::string("malformed JSON body: ") + e.what(),
                        json{{"byte", e.byte}});
  }
}

template <typename T>
std::optional<T> optional_field(const json& body, const char* key) {
  auto it = body.find(key);
  if (it == body.end() || it->is_null()) return std::nullopt;
  try {
    return it->get<T>();
  } catch (const json::exception&) {
    fail(ErrorCode::invalid_argument, std::string("field '") + key + "' has the wrong type");
  }
}

template <typename T>
T required_field(const json& body, const char* key) {
  auto v = optional_field<T>(body, key);
  if (!v) fail(ErrorCode::invalid_argument, std::string("missing field '") + key + "'");
  return *v;
}

// Counts in request bodies must be non-negative integers; JSON floats like 5.0 and
// negative numbers are rejected instead of silently converted.
std::optional<std::uint64_t> optional_count(const json& body, const char* key) {
  auto it = body.find(key);
  if (it == body.end() || it->is_null()) return std::nullopt;
  if (!it->is_number_unsigned())
    fail(ErrorCode::invalid_argument, std::string("field '") + key + "' must be a non-negative integer");
  return it->get<std::uint64_t>();
}

std::size_t query_size(const Request& request, const std::string& key, std::size_t fallback) {
  auto it = request.query.find(key);
  if (it == request.query.end()) return fallback;
  std::size_t value = 0;
  const auto& text = it->second;
  auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || end != text.data() + text.size())
    fail(ErrorCode::invalid_argument, "query parameter '" + key + "' must be a non-negative integer");
  return value;
}

std::vector<std::string> split_path(const std::string& path) {
  std::vector<std::string> parts;
  std::string current;
  for (char c : path) {
    if (c == '/') {
      if (!current.empty()) parts.push_back(std::move(current));
      current.clear();
    } else {
      current.push_back(c);
    }
  }
  if (!current.empty()) parts.push_back(std::move(current));
  return parts;
}

std::size_t sturges_bins(std::size_t n) {
  return static_cast<std::size_t>(std::ceil(std::log2(static_cast<double>(n)))) + 1;
}

std::uint64_t id_number(const std::string& id, std::string_view prefix) {
  if (id.size() <= prefix.size() || id.compare(0, prefix.size(), prefix) != 0) return 0;
  std::uint64_t value = 0;
  auto [end, ec] = std::from_chars(id.data() + prefix.size(), id.data() + id.size(), value);
  return (ec == std::errc{} && end == id.data() + id.size()) ? value : 0;
}

enum class JobKind { regress, compare, autoselect };
enum class JobStatus { queued, running, done, failed };

std::string_view to_string(JobKind kind) {
  switch (kind) {
    case JobKind::regress: return "regress";
    case JobKind::compare: return "compare";
    case JobKind::autoselect: return "autoselect";
  }
  return "regress";
}

std::string_view to_string(JobStatus status) {
  switch (status) {
    case JobStatus::queued: return "queued";
    case JobStatus::running: return "running";
    case JobStatus::done: return "done";
    case JobStatus::failed: return "failed";
  }
  return "failed";
}

JobKind parse_job_kind(const std::string& text) {
  if (text == "regress") return JobKind::regress;
  if (text == "compare") return JobKind::compare;
  if (text == "autoselect") return JobKind::autoselect;
  fail(ErrorCode::invalid_argument, "job kind must be regress, compare or autoselect, got '" + text + "'");
}

struct Dataset {
  std::string id;
  json source;  // the upload as stored on disk
  FeatureTable table;
  IndexRegistry registry;
  json diagnostics;

  mutable std::mutex correlation_mutex;
  mutable std::optional<std::string> correlation_body;

  std::vector<std::string> labels() const {
    auto out = table.feature_names;
    out.push_back(table.target_name);
    return out;
  }
  std::vector<double> column(const std::string& name) const {
    if (auto j = table.feature_index(name)) return table.values.column(*j);
    if (name == table.target_name) return table.target;
    throw DetailedError(ErrorCode::not_found, "unknown feature '" + name + "'",
                        json{{"available", labels()}});
  }
};

struct SessionResults {
  std::string job_id;
  std::optional<RegressionReport> report;
  std::optional<FeatureRanking> ranking;
  std::optional<ComparisonRow> comparison;
};

struct Session {
  std::string id;
  std::shared_ptr<const Dataset> dataset;

  std::mutex mutex;  // single writer for everything below
  FeatureSet feature_set;
  std::size_t k = 5;
  std::uint64_t seed = 0;
  std::vector<json> history;
  std::string active_job;
  std::shared_ptr<const SessionResults> results = std::make_shared<SessionResults>();
};

struct Job {
  std::string id;
  std::string session_id;
  JobKind kind = JobKind::regress;
  std::size_t k = 0;
  std::uint64_t seed = 0;
  std::optional<std::size_t> m;

  std::atomic<JobStatus> status{JobStatus::queued};
  std::atomic<double> progress{0.0};
  std::mutex error_mutex;
  std::string error;

  void advance(double value) {
    value = std::clamp(value, 0.0, 1.0);
    double current = progress.load();
    while (value > current && !progress.compare_exchange_weak(current, value)) {
    }
  }
};

json history_move(std::uint64_t seq, const std::string& time, const std::string& name,
                  Direction direction) {
  return json{{"seq", seq}, {"time", time}, {"op", "move"}, {"name", name},
              {"direction", std::string(to_string(direction))}};
}

json history_replace(std::uint64_t seq, const std::string& time,
                     const std::vector<std::string>& selected, const std::string& job_id) {
  return json{{"seq", seq}, {"time", time}, {"op", "replace"}, {"selected", selected},
              {"job", job_id}};
}

FeatureSet replay_history(const std::vector<std::string>& columns, const std::vector<json>& history) {
  FeatureSet fs = FeatureSet::all_selected(columns);
  std::uint64_t expected = 1;
  for (const auto& entry : history) {
    if (entry.at("seq").get<std::uint64_t>() != expected++)
      fail(ErrorCode::parse, "history sequence numbers are not consecutive");
    const auto op = entry.at("op").get<std::string>();
    if (op == "move") {
      fs.move(entry.at("name").get<std::string>(),
              parse_direction(entry.at("direction").get<std::string>()), columns);
    } else if (op == "replace") {
      fs = FeatureSet::from_selected(columns, entry.at("selected").get<std::vector<std::string>>());
    } else {
      fail(ErrorCode::parse, "unknown history op '" + op + "'");
    }
  }
  return fs;
}

std::string feature_set_hash(const FeatureSet& fs) { return fnv1a_hex(dump(json(fs))); }

json results_json(const SessionResults& r) {
  json j = json::object();
  j["job_id"] = r.job_id.empty() ? json(nullptr) : json(r.job_id);
  j["report"] = r.report ? json(*r.report) : json(nullptr);
  j["ranking"] = r.ranking ? json(*r.ranking) : json(nullptr);
  j["comparison"] = r.comparison ? json(*r.comparison) : json(nullptr);
  return j;
}

SessionResults results_from_json(const json& j) {
  SessionResults r;
  if (!j.at("job_id").is_null()) r.job_id = j.at("job_id").get<std::string>();
  if (!j.at("report").is_null()) r.report = j.at("report").get<RegressionReport>();
  if (!j.at("ranking").is_null()) r.ranking = j.at("ranking").get<FeatureRanking>();
  if (!j.at("comparison").is_null()) r.comparison = j.at("comparison").get<ComparisonRow>();
  return r;
}

}  // namespace

struct Service::Impl {
  ServiceConfig config;
  Clock clock;
  ModelConfig model;
  std::string default_registry_text;
  DocumentStore store;
  std::vector<std::string> errors;

  std::shared_mutex mutex;  // guards the three maps and the counters
  std::unordered_map<std::string, std::shared_ptr<const Dataset>> datasets;
  std::unordered_map<std::string, std::shared_ptr<Session>> sessions;
  std::unordered_map<std::string, std::shared_ptr<Job>> jobs;
  std::uint64_t next_session = 1;
  std::uint64_t next_job = 1;

  WorkerPool pool;  // last: joined before the state above is destroyed

  Impl(ServiceConfig c, Clock clk)
      : config(std::move(c)),
        clock(std::move(clk)),
        model(model_config_for(config)),
        default_registry_text(config.registry_file.empty()
                                  ? std::string(specsel::default_registry_text())
                                  : IndexRegistry::load(config.registry_file).to_text()),
        store(config.data_dir),
        pool(config.workers) {
    load();
  }

  // ---- datasets ----------------------------------------------------------

  std::shared_ptr<Dataset> build_dataset(const json& source) {
    auto loaded = load_dataset_source(source);
    auto ds = std::make_shared<Dataset>();
    ds->source = source;
    ds->table = std::move(loaded.table);
    ds->registry = std::move(loaded.registry);
    ds->diagnostics = std::move(loaded.diagnostics);
    return ds;
  }

  json dataset_summary(const Dataset& ds) const {
    return json{{"dataset_id", ds.id},
                {"kind", ds.source.at("kind")},
                {"name", ds.source.value("name", std::string())},
                {"n", ds.table.n()},
                {"d", ds.table.d()},
                {"feature_names", ds.table.feature_names},
                {"target_name", ds.table.target_name},
                {"diagnostics", ds.diagnostics}};
  }

  Response create_dataset(const Request& request) {
    const json body = parse_body(request.body);
    std::string registry_text;
    if (auto text = optional_field<std::string>(body, "registry_text")) {
      registry_text = *text;
    } else {
      const auto id = optional_field<std::string>(body, "registry").value_or("default");
      if (id != "default")
        fail(ErrorCode::not_found, "unknown registry '" + id + "'; use \"default\" or registry_text");
      registry_text = default_registry_text;
    }
    const json source = make_dataset_source(
        required_field<std::string>(body, "kind"), required_field<std::string>(body, "csv"),
        optional_field<std::string>(body, "target"),
        optional_field<std::string>(body, "name").value_or(""), std::move(registry_text));

    const std::string id = dataset_id(source);
    {
      std::shared_lock lock(mutex);
      if (auto it = datasets.find(id); it != datasets.end())
        return json_response(201, dataset_summary(*it->second));
    }
    auto ds = build_dataset(source);
    ds->id = id;
    std::unique_lock lock(mutex);
    auto [it, inserted] = datasets.emplace(id, ds);
    if (inserted) store.save_dataset(id, source);
    return json_response(201, dataset_summary(*it->second));
  }

  std::shared_ptr<const Dataset> find_dataset(const std::string& id) {
    std::shared_lock lock(mutex);
    auto it = datasets.find(id);
    if (it == datasets.end()) fail(ErrorCode::not_found, "unknown dataset '" + id + "'");
    return it->second;
  }

  Response correlation(const Dataset& ds) {
    std::lock_guard lock(ds.correlation_mutex);
    if (!ds.correlation_body) {
      ds.correlation_body = dump(correlation_payload(ds.id, ds.table));
    }
    return {200, *ds.correlation_body};
  }

  Response scatter(const Dataset& ds, const Request& request) {
    auto x_it = request.query.find("x");
    auto y_it = request.query.find("y");
    if (x_it == request.query.end() || y_it == request.query.end())
      fail(ErrorCode::invalid_argument, "scatter needs query parameters x and y");
    const std::size_t grid = query_size(request, "grid", 64);
    if (grid < 2 || grid > 512) fail(ErrorCode::invalid_argument, "grid must be in 2..512");

    const auto xs = ds.column(x_it->second);
    const auto ys = ds.column(y_it->second);
    const std::size_t n = xs.size();
    Matrix px(n, 1), py(n, 1), pxy(n, 2);
    json points = json::array();
    for (std::size_t i = 0; i < n; ++i) {
      px(i, 0) = pxy(i, 0) = xs[i];
      py(i, 0) = pxy(i, 1) = ys[i];
      points.push_back({xs[i], ys[i]});
    }
    const double hx = silverman_bandwidth(xs);
    const double hy = silverman_bandwidth(ys);
    const GridAxis ax = padded_axis(xs, hx, grid);
    const GridAxis ay = padded_axis(ys, hy, grid);
    const GridAxis axes_xy[] = {ax, ay};
    const std::size_t bins = sturges_bins(n);
    return json_response(
        200, json{{"dataset_id", ds.id},
                  {"x", x_it->second},
                  {"y", y_it->second},
                  {"points", points},
                  {"kde_x", kde(px, std::span(&ax, 1), std::vector<double>{hx})},
                  {"kde_y", kde(py, std::span(&ay, 1), std::vector<double>{hy})},
                  {"kde_xy", kde(pxy, axes_xy, std::vector<double>{hx, hy})},
                  {"histogram_x", histogram(xs, bins)},
                  {"histogram_y", histogram(ys, bins)}});
  }

  // ---- sessions ----------------------------------------------------------

  std::shared_ptr<Session> find_session(const std::string& id) {
    std::shared_lock lock(mutex);
    auto it = sessions.find(id);
    if (it == sessions.end()) fail(ErrorCode::not_found, "unknown session '" + id + "'");
    return it->second;
  }

  // Caller holds session.mutex.
  json session_document(const Session& s) const {
    return json{{"format_version", kFormatVersion},
                {"session_id", s.id},
                {"dataset_id", s.dataset->id},
                {"k", s.k},
                {"seed", s.seed},
                {"feature_set", s.feature_set},
                {"feature_set_hash", feature_set_hash(s.feature_set)},
                {"history", s.history},
                {"results", results_json(*s.results)}};
  }

  // Caller holds session.mutex.
  json session_view(const Session& s) const {
    const auto& r = *s.results;
    return json{{"session_id", s.id},
                {"dataset_id", s.dataset->id},
                {"k", s.k},
                {"seed", s.seed},
                {"feature_set", s.feature_set},
                {"feature_set_hash", feature_set_hash(s.feature_set)},
                {"history", s.history},
                {"active_job", s.active_job.empty() ? json(nullptr) : json(s.active_job)},
                {"results", {{"job_id", r.job_id.empty() ? json(nullptr) : json(r.job_id)},
                             {"report", r.report.has_value()},
                             {"ranking", r.ranking.has_value()},
                             {"comparison", r.comparison.has_value()}}}};
  }

  void save(const Session& s) { store.save_session(s.id, session_document(s)); }

  Response create_session(const Request& request) {
    const json body = parse_body(request.body);
    auto ds = find_dataset(required_field<std::string>(body, "dataset_id"));
    auto session = std::make_shared<Session>();
    session->dataset = ds;
    session->feature_set = FeatureSet::all_selected(ds->table.feature_names);
    session->k = optional_count(body, "k").value_or(config.default_k);
    session->seed = optional_count(body, "seed").value_or(config.default_seed);
    if (session->k < 2) fail(ErrorCode::invalid_argument, "k must be at least 2");
    {
      std::unique_lock lock(mutex);
      session->id = "s-" + std::to_string(next_session++);
      sessions.emplace(session->id, session);
    }
    std::lock_guard lock(session->mutex);
    save(*session);
    return json_response(201, session_view(*session));
  }

  Response get_session(Session& s) {
    std::lock_guard lock(s.mutex);
    return json_response(200, session_view(s));
  }

  Response move_feature(Session& s, const Request& request) {
    const json body = parse_body(request.body);
    const auto name = required_field<std::string>(body, "name");
    const auto direction = parse_direction(required_field<std::string>(body, "direction"));
    std::lock_guard lock(s.mutex);
    if (!s.active_job.empty())
      throw DetailedError(ErrorCode::busy, "session " + s.id + " is running job " + s.active_job,
                          json{{"job_id", s.active_job}});
    FeatureSet next = s.feature_set;
    next.move(name, direction, s.dataset->table.feature_names);
    s.history.push_back(history_move(s.history.size() + 1, clock(), name, direction));
    s.feature_set = std::move(next);
    try {
      save(s);
    } catch (...) {
      s.history.pop_back();
      s.feature_set.move(name, direction == Direction::select ? Direction::unselect : Direction::select,
                         s.dataset->table.feature_names);
      throw;
    }
    return json_response(200, session_view(s));
  }

  Response report(Session& s) {
    std::shared_ptr<const SessionResults> results;
    std::size_t k;
    std::uint64_t seed;
    {
      std::lock_guard lock(s.mutex);
      results = s.results;
      k = s.k;
      seed = s.seed;
    }
    json body = results_json(*results);
    body["session_id"] = s.id;
    body["k"] = k;
    body["seed"] = seed;
    return json_response(200, body);
  }

  Response wavelengths(Session& s, const Request& request) {
    FeatureSet fs;
    {
      std::lock_guard lock(s.mutex);
      fs = s.feature_set;
    }
    WavelengthHistogramOptions options;
    if (auto it = request.query.find("bin_width"); it != request.query.end()) {
      double width = 0.0;
      auto [end, ec] = std::from_chars(it->second.data(), it->second.data() + it->second.size(), width);
      if (ec != std::errc{} || end != it->second.data() + it->second.size() || !(width > 0.0))
        fail(ErrorCode::invalid_argument, "bin_width must be a positive number");
      options.bin_width_nm = width;
    }
    const auto hist = wavelength_histogram(fs, s.dataset->registry, options);
    return json_response(200, json{{"session_id", s.id}, {"selected", fs.selected}, {"histogram", hist}});
  }

  // ---- jobs --------------------------------------------------------------

  Response submit_job(const std::shared_ptr<Session>& s, const Request& request) {
    const json body = parse_body(request.body);
    auto job = std::make_shared<Job>();
    job->kind = parse_job_kind(required_field<std::string>(body, "kind"));
    const auto k = optional_count(body, "k");
    const auto seed = optional_count(body, "seed");
    if (auto m = optional_count(body, "m")) job->m = *m;
    job->session_id = s->id;
    const FeatureTable& table = s->dataset->table;

    std::lock_guard lock(s->mutex);
    if (!s->active_job.empty())
      throw DetailedError(ErrorCode::busy, "session " + s->id + " is running job " + s->active_job,
                          json{{"job_id", s->active_job}});
    job->k = k.value_or(s->k);
    job->seed = seed.value_or(s->seed);
    check_cv_inputs(table, job->k);
    if (job->kind == JobKind::autoselect) {
      if (!job->m) fail(ErrorCode::invalid_argument, "autoselect needs m");
      if (*job->m < 1 || *job->m > table.d())
        fail(ErrorCode::invalid_argument,
             "m must be in 1.." + std::to_string(table.d()) + ", got " + std::to_string(*job->m));
    } else if (s->feature_set.selected.empty()) {
      fail(ErrorCode::invalid_argument, "no features selected");
    }
    {
      std::unique_lock maps(mutex);
      job->id = "j-" + std::to_string(next_job++);
      jobs.emplace(job->id, job);
    }
    s->active_job = job->id;
    const json accepted = job_view(*job);  // before the worker can touch it
    pool.submit([this, s, job] { run_job(s, job); });
    return json_response(202, accepted);
  }

  json job_view(Job& job) {
    json j{{"job_id", job.id},
           {"session_id", job.session_id},
           {"kind", std::string(to_string(job.kind))},
           {"status", std::string(to_string(job.status.load()))},
           {"progress", job.progress.load()},
           {"params", {{"k", job.k}, {"seed", job.seed}, {"m", job.m ? json(*job.m) : json(nullptr)}}}};
    const auto status = job.status.load();
    if (status == JobStatus::done) j["result"] = "/sessions/" + job.session_id + "/report";
    if (status == JobStatus::failed) {
      std::lock_guard lock(job.error_mutex);
      j["error"] = job.error;
    }
    return j;
  }

  Response get_job(const std::string& id) {
    std::shared_ptr<Job> job;
    {
      std::shared_lock lock(mutex);
      auto it = jobs.find(id);
      if (it == jobs.end()) fail(ErrorCode::not_found, "unknown job '" + id + "'");
      job = it->second;
    }
    return json_response(200, job_view(*job));
  }

  void run_job(const std::shared_ptr<Session>& s, const std::shared_ptr<Job>& job) {
    job->status = JobStatus::running;
    FeatureSet fs;
    {
      std::lock_guard lock(s->mutex);
      fs = s->feature_set;
    }
    const FeatureTable& table = s->dataset->table;
    auto results = std::make_shared<SessionResults>();
    results->job_id = job->id;
    std::optional<FeatureSet> replacement;
    try {
      auto stage = [&](double lo, double hi) {
        return [job, lo, hi](double p) { job->advance(lo + (hi - lo) * p); };
      };
      switch (job->kind) {
        case JobKind::regress: {
          const auto plan = make_fold_plan(table.n(), job->k, job->seed);
          auto ranked = evaluate_and_rank(table.with_features(fs.selected), plan, model, stage(0.0, 0.5));
          auto full = kfold_cv(table, plan, model, stage(0.5, 1.0));
          ComparisonRow row;
          row.subset = ranked.report.aggregate;
          row.full = full.aggregate;
          row.subset_size = fs.selected.size();
          row.total_size = table.d();
          row.k = job->k;
          row.seed = job->seed;
          results->report = std::move(ranked.report);
          results->ranking = std::move(ranked.ranking);
          results->comparison = row;
          break;
        }
        case JobKind::compare: {
          auto cmp = compare_subset_vs_full(table, fs, job->k, job->seed, model, stage(0.0, 1.0));
          results->report = std::move(cmp.subset_report);
          results->comparison = cmp.row;
          break;
        }
        case JobKind::autoselect: {
          auto picked = auto_select(table, *job->m, job->k, job->seed, model, stage(0.0, 0.6));
          auto cmp = compare_subset_vs_full(table, picked.feature_set, job->k, job->seed, model,
                                            stage(0.6, 1.0));
          results->report = std::move(cmp.subset_report);
          results->ranking = std::move(picked.ranking);
          results->comparison = cmp.row;
          replacement = std::move(picked.feature_set);
          break;
        }
      }
    } catch (const std::exception& e) {
      {
        std::lock_guard lock(s->mutex);
        s->active_job.clear();
      }
      {
        std::lock_guard lock(job->error_mutex);
        job->error = e.what();
      }
      job->status = JobStatus::failed;
      return;
    }

    std::string save_error;
    {
      std::lock_guard lock(s->mutex);
      const auto previous_results = s->results;
      const auto previous_k = s->k;
      const auto previous_seed = s->seed;
      const auto previous_fs = s->feature_set;
      const auto previous_history = s->history.size();
      s->results = results;
      s->k = job->k;
      s->seed = job->seed;
      if (replacement) {
        s->feature_set = *replacement;
        s->history.push_back(
            history_replace(s->history.size() + 1, clock(), replacement->selected, job->id));
      }
      try {
        save(*s);
      } catch (const std::exception& e) {
        s->results = previous_results;
        s->k = previous_k;
        s->seed = previous_seed;
        s->feature_set = previous_fs;
        s->history.resize(previous_history);
        save_error = e.what();
      }
      s->active_job.clear();
    }
    if (!save_error.empty()) {
      {
        std::lock_guard lock(job->error_mutex);
        job->error = "could not persist results: " + save_error;
      }
      job->status = JobStatus::failed;
      return;
    }
    job->advance(1.0);
    job->status = JobStatus::done;
  }

  // ---- loading -----------------------------------------------------------

  void load() {
    auto ds_docs = store.load_datasets();
    errors = ds_docs.errors;
    for (auto& [id, doc] : ds_docs.documents) {
      try {
        auto ds = build_dataset(doc);
        ds->id = id;
        if (dataset_id(doc) != id)
          fail(ErrorCode::parse, "content does not match its id");
        datasets.emplace(id, std::move(ds));
      } catch (const std::exception& e) {
        errors.push_back("dataset " + id + ": " + e.what());
      }
    }
    auto session_docs = store.load_sessions();
    errors.insert(errors.end(), session_docs.errors.begin(), session_docs.errors.end());
    for (auto& [id, doc] : session_docs.documents) {
      try {
        auto s = restore_session(id, doc);
        next_session = std::max(next_session, id_number(id, "s-") + 1);
        for (const auto& h : s->history)
          if (h.at("op") == "replace") next_job = std::max(next_job, id_number(h.at("job"), "j-") + 1);
        if (!s->results->job_id.empty())
          next_job = std::max(next_job, id_number(s->results->job_id, "j-") + 1);
        sessions.emplace(id, std::move(s));
      } catch (const std::exception& e) {
        errors.push_back("session " + id + ": " + e.what());
      }
    }
  }

  std::shared_ptr<Session> restore_session(const std::string& id, const json& doc) {
    if (doc.at("session_id").get<std::string>() != id)
      fail(ErrorCode::parse, "session_id does not match the file name");
    auto it = datasets.find(doc.at("dataset_id").get<std::string>());
    if (it == datasets.end())
      fail(ErrorCode::not_found, "dataset " + doc.at("dataset_id").get<std::string>() + " is not loaded");
    auto s = std::make_shared<Session>();
    s->id = id;
    s->dataset = it->second;
    s->k = doc.at("k").get<std::size_t>();
    s->seed = doc.at("seed").get<std::uint64_t>();
    s->history = doc.at("history").get<std::vector<json>>();
    const auto& columns = s->dataset->table.feature_names;
    FeatureSet stored = doc.at("feature_set").get<FeatureSet>();
    stored.validate(columns);
    FeatureSet replayed = replay_history(columns, s->history);
    const auto hash = feature_set_hash(replayed);
    if (replayed != stored || hash != doc.at("feature_set_hash").get<std::string>())
      fail(ErrorCode::parse, "history does not replay to the stored feature set");
    s->feature_set = std::move(replayed);
    s->results = std::make_shared<SessionResults>(results_from_json(doc.at("results")));
    return s;
  }

  // ---- routing -----------------------------------------------------------

  Response route(const Request& request) {
    const auto parts = split_path(request.path);
    const auto& method = request.method;
    auto method_not_allowed = [&]() -> Response {
      return json_response(405, json{{"code", std::string(to_string(ErrorCode::invalid_argument))},
                                     {"message", "method " + method + " not allowed on " + request.path},
                                     {"details", {{"method", method}, {"path", request.path}}}});
    };
    const std::size_t n = parts.size();

    if (n == 1 && parts[0] == "health") {
      if (method != "GET") return method_not_allowed();
      std::shared_lock lock(mutex);
      return json_response(200, json{{"status", "ok"},
                                     {"datasets", datasets.size()},
                                     {"sessions", sessions.size()},
                                     {"load_errors", errors}});
    }
    if (n >= 1 && parts[0] == "datasets") {
      if (n == 1) return method == "POST" ? create_dataset(request) : method_not_allowed();
      if (method != "GET") return method_not_allowed();
      auto ds = find_dataset(parts[1]);
      if (n == 2) return json_response(200, dataset_summary(*ds));
      if (n == 3 && parts[2] == "correlation") return correlation(*ds);
      if (n == 3 && parts[2] == "scatter") return scatter(*ds, request);
    }
    if (n >= 1 && parts[0] == "sessions") {
      if (n == 1) return method == "POST" ? create_session(request) : method_not_allowed();
      auto s = find_session(parts[1]);
      if (n == 2) return method == "GET" ? get_session(*s) : method_not_allowed();
      if (n == 3 && parts[2] == "features")
        return method == "POST" ? move_feature(*s, request) : method_not_allowed();
      if (n == 3 && parts[2] == "jobs")
        return method == "POST" ? submit_job(s, request) : method_not_allowed();
      if (n == 3 && parts[2] == "report") return method == "GET" ? report(*s) : method_not_allowed();
      if (n == 3 && parts[2] == "wavelengths")
        return method == "GET" ? wavelengths(*s, request) : method_not_allowed();
    }
    if (n == 2 && parts[0] == "jobs") return method == "GET" ? get_job(parts[1]) : method_not_allowed();
    return error_response(ErrorCode::not_found, "no route for " + method + " " + request.path,
                          json{{"method", method}, {"path", request.path}});
  }
};

Service::Service(ServiceConfig config, Clock clock)
    : impl_(std::make_unique<Impl>(std::move(config), std::move(clock))) {}

Service::~Service() = default;

Response Service::handle(const Request& request) {
  try {
    return impl_->route(request);
  } catch (const DetailedError& e) {
    return error_response(e.code(), e.what(), e.details());
  } catch (const ParseError& e) {
    return error_response(e.code(), e.what(), json{{"position", e.position()}});
  } catch (const RfeError& e) {
    return error_response(e.code(), e.what(), json{{"partial_elimination", e.partial_elimination()}});
  } catch (const Error& e) {
    return error_response(e.code(), e.what(), json::object());
  } catch (const std::exception& e) {
    return error_response(ErrorCode::internal, e.what(), json::object());
  }
}

void Service::wait_idle() { impl_->pool.wait_idle(); }

const std::vector<std::string>& Service::load_errors() const { return impl_->errors; }

const ServiceConfig& Service::config() const { return impl_->config; }

}  // namespace specsel
