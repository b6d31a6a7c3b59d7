#include "specsel/service/config.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>

#include "specsel/error.hpp"
#include "specsel/io/grid_file.hpp"
#include "specsel/io/report_json.hpp"

namespace specsel {

namespace {

template <typename T>
T parse_unsigned(const std::string& text, const std::string& what) {
  T value{};
  auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || end != text.data() + text.size())
    fail(ErrorCode::invalid_argument, what + ": '" + text + "' is not a non-negative integer");
  return value;
}

void check_ranges(const ServiceConfig& c) {
  if (c.port < 0 || c.port > 65535) fail(ErrorCode::invalid_argument, "port must be in 0..65535");
  if (c.workers < 1) fail(ErrorCode::invalid_argument, "workers must be at least 1");
  if (c.default_k < 2) fail(ErrorCode::invalid_argument, "default_k must be at least 2");
}

void apply_file(ServiceConfig& c, const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) fail(ErrorCode::io, "cannot open config file " + file.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    fail(ErrorCode::parse, "config file " + file.string() + ": " + e.what());
  }
  if (!j.is_object()) fail(ErrorCode::parse, "config file must hold a JSON object");
  const auto base = file.parent_path();
  auto path_of = [&](const json& v) {
    std::filesystem::path p = v.get<std::string>();
    return p.is_relative() ? base / p : p;
  };
  try {
    for (const auto& [key, v] : j.items()) {
      if (key == "host") c.host = v.get<std::string>();
      else if (key == "port") c.port = v.get<int>();
      else if (key == "data_dir") c.data_dir = path_of(v);
      else if (key == "workers") c.workers = v.get<std::size_t>();
      else if (key == "grid_file") c.grid_file = path_of(v);
      else if (key == "registry_file") c.registry_file = path_of(v);
      else if (key == "default_k") c.default_k = v.get<std::size_t>();
      else if (key == "default_seed") c.default_seed = v.get<std::uint64_t>();
      else if (key == "rfe_criterion") c.rfe_criterion = parse_rfe_criterion(v.get<std::string>());
      else fail(ErrorCode::invalid_argument, "config file: unknown key '" + key + "'");
    }
  } catch (const json::exception& e) {
    fail(ErrorCode::invalid_argument, "config file " + file.string() + ": " + e.what());
  }
}

void apply_env(ServiceConfig& c, const EnvLookup& env) {
  if (auto v = env("SPECSEL_HOST")) c.host = *v;
  if (auto v = env("SPECSEL_PORT")) c.port = static_cast<int>(parse_unsigned<unsigned>(*v, "SPECSEL_PORT"));
  if (auto v = env("SPECSEL_DATA_DIR")) c.data_dir = *v;
  if (auto v = env("SPECSEL_WORKERS")) c.workers = parse_unsigned<std::size_t>(*v, "SPECSEL_WORKERS");
  if (auto v = env("SPECSEL_GRID_FILE")) c.grid_file = *v;
  if (auto v = env("SPECSEL_REGISTRY_FILE")) c.registry_file = *v;
  if (auto v = env("SPECSEL_DEFAULT_K")) c.default_k = parse_unsigned<std::size_t>(*v, "SPECSEL_DEFAULT_K");
  if (auto v = env("SPECSEL_DEFAULT_SEED"))
    c.default_seed = parse_unsigned<std::uint64_t>(*v, "SPECSEL_DEFAULT_SEED");
  if (auto v = env("SPECSEL_RFE_CRITERION")) c.rfe_criterion = parse_rfe_criterion(*v);
}

}  // namespace

EnvLookup process_environment() {
  return [](const std::string& name) -> std::optional<std::string> {
    if (const char* v = std::getenv(name.c_str())) return std::string(v);
    return std::nullopt;
  };
}

ServiceConfig load_service_config(const std::optional<std::filesystem::path>& file,
                                  const EnvLookup& env) {
  ServiceConfig c;
  if (file) apply_file(c, *file);
  apply_env(c, env);
  check_ranges(c);
  return c;
}

ModelConfig model_config_for(const ServiceConfig& config) {
  ModelConfig m;
  if (!config.grid_file.empty()) m.svr_grid = load_svr_grid(config.grid_file);
  m.rfe_criterion = config.rfe_criterion;
  return m;
}

}  // namespace specsel
