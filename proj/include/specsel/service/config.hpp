#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>

#include "specsel/regress/cv.hpp"

namespace specsel {

struct ServiceConfig {
  std::string host = "127.0.0.1";
  int port = 8080;
  std::filesystem::path data_dir = "specsel-data";
  std::size_t workers = 2;
  std::filesystem::path grid_file;      // SVR grid CSV; empty means the default grid
  std::filesystem::path registry_file;  // index registry; empty means the built-in one
  std::size_t default_k = 5;
  std::uint64_t default_seed = 42;
  RfeCriterion rfe_criterion = RfeCriterion::gradient;
};

using EnvLookup = std::function<std::optional<std::string>(const std::string&)>;

/// Reads the real process environment.
EnvLookup process_environment();

/// Defaults, then the JSON config file (if given), then SPECSEL_* environment
/// variables: SPECSEL_HOST, SPECSEL_PORT, SPECSEL_DATA_DIR, SPECSEL_WORKERS,
/// SPECSEL_GRID_FILE, SPECSEL_REGISTRY_FILE, SPECSEL_DEFAULT_K,
/// SPECSEL_DEFAULT_SEED, SPECSEL_RFE_CRITERION. File keys use the field names
/// above; relative paths in the file are taken relative to the file. Unknown
/// keys and malformed values are errors.
ServiceConfig load_service_config(const std::optional<std::filesystem::path>& file,
                                  const EnvLookup& env = process_environment());

/// Model settings implied by the config (grid file loaded if set).
ModelConfig model_config_for(const ServiceConfig& config);

}  // namespace specsel
