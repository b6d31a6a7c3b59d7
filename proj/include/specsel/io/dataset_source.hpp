#pragma once

// The stored form of an uploaded dataset and the payloads derived from it,
// shared by the service and the CLI so both produce the same documents.

#include <optional>
#include <string>
#include <string_view>

#include "specsel/io/report_json.hpp"
#include "specsel/spectra/feature_table.hpp"
#include "specsel/spectra/index_registry.hpp"

namespace specsel {

/// Version of every document written to disk.
inline constexpr int kFormatVersion = 1;

/// 64-bit FNV-1a, hex encoded.
std::string fnv1a_hex(std::string_view text);

/// {format_version, kind, csv, name, target?, registry_text}. `kind` is
/// "features" (target required) or "reflectance" (target taken from the CSV).
json make_dataset_source(std::string_view kind, std::string csv, std::optional<std::string> target,
                         std::string name, std::string registry_text);

/// Content id "ds-<16 hex>" of a source document.
std::string dataset_id(const json& source);

struct LoadedDataset {
  FeatureTable table;
  IndexRegistry registry;  // formulas behind the columns (reflectance) or for traceback
  json diagnostics;        // row/drop counts from ingestion
};

/// Ingests the CSV in a source document. Reflectance sources go through
/// compute_indices with the embedded registry.
LoadedDataset load_dataset_source(const json& source);

/// {dataset_id, matrix, dendrogram} for the correlation view.
json correlation_payload(const std::string& dataset_id, const FeatureTable& table);

}  // namespace specsel
