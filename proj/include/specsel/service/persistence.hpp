#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "specsel/io/dataset_source.hpp"

namespace specsel {

/// Writes to a sibling temporary file, then renames over `path`, so readers
/// never observe a half-written document.
void write_atomically(const std::filesystem::path& path, const std::string& content);

/// One JSON document per dataset and per session under `root`:
///   root/datasets/<id>.json, root/sessions/<id>.json
class DocumentStore {
 public:
  explicit DocumentStore(std::filesystem::path root);

  void save_dataset(const std::string& id, const json& doc) const;
  void save_session(const std::string& id, const json& doc) const;

  struct Loaded {
    std::vector<std::pair<std::string, json>> documents;  // sorted by id
    std::vector<std::string> errors;                      // one per unreadable file
  };
  Loaded load_datasets() const;
  Loaded load_sessions() const;

  const std::filesystem::path& root() const noexcept { return root_; }

 private:
  Loaded load_dir(const std::filesystem::path& dir, std::string_view what) const;

  std::filesystem::path root_;
};

}  // namespace specsel
