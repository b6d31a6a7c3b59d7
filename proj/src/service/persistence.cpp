#include "specsel/service/persistence.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <thread>

#include "specsel/error.hpp"

namespace specsel {

void write_atomically(const std::filesystem::path& path, const std::string& content) {
  static std::atomic<std::uint64_t> counter{0};
  auto tmp = path;
  tmp += ".tmp" + std::to_string(counter.fetch_add(1));
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorCode::io, "cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) fail(ErrorCode::io, "short write to " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    fail(ErrorCode::io, "cannot replace " + path.string());
  }
}

DocumentStore::DocumentStore(std::filesystem::path root) : root_(std::move(root)) {
  std::error_code ec;
  std::filesystem::create_directories(root_ / "datasets", ec);
  std::filesystem::create_directories(root_ / "sessions", ec);
  if (!std::filesystem::is_directory(root_ / "sessions"))
    fail(ErrorCode::io, "cannot create data directory " + root_.string());
}

void DocumentStore::save_dataset(const std::string& id, const json& doc) const {
  write_atomically(root_ / "datasets" / (id + ".json"), dump(doc));
}

void DocumentStore::save_session(const std::string& id, const json& doc) const {
  write_atomically(root_ / "sessions" / (id + ".json"), dump(doc));
}

DocumentStore::Loaded DocumentStore::load_datasets() const {
  return load_dir(root_ / "datasets", "dataset");
}

DocumentStore::Loaded DocumentStore::load_sessions() const {
  return load_dir(root_ / "sessions", "session");
}

DocumentStore::Loaded DocumentStore::load_dir(const std::filesystem::path& dir,
                                              std::string_view what) const {
  Loaded out;
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().extension() == ".json") files.push_back(entry.path());
  std::sort(files.begin(), files.end());
  for (const auto& file : files) {
    const std::string id = file.stem().string();
    try {
      std::ifstream in(file, std::ios::binary);
      json doc = json::parse(in);
      if (!doc.is_object() || doc.value("format_version", 0) != kFormatVersion)
        throw std::runtime_error("unsupported format_version");
      out.documents.emplace_back(id, std::move(doc));
    } catch (const std::exception& e) {
      out.errors.push_back(std::string(what) + " " + id + ": " + e.what());
    }
  }
  return out;
}

}  // namespace specsel
