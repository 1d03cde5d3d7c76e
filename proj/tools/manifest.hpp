#pragma once

#include <string>
#include <utility>
#include <vector>

namespace mcsa::cli {

/// Provenance record written next to every output file as
/// `<output>.manifest.json`. Contains no timestamps, so identical runs give
/// identical manifests.
struct RunManifest {
  std::string command;
  std::vector<std::pair<std::string, std::string>> parameters;
  /// (path, "sha256:<hex>") for every input file read.
  std::vector<std::pair<std::string, std::string>> inputs;
  std::string tool_version;

  void add_input(const std::string& path);
  std::string to_json() const;
  /// Writes the manifest for `output_path`.
  void write_for(const std::string& output_path) const;
};

std::string sha256_hex(const std::string& bytes);
std::string read_file(const std::string& path);

}  // namespace mcsa::cli
