#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

namespace nhscat::cli {

std::string sha256_hex(const std::string& bytes);
std::string sha256_file(const std::filesystem::path& path);

/// Everything needed to rerun a command and check its outputs.
struct RunManifest {
  std::string command;
  /// Every option of the subcommand with its effective value.
  std::map<std::string, std::string> flags;
  std::optional<unsigned long long> seed;
  nlohmann::json grid = nlohmann::json::object();
  std::string library_version;
  /// path -> sha256; standard output is recorded as "-".
  std::map<std::string, std::string> inputs;
  std::map<std::string, std::string> outputs;

  nlohmann::json to_json() const;
};

}  // namespace nhscat::cli
