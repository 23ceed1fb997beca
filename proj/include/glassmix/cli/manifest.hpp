#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "glassmix/cli/config.hpp"

namespace glassmix::cli {

inline constexpr std::string_view kToolVersion = "1.0.0";

/// 64-bit FNV-1a of `text`, as 16 lowercase hex digits.
std::string fnv1a_hex(std::string_view text);

/// Current UTC time, e.g. 2026-01-31T12:00:00Z.
std::string iso_timestamp();

struct RunManifest {
  std::string command;
  std::string config_hash;
  std::uint64_t master_seed = 0;
  std::string tool_version{kToolVersion};
  std::string timestamp;
  std::vector<std::string> output_paths;
  bool complete = false;
  nlohmann::json config;
  nlohmann::json extra = nlohmann::json::object();

  static RunManifest begin(std::string command, const Config& config);

  nlohmann::json to_json() const;
  static RunManifest from_json(const nlohmann::json& j);

  /// Writes manifest.json under `dir`.
  void write(const std::filesystem::path& dir) const;
};

}  // namespace glassmix::cli
