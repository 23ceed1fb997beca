#include "glassmix/cli/manifest.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>

#include "glassmix/io.hpp"

namespace glassmix::cli {

using nlohmann::json;

std::string fnv1a_hex(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string iso_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm utc{};
  gmtime_r(&now, &utc);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &utc);
  return buf;
}

RunManifest RunManifest::begin(std::string command, const Config& config) {
  RunManifest m;
  m.command = std::move(command);
  m.config = cli::to_json(config);
  m.config_hash = fnv1a_hex(m.config.dump());
  m.master_seed = config.seed;
  m.timestamp = iso_timestamp();
  return m;
}

json RunManifest::to_json() const {
  return {{"schema", io::kSchema},
          {"command", command},
          {"config_hash", config_hash},
          {"master_seed", master_seed},
          {"tool_version", tool_version},
          {"timestamp", timestamp},
          {"output_paths", output_paths},
          {"status", complete ? "complete" : "incomplete"},
          {"config", config},
          {"extra", extra}};
}

RunManifest RunManifest::from_json(const json& j) {
  RunManifest m;
  m.command = j.at("command").get<std::string>();
  m.config_hash = j.at("config_hash").get<std::string>();
  m.master_seed = j.at("master_seed").get<std::uint64_t>();
  m.tool_version = j.at("tool_version").get<std::string>();
  m.timestamp = j.at("timestamp").get<std::string>();
  m.output_paths = j.at("output_paths").get<std::vector<std::string>>();
  m.complete = j.at("status").get<std::string>() == "complete";
  m.config = j.value("config", json::object());
  m.extra = j.value("extra", json::object());
  return m;
}

void RunManifest::write(const std::filesystem::path& dir) const {
  io::write_text(dir / "manifest.json", to_json().dump(2) + "\n");
}

}  // namespace glassmix::cli
