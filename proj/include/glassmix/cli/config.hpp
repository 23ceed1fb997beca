#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace glassmix::cli {

/// Every field any subcommand reads. Fields a command does not use are ignored by it.
struct Config {
  // instance
  int n = 10;
  int p = 3;
  double beta = 1.0;
  std::string repr = "auto";  // auto | full_ordered | collapsed_multiset
  std::string disorder = "gaussian";  // gaussian | zero (all couplings 0)
  std::uint64_t seed = 1;
  unsigned threads = 0;  // 0: hardware concurrency
  std::string out = "glassmix_out";

  // simulate
  std::uint64_t horizon = 10000;
  std::uint64_t subsample = 1;
  std::size_t runs = 1;

  // spectrum / certify
  std::size_t instances = 1;
  std::uint64_t mixing_cap = 1'000'000;
  std::string radius_range = "corollary";  // corollary | definition

  // certify / landscape / theory; empty selects the command's default grid
  std::vector<double> eps;
  std::vector<double> delta;
  std::vector<int> k = {1};
  std::size_t samples = 200;

  // theory
  std::vector<int> p_grid = {3, 4, 5, 6, 8, 10, 15, 20, 30, 50, 100, 200, 500, 1000, 2000, 5000, 10000};

  friend bool operator==(const Config&, const Config&) = default;
};

nlohmann::json to_json(const Config& config);

/// Strict parse: unknown keys and wrong types raise InvalidParams.
Config config_from_json(const nlohmann::json& j);
Config load_config(const std::string& path);

/// Range checks shared by all commands (InvalidParams).
void validate(const Config& config);

}  // namespace glassmix::cli
