#include "glassmix/cli/config.hpp"

#include <set>

#include "glassmix/error.hpp"
#include "glassmix/io.hpp"

namespace glassmix::cli {

using nlohmann::json;

json to_json(const Config& c) {
  return {{"schema", io::kSchema},
          {"n", c.n},
          {"p", c.p},
          {"beta", c.beta},
          {"repr", c.repr},
          {"disorder", c.disorder},
          {"seed", c.seed},
          {"threads", c.threads},
          {"out", c.out},
          {"horizon", c.horizon},
          {"subsample", c.subsample},
          {"runs", c.runs},
          {"instances", c.instances},
          {"mixing_cap", c.mixing_cap},
          {"radius_range", c.radius_range},
          {"eps", c.eps},
          {"delta", c.delta},
          {"k", c.k},
          {"samples", c.samples},
          {"p_grid", c.p_grid}};
}

namespace {

template <class T>
void read(const json& j, const char* key, T& field) {
  if (j.contains(key)) field = j.at(key).get<T>();
}

// Scalars are accepted where a list is expected.
template <class T>
void read_list(const json& j, const char* key, std::vector<T>& field) {
  if (!j.contains(key)) return;
  const auto& v = j.at(key);
  field = v.is_array() ? v.get<std::vector<T>>() : std::vector<T>{v.get<T>()};
}

}  // namespace

Config config_from_json(const json& j) {
  require(j.is_object(), ErrorKind::InvalidParams, "config must be a JSON object");
  static const std::set<std::string> known = {"schema",    "n",          "p",       "beta",         "repr",
                                              "disorder",  "seed",      "threads",    "out",     "horizon",      "subsample",
                                              "runs",      "instances",  "mixing_cap", "radius_range", "eps",
                                              "delta",     "k",          "samples", "p_grid"};
  for (const auto& [key, value] : j.items()) {
    require(known.contains(key), ErrorKind::InvalidParams, "unknown config key \"" + key + "\"");
  }
  Config c;
  try {
    if (j.contains("schema"))
      require(j.at("schema").get<std::string>() == io::kSchema, ErrorKind::InvalidParams, "unsupported schema");
    read(j, "n", c.n);
    read(j, "p", c.p);
    read(j, "beta", c.beta);
    read(j, "repr", c.repr);
    read(j, "disorder", c.disorder);
    read(j, "seed", c.seed);
    read(j, "threads", c.threads);
    read(j, "out", c.out);
    read(j, "horizon", c.horizon);
    read(j, "subsample", c.subsample);
    read(j, "runs", c.runs);
    read(j, "instances", c.instances);
    read(j, "mixing_cap", c.mixing_cap);
    read(j, "radius_range", c.radius_range);
    read_list(j, "eps", c.eps);
    read_list(j, "delta", c.delta);
    read_list(j, "k", c.k);
    read(j, "samples", c.samples);
    read_list(j, "p_grid", c.p_grid);
  } catch (const json::exception& e) {
    fail(ErrorKind::InvalidParams, std::string("config: ") + e.what());
  }
  return c;
}

Config load_config(const std::string& path) {
  std::string text;
  try {
    text = io::read_text(path);
  } catch (const Error& e) {
    fail(ErrorKind::InvalidParams, e.what());
  }
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    fail(ErrorKind::InvalidParams, "malformed config " + path + ": " + e.what());
  }
  return config_from_json(j);
}

void validate(const Config& c) {
  require(c.n >= 1, ErrorKind::InvalidParams, "n must be >= 1");
  require(c.p >= 1, ErrorKind::InvalidParams, "p must be >= 1");
  require(c.beta >= 0.0, ErrorKind::InvalidParams, "beta must be >= 0");
  require(c.repr == "auto" || c.repr == "full_ordered" || c.repr == "collapsed_multiset", ErrorKind::InvalidParams,
          "repr must be auto, full_ordered or collapsed_multiset");
  require(c.disorder == "gaussian" || c.disorder == "zero", ErrorKind::InvalidParams,
          "disorder must be gaussian or zero");
  require(c.subsample >= 1, ErrorKind::InvalidParams, "subsample must be >= 1");
  require(c.runs >= 1 && c.instances >= 1 && c.samples >= 1, ErrorKind::InvalidParams,
          "runs, instances and samples must be >= 1");
  require(c.mixing_cap >= 1, ErrorKind::InvalidParams, "mixing_cap must be >= 1");
  require(c.radius_range == "corollary" || c.radius_range == "definition", ErrorKind::InvalidParams,
          "radius_range must be corollary or definition");
  require(!c.k.empty() && !c.p_grid.empty(), ErrorKind::InvalidParams, "k and p_grid must not be empty");
  for (double e : c.eps) require(e > 0.0 && e < 1.0, ErrorKind::InvalidParams, "eps must lie in (0, 1)");
  for (double d : c.delta) require(d > 0.0 && d < 1.0, ErrorKind::InvalidParams, "delta must lie in (0, 1)");
  for (int k : c.k) require(k >= 1, ErrorKind::InvalidParams, "k must be >= 1");
  for (int p : c.p_grid) require(p >= 2, ErrorKind::InvalidParams, "p_grid entries must be >= 2");
  require(!c.out.empty(), ErrorKind::InvalidParams, "out must not be empty");
}

}  // namespace glassmix::cli
