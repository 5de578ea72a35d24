#pragma once

#include <cstdint>
#include <fstream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cantor/errors.hpp"
#include "cantor/system.hpp"
#include "cantor/version.hpp"

namespace cantor {

using nlohmann::json;

// One run = one command + one RunConfig.  The config serializes losslessly
// and its hash stamps every artifact for provenance.
struct RunConfig {
  int version = 1;
  SystemSpec system{"middle-third", {}, nullptr, {}, {}};
  SystemSpec system_b{"", {}, nullptr, {}, {}};  // rigidity target (optional)
  int precision_bits = 128;
  int depth = 8;
  int est_depth = 20;
  int table_depth = 8;
  int depth_cap = kDefaultDepthCap;
  double tol = 1e-8;
  std::uint64_t seed = 1;
  int grid_pow = 10;
  int steps = 2000;
  int n_max = 16;
  double eps = 0.3;            // conjugation amplitude when system_b is implied
  std::string past;            // dual word / orbit prefix override
  std::string gap_seed = "affine";  // affine | psi | bump
  std::string functional = "refdist";
  std::string coord = "l";
  std::string table_file;      // persisted scaling table input
  std::string table_out;       // persisted scaling table output
  std::string measures_out;    // cylinder-measure CSV output (word, weight)
  std::string out;             // artifact path (command default when empty)
};

namespace detail {

inline json spec_to_json(const SystemSpec& s) {
  json j;
  j["family"] = s.family;
  j["params"] = s.params;
  if (s.base) j["base"] = spec_to_json(*s.base);
  if (!s.phi0.empty()) j["phi0"] = s.phi0;
  if (!s.phi1.empty()) j["phi1"] = s.phi1;
  return j;
}

inline SystemSpec spec_from_json(const json& j) {
  static const std::vector<std::string> keys = {"family", "params", "base", "phi0", "phi1"};
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (std::find(keys.begin(), keys.end(), it.key()) == keys.end())
      throw config_error("unknown system key: " + it.key());
  }
  SystemSpec s;
  s.family = j.at("family").get<std::string>();
  if (j.contains("params")) s.params = j.at("params").get<std::vector<double>>();
  if (j.contains("base")) s.base = std::make_shared<SystemSpec>(spec_from_json(j.at("base")));
  if (j.contains("phi0")) s.phi0 = j.at("phi0").get<std::vector<double>>();
  if (j.contains("phi1")) s.phi1 = j.at("phi1").get<std::vector<double>>();
  return s;
}

}  // namespace detail

inline json to_json(const RunConfig& c) {
  json j;
  j["version"] = c.version;
  j["system"] = detail::spec_to_json(c.system);
  if (!c.system_b.family.empty()) j["system_b"] = detail::spec_to_json(c.system_b);
  j["precision_bits"] = c.precision_bits;
  j["depth"] = c.depth;
  j["est_depth"] = c.est_depth;
  j["table_depth"] = c.table_depth;
  j["depth_cap"] = c.depth_cap;
  j["tol"] = c.tol;
  j["seed"] = c.seed;
  j["grid_pow"] = c.grid_pow;
  j["steps"] = c.steps;
  j["n_max"] = c.n_max;
  j["eps"] = c.eps;
  j["past"] = c.past;
  j["gap_seed"] = c.gap_seed;
  j["functional"] = c.functional;
  j["coord"] = c.coord;
  j["table_file"] = c.table_file;
  j["table_out"] = c.table_out;
  j["measures_out"] = c.measures_out;
  j["out"] = c.out;
  return j;
}

inline RunConfig config_from_json(const json& j) {
  static const std::vector<std::string> keys = {
      "version",   "system", "system_b",  "precision_bits", "depth",     "est_depth",
      "table_depth", "depth_cap", "tol",  "seed",           "grid_pow",  "steps",
      "n_max",     "eps",    "past",      "gap_seed",       "functional", "coord",
      "table_file", "table_out", "measures_out", "out"};
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (std::find(keys.begin(), keys.end(), it.key()) == keys.end())
      throw config_error("unknown config key: " + it.key());
  }
  RunConfig c;
  if (j.contains("version")) c.version = j.at("version").get<int>();
  if (c.version != 1) throw config_error("unsupported config version");
  if (j.contains("system")) c.system = detail::spec_from_json(j.at("system"));
  if (j.contains("system_b")) c.system_b = detail::spec_from_json(j.at("system_b"));
  auto get = [&](const char* k, auto& slot) {
    if (j.contains(k)) slot = j.at(k).get<std::decay_t<decltype(slot)>>();
  };
  get("precision_bits", c.precision_bits);
  get("depth", c.depth);
  get("est_depth", c.est_depth);
  get("table_depth", c.table_depth);
  get("depth_cap", c.depth_cap);
  get("tol", c.tol);
  get("seed", c.seed);
  get("grid_pow", c.grid_pow);
  get("steps", c.steps);
  get("n_max", c.n_max);
  get("eps", c.eps);
  get("past", c.past);
  get("gap_seed", c.gap_seed);
  get("functional", c.functional);
  get("coord", c.coord);
  get("table_file", c.table_file);
  get("table_out", c.table_out);
  get("measures_out", c.measures_out);
  get("out", c.out);
  return c;
}

inline RunConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error("cannot open config file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw config_error(std::string("config parse error: ") + e.what());
  }
  return config_from_json(j);
}

// FNV-1a over the canonical (key-sorted) serialization.
inline std::string config_hash(const RunConfig& c) {
  const std::string dump = to_json(c).dump();
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char ch : dump) {
    h ^= ch;
    h *= 0x100000001b3ull;
  }
  std::ostringstream os;
  os << std::hex << h;
  return os.str();
}

}  // namespace cantor
