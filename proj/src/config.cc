#include "coordrank/config.h"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "coordrank/errors.h"
#include "json.hpp"

namespace coordrank {

namespace {

double real_field(const nlohmann::json& v, std::string_view key) {
  if (!v.is_number())
    throw DataError("config key \"" + std::string(key) + "\" must be a number");
  return v.get<double>();
}

int int_field(const nlohmann::json& v, std::string_view key) {
  if (!v.is_number_integer())
    throw DataError("config key \"" + std::string(key) + "\" must be an integer");
  auto i = v.get<std::int64_t>();
  if (i < std::numeric_limits<int>::min() || i > std::numeric_limits<int>::max())
    throw DataError("config key \"" + std::string(key) + "\" is out of range");
  return static_cast<int>(i);
}

}  // namespace

RerankConfig parse_config(std::string_view json_text, const RerankConfig& base) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw DataError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw DataError("config must be a JSON object");

  RerankConfig cfg = base;
  for (const auto& [key, value] : j.items()) {
    if (key == "w_g") cfg.w_g = real_field(value, key);
    else if (key == "w_coor") cfg.w_coor = real_field(value, key);
    else if (key == "K") cfg.k = real_field(value, key);
    else if (key == "bypass_threshold") cfg.bypass_threshold = real_field(value, key);
    else if (key == "top_n") cfg.top_n = int_field(value, key);
    else if (key == "common_cutoff") cfg.common_cutoff = int_field(value, key);
    else throw DataError("unknown config key \"" + key + "\"");
  }
  return cfg;
}

RerankConfig load_config(const std::filesystem::path& path,
                         const RerankConfig& base) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open config " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  try {
    return parse_config(text.str(), base);
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

std::string config_to_json(const RerankConfig& cfg) {
  nlohmann::ordered_json j;
  j["w_g"] = cfg.w_g;
  j["w_coor"] = cfg.w_coor;
  j["K"] = cfg.k;
  j["bypass_threshold"] = cfg.bypass_threshold;
  j["top_n"] = cfg.top_n;
  j["common_cutoff"] = cfg.common_cutoff;
  return j.dump(2) + "\n";
}

void save_config(const RerankConfig& cfg, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write " + path.string());
  out << config_to_json(cfg);
  out.flush();
  if (!out) throw DataError("write failed for " + path.string());
}

std::string format_real(double v) {
  if (v == 0.0) v = 0.0;  // drop the sign of -0
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::string config_fingerprint(const RerankConfig& cfg) {
  return "w_g=" + format_real(cfg.w_g) + " w_coor=" + format_real(cfg.w_coor) +
         " K=" + format_real(cfg.k) +
         " bypass_threshold=" + format_real(cfg.bypass_threshold) +
         " top_n=" + std::to_string(cfg.top_n) +
         " common_cutoff=" + std::to_string(cfg.common_cutoff);
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string config_hash(const RerankConfig& cfg) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(fnv1a64(config_fingerprint(cfg))));
  return buf;
}

}  // namespace coordrank
