#include "ct/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>

#include <boost/crc.hpp>

#include "ct/errors.hpp"

#ifndef CT_DEFAULT_CALIBRATION
#define CT_DEFAULT_CALIBRATION "calibration/calibration.json"
#endif

namespace ct {

json to_json(const Calibration& c) {
  return {{"version", c.version},
          {"L", c.L},
          {"C", c.C},
          {"M2", c.M2},
          {"comparability", c.comparability},
          {"K_tilde", c.K_tilde},
          {"C_tilde", c.C_tilde},
          {"E0", c.E0},
          {"c1", c.c1},
          {"c2", c.c2},
          {"horo_mult", c.horo_mult},
          {"horo_add", c.horo_add},
          {"C_phi", c.C_phi},
          {"C_cpj", c.C_cpj},
          {"C_add", c.C_add}};
}

Calibration calibration_from_json(const json& j) {
  if (!j.is_object()) throw ParseError("calibration must be a JSON object");
  Calibration c;
  try {
    c.version = j.at("version").get<int>();
    if (c.version != 1) throw ParseError("unsupported calibration version");
    c.L = j.at("L").get<double>();
    c.C = j.at("C").get<int>();
    c.M2 = j.at("M2").get<int>();
    c.comparability = j.at("comparability").get<double>();
    c.K_tilde = j.at("K_tilde").get<double>();
    c.C_tilde = j.at("C_tilde").get<double>();
    c.E0 = j.at("E0").get<double>();
    c.c1 = j.at("c1").get<double>();
    c.c2 = j.at("c2").get<double>();
    c.horo_mult = j.at("horo_mult").get<double>();
    c.horo_add = j.at("horo_add").get<double>();
    c.C_phi = j.at("C_phi").get<int>();
    c.C_cpj = j.at("C_cpj").get<int>();
    c.C_add = j.at("C_add").get<int>();
  } catch (const json::exception& e) {
    throw ParseError(std::string("calibration: ") + e.what());
  }
  return c;
}

std::string calibration_path(const Config& cfg) {
  if (const char* env = std::getenv("COARSE_TEICH_CALIBRATION"); env && *env) return env;
  if (!cfg.calibration_path.empty()) return cfg.calibration_path;
  return CT_DEFAULT_CALIBRATION;
}

Calibration load_calibration(const std::string& path) {
  return calibration_from_json(read_json_file(path));
}

void save_calibration(const std::string& path, const Calibration& c) {
  write_text_file(path, to_json(c).dump(2) + "\n");
}

std::string digest(const Calibration& c) {
  const std::string text = to_json(c).dump();
  boost::crc_32_type crc;
  crc.process_bytes(text.data(), text.size());
  char buf[9];
  std::snprintf(buf, sizeof buf, "%08x", unsigned(crc.checksum()));
  return buf;
}

std::vector<std::string> calibration_drift(const Calibration& a, const Calibration& b,
                                           double rel) {
  const json ja = to_json(a), jb = to_json(b);
  std::vector<std::string> out;
  for (const auto& [key, va] : ja.items()) {
    const double x = va.get<double>(), y = jb.at(key).get<double>();
    const double scale = std::max(std::abs(x), std::abs(y));
    if (std::abs(x - y) > rel * scale) out.push_back(key);
  }
  return out;
}

}  // namespace ct
