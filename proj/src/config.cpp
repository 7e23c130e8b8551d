#include "ct/config.hpp"

#include <algorithm>

#include "ct/errors.hpp"

namespace ct {

void Config::validate() const {
  th.validate();
  if (k < 2) throw PreconditionFailure("k must be at least 2");
  if (eps0_level < 1 || eps2_level < 1) throw PreconditionFailure("shortness cuts must be positive");
  if (bfs_cap < 1 || basepoints < 1) throw PreconditionFailure("sample sizes must be positive");
  if (d_grid.empty()) throw PreconditionFailure("d grid is empty");
  if (flat_steps < 2 || flat_steps % 2) throw PreconditionFailure("flat steps must be even");
  if (!(flat_eps > 0)) throw PreconditionFailure("flat eps must be positive");
  for (double d : d_grid) ConstructionParams{d, flat_c, flat_delta_ratio}.validate();
}

NonqcParams Config::nonqc(double d) const {
  NonqcParams p;
  p.construction = ConstructionParams{d, flat_c, flat_delta_ratio};
  p.steps = flat_steps;
  p.jitter = flat_jitter;
  p.seed = seed;
  p.th = th;
  p.shadow.eps = flat_eps;
  p.shadow.short_cut = eps0_level;
  return p;
}

namespace {

template <class T>
void take(const json& j, const char* key, T& dst) {
  if (!j.contains(key)) return;
  try {
    dst = j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ParseError(std::string("config field '") + key + "' has the wrong type");
  }
}

}  // namespace

Config config_from_json(const json& j) {
  if (!j.is_object()) throw ParseError("config must be a JSON object");
  static const std::vector<std::string> known{
      "K",      "K_hat",       "R",          "k",          "eps0_level", "eps2_level",
      "bers_L", "bers_L_prime", "flat",      "bfs_cap",    "basepoints", "calibration",
      "seed"};
  for (const auto& [key, _] : j.items())
    if (std::find(known.begin(), known.end(), key) == known.end())
      throw ParseError("unknown config field '" + key + "'");
  Config c;
  take(j, "K", c.th.K);
  take(j, "K_hat", c.th.K_hat);
  take(j, "R", c.th.R);
  take(j, "k", c.k);
  take(j, "eps0_level", c.eps0_level);
  take(j, "eps2_level", c.eps2_level);
  take(j, "bers_L", c.bers_L);
  take(j, "bers_L_prime", c.bers_L_prime);
  take(j, "bfs_cap", c.bfs_cap);
  take(j, "basepoints", c.basepoints);
  take(j, "calibration", c.calibration_path);
  take(j, "seed", c.seed);
  if (j.contains("flat")) {
    const auto& f = j.at("flat");
    if (!f.is_object()) throw ParseError("config field 'flat' must be an object");
    take(f, "c", c.flat_c);
    take(f, "delta_ratio", c.flat_delta_ratio);
    take(f, "d_grid", c.d_grid);
    take(f, "steps", c.flat_steps);
    take(f, "eps", c.flat_eps);
    take(f, "jitter", c.flat_jitter);
  }
  return c;
}

json to_json(const Config& c) {
  json j;
  j["K"] = c.th.K;
  j["K_hat"] = c.th.K_hat;
  j["R"] = c.th.R;
  j["k"] = c.k;
  j["eps0_level"] = c.eps0_level;
  j["eps2_level"] = c.eps2_level;
  j["bers_L"] = c.bers_L;
  j["bers_L_prime"] = c.bers_L_prime;
  j["flat"] = {{"c", c.flat_c},         {"delta_ratio", c.flat_delta_ratio},
               {"d_grid", c.d_grid},    {"steps", c.flat_steps},
               {"eps", c.flat_eps},     {"jitter", c.flat_jitter}};
  j["bfs_cap"] = c.bfs_cap;
  j["basepoints"] = c.basepoints;
  j["calibration"] = c.calibration_path;
  j["seed"] = c.seed;
  return j;
}

Config load_config(const std::string& path) { return config_from_json(read_json_file(path)); }

}  // namespace ct
