#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ct/flat_sim.hpp"
#include "ct/io.hpp"
#include "ct/metrics.hpp"

namespace ct {

struct Config {
  Thresholds th;
  int k = 2;
  int eps0_level = 1;  // D-cut for short curves in flat shadows
  int eps2_level = 3;  // D-cut for the finer shortness scale; recorded only
  // Bers constants for the model surfaces; carried for reports, unused.
  double bers_L = 1.0;
  double bers_L_prime = 1.0;

  double flat_c = 0.1;
  double flat_delta_ratio = 0.01;
  std::vector<double> d_grid{10, 15, 20, 25, 30, 35, 40};
  int flat_steps = 80;
  double flat_eps = 1.0;
  double flat_jitter = 0.0;

  int bfs_cap = 10;
  int basepoints = 50;

  std::string calibration_path;  // empty: environment, then built-in default
  std::uint64_t seed = 1;

  void validate() const;
  NonqcParams nonqc(double d) const;
};

Config config_from_json(const json& j);
json to_json(const Config& c);
Config load_config(const std::string& path);

}  // namespace ct
