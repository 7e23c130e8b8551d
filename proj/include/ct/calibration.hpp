#pragma once

#include <string>
#include <vector>

#include "ct/config.hpp"
#include "ct/io.hpp"

namespace ct {

// Empirically pinned constants. Written by `coarse-teich calibrate`.
struct Calibration {
  int version = 1;
  double L = 1;               // distance formula vs move graph, multiplicative
  int C = 0;                  //   and additive
  int M2 = 0;                 // projection drift outside active segments
  double comparability = 1;   // max/min of symmetric-family values seen
  double K_tilde = 1;         // barycenter slope
  double C_tilde = 0;         //   and intercept
  double E0 = 0;              // endpoint orbit diameter, flat sweep
  double c1 = 0;              // midpoint >= c1 d - c2
  double c2 = 0;
  double horo_mult = 1;       // horoball vs horodisk distortion
  double horo_add = 0;
  int C_phi = 0;              // phi image of one move
  int C_cpj = 0;              // phi excess over enumerated Q members
  int C_add = 0;              // phi composites

  friend bool operator==(const Calibration&, const Calibration&) = default;
};

json to_json(const Calibration& c);
Calibration calibration_from_json(const json& j);

// COARSE_TEICH_CALIBRATION, then the config entry, then the built-in path.
std::string calibration_path(const Config& cfg);
Calibration load_calibration(const std::string& path);
void save_calibration(const std::string& path, const Calibration& c);

// CRC-32 of the canonical JSON, as 8 hex digits.
std::string digest(const Calibration& c);

// Keys whose values differ by more than rel (relative to the larger).
std::vector<std::string> calibration_drift(const Calibration& a, const Calibration& b,
                                           double rel = 0.05);

}  // namespace ct
