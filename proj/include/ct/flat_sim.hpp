#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/eigen.hpp>

#include "ct/metrics.hpp"
#include "ct/slope.hpp"

namespace ct {

// Flowed lattices at |t| ~ 20 cancel about 18 digits, so everything
// geometric is carried at 50.
using Real = boost::multiprecision::cpp_bin_float_50;
using Mat2 = Eigen::Matrix<Real, 2, 2>;
using Vec2 = Eigen::Matrix<Real, 2, 1>;

struct FlatTorus {
  Mat2 basis;  // columns: images of 1/0 and 0/1

  Real area() const;
  Vec2 vector(const Slope& s) const;
  Real length(const Slope& s) const;
  void validate() const;
};

// Largest eigenvalue of [[2,1],[1,1]].
Real anosov_lambda();
// Two Farey pivots per period log(lambda).
double farey_progress_rate();

// Unit area, stable eigendirection horizontal, unstable vertical.
FlatTorus anosov_torus();
FlatTorus flow(const FlatTorus& t, const Real& time);

struct ReducedBasis {
  Slope shortest;
  Slope partner;  // second successive minimum, |omega| = 1 with shortest
  Real shortest_length;
  Real partner_length;
};

// Lagrange reduction. Ties in length go to the smaller canonical slope.
ReducedBasis reduce(const FlatTorus& t);
Real systole(const FlatTorus& t);

struct Slit {
  Vec2 midpoint;
  Vec2 vec;  // in torus units, before the component scale

  Real length() const { return vec.norm(); }
  double angle() const;
};

struct SlitTorus {
  FlatTorus torus;
  std::vector<Slit> slits;
  Real scale = 1;
  double phase = 0;  // flow time since the slits were cut
  int slot = -1;     // slot index, -1 for filler tori
  double window = std::numeric_limits<double>::infinity();  // isolation half-width

  Real area() const { return scale * scale * torus.area(); }
};

struct Gluing {
  int comp_a = 0, slit_a = 0;
  int comp_b = 0, slit_b = 0;
  int curve = 0;  // gluing-curve index in the combinatorial model
  double twist_offset = 0;
};

struct SlitSurface {
  std::vector<SlitTorus> components;
  std::vector<Gluing> gluings;

  Real area() const;
  int k() const;  // number of slot components
  void validate() const;
};

SlitSurface flow(const SlitSurface& s, const Real& time);

struct ConstructionParams {
  double d = 10;
  double c = 0.1;
  double delta_ratio = 0.01;  // delta = delta_ratio * rho

  void validate() const;
};

// G has Y_1 cut at phase -d/2 and Y_2 at -3d/2. The references are lifts
// with both slots at -d/2 (first) and -3d/2 (second).
struct Construction {
  ConstructionParams params;
  double rho = 0;
  double delta = 0;
  SlitSurface G, G1, G2;  // at time 0

  SlitSurface at(const SlitSurface& family, double t) const;
};

Construction build_construction(const ConstructionParams& p);

struct ShadowParams {
  double eps = 1.0;   // extremal-length scale for the level buckets
  int short_cut = 1;  // levels at or above this are short
  bool clamp = true;  // freeze a slot outside its isolation window
};

struct FlatShadow {
  RafiSnapshot snapshot;
  std::vector<double> slot_phase;     // after clamping
  std::vector<double> glue_ext;       // extremal-length estimate
  std::vector<double> glue_loglen;    // log 1/(slit length in slot units)
};

// level = floor(log(eps/ext)), at least 0.
int length_level(double ext, double eps);

FlatShadow shadow(const SlitSurface& s, const ShadowParams& sp = {});

struct NonqcParams {
  ConstructionParams construction;
  int steps = 80;       // grid intervals on [0, 2d]
  double jitter = 0;    // fraction of a grid step, interior points only
  std::uint64_t seed = 0;
  Thresholds th;
  ShadowParams shadow;
};

struct NonqcRow {
  double t = 0;
  double orbit_diam = 0;
  double dist_to_fixed = 0;
  Slope slot1, slot2;
  double glue_loglen = 0;
};

struct NonqcResult {
  double d = 0;
  std::vector<NonqcRow> rows;
  double start = 0;     // orbit diameter at t = 0
  double end = 0;       // at t = 2d
  double midpoint = 0;  // at t = d
  double peak_t = 0;    // centre of the maximal plateau
};

NonqcResult nonqc_experiment(const NonqcParams& p);

struct LinearFit {
  double slope = 0;
  double intercept = 0;
};
LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

std::string nonqc_csv(const std::vector<NonqcRow>& rows);

}  // namespace ct
