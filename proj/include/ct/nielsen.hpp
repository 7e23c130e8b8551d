#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "ct/marking.hpp"
#include "ct/metrics.hpp"

namespace ct {

struct AlmostFixedCertificate {
  AugMarking marking;
  std::int64_t diameter = 0;
  std::vector<std::int64_t> per_element;  // distance to h^r for r = 1..k-1
};

std::int64_t orbit_diameter(const AugMarking& m, const Thresholds& th);
AlmostFixedCertificate certify(const AugMarking& m, const Thresholds& th);

struct CurveOrbit {
  std::vector<CurveRef> members;  // starting at index 0
  int D = 0;                      // length datum of the representative
};

// Orbits of curves whose length datum exceeds R + slack.
std::vector<CurveOrbit> symmetric_short_curves(const AugMarking& m,
                                               const Thresholds& th,
                                               int slack = 2);

// Fixed seed: slot 0 copied everywhere with the reference transversal,
// gluing lengths averaged and twists cleared.
AugMarking wp_seed(const AugMarking& m);

// Applies the symmetric multitwist T^e on the orbit of c to a fixed marking.
AugMarking orbit_multitwist(const AugMarking& x, const CurveRef& c, std::int64_t e);

AugMarking reduce_short_curves(const AugMarking& mu, const AugMarking& seed,
                               const Thresholds& th);

struct ReductionStage {
  int family = 0;
  SubsurfaceRef representative;
  std::int64_t exponent = 0;  // d_i
  int sign = 1;               // s_i
  AugMarking marking;         // X_i
  std::int64_t distance = 0;  // formula distance from X_i to the input
  std::int64_t residual = 0;  // representative annulus distance after the stage
};

struct ReductionTrace {
  int version = 1;
  AugMarking initial;  // X' after short-curve reduction
  std::int64_t initial_distance = 0;
  std::int64_t links = 0;
  std::vector<ReductionStage> stages;
  int polish_twists = 0;  // sub-threshold orbit twists applied at the end
  std::int64_t final_distance = 0;
};

struct SearchOptions {
  double comparability = 2.0;
  bool reverse_order = false;  // negative control
  bool check_induction = true;
  bool polish = true;
};

std::pair<AugMarking, ReductionTrace> fixed_point_search(const AugMarking& mu,
                                                         const Thresholds& th,
                                                         const SearchOptions& opt = {});

// Same stages from an explicit fixed seed, skipping short-curve reduction
// and the almost-fixed check.
std::pair<AugMarking, ReductionTrace> fixed_point_search_from(
    const AugMarking& mu, const AugMarking& seed, const Thresholds& th,
    const SearchOptions& opt = {});

// Generator is h^1.
AugMarking coarse_barycenter(const AugMarking& sigma, const Thresholds& th,
                             const SearchOptions& opt = {});

}  // namespace ct
