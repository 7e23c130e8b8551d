#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "ct/calibration.hpp"
#include "ct/config.hpp"
#include "ct/flat_sim.hpp"
#include "ct/marking.hpp"
#include "ct/metrics.hpp"
#include "ct/nielsen.hpp"

namespace ct {

// Random walk of elementary moves keeping every length datum <= max_D.
AugMarking random_walk(std::mt19937_64& rng, AugMarking m, int steps, int max_D = 3);
AugMarking random_marking(std::mt19937_64& rng, int k, int steps = 40);
// Fixed marking with a small base slope and small twists.
AugMarking random_fixed_marking(std::mt19937_64& rng, int k);
// Slot whose base (MN-1)/N is reached from 1/0 through the pivot M/1.
SlotData two_pivot_slot(std::int64_t M, std::int64_t N);

// Horoball against BFS on the box; number of mismatching pairs.
struct HoroExactness {
  std::size_t pairs = 0;
  std::size_t mismatches = 0;
};
HoroExactness horo_exactness(std::int64_t x_max, int level_max);

// Move-graph distance vs formula distance.
struct DistanceSample {
  int k = 2;
  int bfs = 0;
  std::int64_t formula = 0;
};
std::vector<DistanceSample> distance_samples(int k, int basepoints, int cap, int per_base,
                                             std::uint64_t seed, const Thresholds& th);
struct QiFit {
  double L = 1;
  int C = 0;
};
QiFit fit_quasi_isometry(const std::vector<DistanceSample>& s, int reference_distance);
std::size_t qi_violations(const std::vector<DistanceSample>& s, double L, int C);

// Equivariance of length data and formula distance under the symmetry.
struct EquivarianceStats {
  std::size_t cases = 0;
  std::size_t failures = 0;
};
EquivarianceStats equivariance_suite(std::size_t cases, std::uint64_t seed,
                                     const Thresholds& th);

struct PhiStats {
  std::size_t triples = 0;
  std::int64_t lipschitz = 0;       // max over one-move pairs
  std::int64_t closest_excess = 0;  // max of d(mu, phi) - min enumerated d(mu, X)
  std::int64_t commuting = 0;       // max between the two composites
  std::size_t idempotence_failures = 0;
  std::size_t equivariance_failures = 0;
};
PhiStats phi_suite(std::size_t triples, std::uint64_t seed, const Thresholds& th);

// Fixed marking twisted by m on a symmetric orbit and nudged off the fixed
// locus, R-almost-fixed.
AugMarking planted_almost_fixed(std::uint64_t seed, int k, std::int64_t m, const Thresholds& th);

struct SweepRow {
  int k = 2;
  int instance = 0;
  std::int64_t magnitude = 0;
  std::int64_t final_distance = 0;
  bool fixed = false;
  std::size_t stages = 0;
  double max_family_ratio = 1;
};
const std::vector<std::int64_t>& sweep_magnitudes();
std::vector<SweepRow> magnitude_sweep(int k, int instances, std::uint64_t seed,
                                      const Thresholds& th);
// max/min of final distance (floored at 1) per instance; the largest one.
double worst_sweep_ratio(const std::vector<SweepRow>& rows);

struct AdversarialStats {
  std::size_t instances = 0;
  std::size_t triggered = 0;
};
AdversarialStats adversarial_suite(std::size_t instances, std::uint64_t seed,
                                   const Thresholds& th);

struct BaryRow {
  int k = 2;
  double displacement = 0;
  double distance = 0;
};
std::vector<BaryRow> barycenter_sweep(int k, int instances, std::uint64_t seed,
                                      const Thresholds& th);

LinearFit barycenter_fit(const std::vector<BaryRow>& rows);

struct ActiveStats {
  std::size_t paths = 0;
  std::size_t families_checked = 0;
  std::size_t violations = 0;
  std::int64_t drift = 0;  // max projection change outside active segments
};
ActiveStats active_segment_suite(std::size_t paths, std::uint64_t seed, const Thresholds& th);

struct NonqcSweep {
  std::vector<NonqcResult> runs;
  LinearFit midpoint_fit;
  double endpoint_max = 0;
};
NonqcSweep nonqc_sweep(const Config& cfg);

// Fits every pinned constant from fixed-seed sweeps.
Calibration calibrate(const Config& cfg);

}  // namespace ct
