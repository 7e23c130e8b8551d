#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "ct/marking.hpp"
#include "ct/projection.hpp"

namespace ct {

struct Thresholds {
  int K = 4;      // distance-formula cut
  int K_hat = 8;  // symmetric large-link cut
  int R = 10;     // almost-fixed bound

  void validate() const;
};

struct FormulaTerm {
  SubsurfaceRef y;
  std::int64_t raw = 0;
  std::int64_t kept = 0;  // raw after the [.]_K cut
};

// Every candidate term between a and b: slots, Whole, gluing annuli and the
// slot annuli along the Farey geodesics joining the bases.
std::vector<FormulaTerm> formula_terms(const AugMarking& a, const AugMarking& b,
                                       int K);

std::int64_t formula_distance_T(const AugMarking& a, const AugMarking& b,
                                const Thresholds& th);
// Non-annular subsum.
std::int64_t formula_distance_WP(const AugMarking& a, const AugMarking& b,
                                 const Thresholds& th);

struct ShortCurve {
  CurveRef curve;
  double length = 0.0;
};

struct RafiSnapshot {
  AugMarking marking;
  std::vector<ShortCurve> short_curves;
};

struct RafiTerms {
  double subsurface = 0.0;    // thresholded non-annular terms
  double annular_log = 0.0;   // log twisting for curves not short in both
  double horoball_max = 0.0;  // curves short in both
  double length_max = 0.0;    // log 1/l for curves short in one only
  double total() const { return subsurface + annular_log + horoball_max + length_max; }
};

RafiTerms rafi_terms(const RafiSnapshot& a, const RafiSnapshot& b,
                     const Thresholds& th);
double rafi_formula(const RafiSnapshot& a, const RafiSnapshot& b,
                    const Thresholds& th);

struct LargeLink {
  SubsurfaceRef y;
  std::int64_t value = 0;
  int family = -1;
  int time_index = 0;
};

// Time index: 0 for slots and gluing annuli, 1 + geodesic position for slot
// annuli.
std::vector<LargeLink> large_links(const AugMarking& a, const AugMarking& b,
                                   int cut);

struct SymmetricFamily {
  int id = 0;
  int time_index = 0;
  std::vector<LargeLink> members;  // ordered by slot index
  double ratio = 1.0;              // max/min member value
};

struct SymmetricFamilyList {
  std::vector<SymmetricFamily> families;
};

// Time index of y for the pair (a, b), as assigned by large_links.
int time_index_of(const SubsurfaceRef& y, const AugMarking& a, const AugMarking& b);

// Groups links between x and mu into H-orbits and orders them. Throws
// SymmetryViolation when an orbit member is at or below member_cut, values
// are not comparable within `comparability`, or orbit members disagree on
// time order.
SymmetricFamilyList group_symmetric_families(const std::vector<LargeLink>& links,
                                             const AugMarking& x, const AugMarking& mu,
                                             int member_cut, double comparability);

std::vector<AugMarking> canonical_path(const AugMarking& a, const AugMarking& b);

// Inclusive index interval.
std::optional<std::pair<std::size_t, std::size_t>> active_segment(
    const std::vector<AugMarking>& path, const SubsurfaceRef& y);

}  // namespace ct
