#pragma once

#include <cstdint>
#include <variant>
#include <vector>

#include "ct/horoball.hpp"
#include "ct/marking.hpp"

namespace ct {

struct SubsurfaceRef {
  enum class Kind { slot, annulus, whole };
  Kind kind = Kind::whole;
  int slot = 0;      // Kind::slot
  CurveRef curve{};  // Kind::annulus

  static SubsurfaceRef slot_of(int i) { return {Kind::slot, i, {}}; }
  static SubsurfaceRef annulus(const CurveRef& c) { return {Kind::annulus, 0, c}; }
  static SubsurfaceRef whole() { return {}; }

  friend bool operator==(const SubsurfaceRef& a, const SubsurfaceRef& b) {
    if (a.kind != b.kind) return false;
    if (a.kind == Kind::slot) return a.slot == b.slot;
    if (a.kind == Kind::annulus) return a.curve == b.curve;
    return true;
  }
};

std::string to_string(const CurveRef& c);
std::string to_string(const SubsurfaceRef& y);
SubsurfaceRef act(int r, const SubsurfaceRef& y, int k);

struct Simplex {
  std::vector<CurveRef> curves;
};

// Rejects out-of-range indices and two distinct slopes in one slot.
void validate(const Simplex& s, int k);
Simplex act(int r, const Simplex& s, int k);

struct SlotProjection {
  Slope base;
  Slope trans;
  friend bool operator==(const SlotProjection&, const SlotProjection&) = default;
};
using BaseSet = std::vector<CurveRef>;
using ProjectionValue = std::variant<SlotProjection, HoroPoint, BaseSet>;

ProjectionValue project(const SubsurfaceRef& y, const AugMarking& m);

// Horoball coordinate of m in the annulus around c.
HoroPoint annular_coordinate(const CurveRef& c, const AugMarking& m);

std::int64_t proj_distance(const SubsurfaceRef& y, const AugMarking& a,
                           const AugMarking& b);

struct MarkedProjection {
  CurveRef curve;
  Slope trans{};          // slot curves
  std::int64_t tau = 0;   // gluing curves
  int D = 0;
  friend bool operator==(const MarkedProjection& a, const MarkedProjection& b) {
    return a.curve == b.curve && a.trans == b.trans && a.tau == b.tau && a.D == b.D;
  }
};

MarkedProjection marked_projection(const CurveRef& c, const AugMarking& m);

bool q_membership(const Simplex& s, const AugMarking& m);
AugMarking phi(const Simplex& s, const AugMarking& m);

bool interlocks(const SubsurfaceRef& y, const Simplex& s);

// Slopes in slot i whose annuli can carry a nonzero term between a and b:
// both bases and the interior vertices of the Farey geodesic joining them.
std::vector<Slope> slot_annulus_candidates(int i, const AugMarking& a,
                                           const AugMarking& b);

inline std::int64_t threshold(std::int64_t x, std::int64_t K) { return x >= K ? x : 0; }

std::int64_t distance_to_q(const Simplex& s, const AugMarking& m, int K);

}  // namespace ct
