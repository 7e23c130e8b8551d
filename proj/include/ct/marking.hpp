#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "ct/horoball.hpp"
#include "ct/slope.hpp"

namespace ct {

// k punctured-torus slots glued cyclically along k gluing curves.
struct ModelSurface {
  int k = 2;
};

struct CurveRef {
  enum class Kind { glue, in_slot };
  Kind kind = Kind::glue;
  int index = 0;  // gluing index or slot index
  Slope slope{};  // meaningful for in_slot only

  static CurveRef glue(int j) { return {Kind::glue, j, Slope{}}; }
  static CurveRef in_slot(int i, Slope s) { return {Kind::in_slot, i, s}; }
  bool is_glue() const { return kind == Kind::glue; }

  friend bool operator==(const CurveRef& a, const CurveRef& b) {
    if (a.kind != b.kind || a.index != b.index) return false;
    return a.is_glue() || a.slope == b.slope;
  }
};

struct GlueData {
  std::int64_t tau = 0;
  int D = 0;
  friend bool operator==(const GlueData&, const GlueData&) = default;
};

struct SlotData {
  Slope base{1, 0};
  Slope trans{0, 1};
  int D = 0;
  friend bool operator==(const SlotData&, const SlotData&) = default;
};

struct AugMarking {
  std::vector<GlueData> glue;
  std::vector<SlotData> slots;

  int k() const { return int(slots.size()); }
  friend bool operator==(const AugMarking&, const AugMarking&) = default;
};

struct AugMarkingHash {
  std::size_t operator()(const AugMarking& m) const noexcept;
};

inline int mod_k(std::int64_t i, int k) { return int(((i % k) + k) % k); }

// Throws ModelMismatch/PreconditionFailure on malformed markings.
void validate(const AugMarking& m);
void require_same_surface(const AugMarking& a, const AugMarking& b);

// All slots (base, trans, D) and all gluing data equal.
AugMarking uniform_marking(int k, const SlotData& slot, const GlueData& glue);

// Symmetry group Z/k acting by h^r.
struct SymmetryGroup {
  int k = 2;
  int order() const { return k; }
  int compose(int r, int s) const { return mod_k(r + s, k); }
  int inverse(int r) const { return mod_k(-r, k); }
};

AugMarking act(int r, const AugMarking& m);
CurveRef act(int r, const CurveRef& c, int k);
bool is_fixed(const AugMarking& m);

bool is_base(const CurveRef& c, const AugMarking& m);
int length_data(const CurveRef& c, const AugMarking& m);

// Number of twists allowed at length level D: floor(e^D), at least 1.
std::int64_t twist_reach(int D);

enum class FlipRule {
  relaxed,  // flipped slot needs D == 0
  strict,   // every base curve needs D == 0
};

std::vector<AugMarking> elementary_moves(const AugMarking& m,
                                         FlipRule rule = FlipRule::relaxed);
bool is_elementary_move(const AugMarking& a, const AugMarking& b,
                        FlipRule rule = FlipRule::relaxed);

// Literal bidirectional BFS over the full move graph. Only practical for
// small caps; nullopt when the distance exceeds cap.
std::optional<int> bfs_distance_literal(const AugMarking& a,
                                        const AugMarking& b, int cap,
                                        FlipRule rule = FlipRule::relaxed);

// Exact distance inside one slot factor (horoballs over slopes joined by
// flips), by best-first search with an admissible Farey lower bound.
std::optional<int> slot_move_distance(const SlotData& a, const SlotData& b,
                                      int cap);

// Exact move-graph distance under the relaxed flip rule. The graph is then
// a product of the gluing horoballs and the slot factors.
std::optional<int> bfs_distance(const AugMarking& a, const AugMarking& b,
                                int cap);

struct FixedLocusBounds {
  std::vector<Slope> bases;
  std::int64_t trans_twist = 0;  // transversal = T_base^n(reference), |n| <=
  int slot_D_max = 0;
  std::int64_t tau_max = 0;
  int glue_D_max = 0;
};

void fixed_locus_members(int k, const FixedLocusBounds& bounds,
                         const std::function<void(const AugMarking&)>& emit);
std::size_t fixed_locus_count(const FixedLocusBounds& bounds);

}  // namespace ct
