#include "ct/projection.hpp"

#include <algorithm>
#include <set>

#include "ct/errors.hpp"

namespace ct {

std::string to_string(const CurveRef& c) {
  if (c.is_glue()) return "glue" + std::to_string(c.index);
  return "slot" + std::to_string(c.index) + ":" + to_string(c.slope);
}

std::string to_string(const SubsurfaceRef& y) {
  switch (y.kind) {
    case SubsurfaceRef::Kind::slot:
      return "Slot(" + std::to_string(y.slot) + ")";
    case SubsurfaceRef::Kind::annulus:
      return "Annulus(" + to_string(y.curve) + ")";
    case SubsurfaceRef::Kind::whole:
      break;
  }
  return "Whole";
}

SubsurfaceRef act(int r, const SubsurfaceRef& y, int k) {
  SubsurfaceRef out = y;
  if (y.kind == SubsurfaceRef::Kind::slot) out.slot = mod_k(y.slot + r, k);
  if (y.kind == SubsurfaceRef::Kind::annulus) out.curve = act(r, y.curve, k);
  return out;
}

void validate(const Simplex& s, int k) {
  std::vector<const Slope*> seen(k, nullptr);
  for (const auto& c : s.curves) {
    if (c.index < 0 || c.index >= k) throw ModelMismatch("curve index out of range");
    if (c.is_glue()) continue;
    require_canonical(c.slope);
    if (seen[c.index] && !(*seen[c.index] == c.slope))
      throw PreconditionFailure("simplex holds two intersecting slopes in one slot");
    seen[c.index] = &c.slope;
  }
}

Simplex act(int r, const Simplex& s, int k) {
  Simplex out;
  for (const auto& c : s.curves) out.curves.push_back(act(r, c, k));
  return out;
}

HoroPoint annular_coordinate(const CurveRef& c, const AugMarking& m) {
  if (c.is_glue()) {
    const auto& g = m.glue.at(c.index);
    return {g.tau, g.D};
  }
  const auto& s = m.slots.at(c.index);
  const Slope ref = reference_neighbor(c.slope);
  if (s.base == c.slope) return {twist_offset(c.slope, ref, s.trans), s.D};
  return {relative_twisting(c.slope, ref, s.base), 0};
}

ProjectionValue project(const SubsurfaceRef& y, const AugMarking& m) {
  switch (y.kind) {
    case SubsurfaceRef::Kind::slot: {
      const auto& s = m.slots.at(y.slot);
      return SlotProjection{s.base, s.trans};
    }
    case SubsurfaceRef::Kind::annulus:
      return annular_coordinate(y.curve, m);
    case SubsurfaceRef::Kind::whole:
      break;
  }
  BaseSet out;
  for (int j = 0; j < m.k(); ++j) out.push_back(CurveRef::glue(j));
  for (int i = 0; i < m.k(); ++i) out.push_back(CurveRef::in_slot(i, m.slots[i].base));
  return out;
}

namespace {

// Curve-graph distance on the model surface between two base curves.
int whole_curve_distance(const CurveRef& a, const CurveRef& b) {
  if (a == b) return 0;
  if (a.is_glue() || b.is_glue() || a.index != b.index) return 1;
  return 2;
}

int hausdorff(const BaseSet& x, const BaseSet& y) {
  auto one_side = [](const BaseSet& u, const BaseSet& v) {
    int worst = 0;
    for (const auto& a : u) {
      int best = 2;
      for (const auto& b : v) best = std::min(best, whole_curve_distance(a, b));
      worst = std::max(worst, best);
    }
    return worst;
  };
  return std::max(one_side(x, y), one_side(y, x));
}

}  // namespace

std::int64_t proj_distance(const SubsurfaceRef& y, const AugMarking& a,
                           const AugMarking& b) {
  require_same_surface(a, b);
  switch (y.kind) {
    case SubsurfaceRef::Kind::slot:
      return farey_distance(a.slots.at(y.slot).base, b.slots.at(y.slot).base);
    case SubsurfaceRef::Kind::annulus:
      return horo_distance(annular_coordinate(y.curve, a),
                           annular_coordinate(y.curve, b));
    case SubsurfaceRef::Kind::whole:
      break;
  }
  return hausdorff(std::get<BaseSet>(project(y, a)), std::get<BaseSet>(project(y, b)));
}

MarkedProjection marked_projection(const CurveRef& c, const AugMarking& m) {
  MarkedProjection out{c, Slope{}, 0, 0};
  if (c.is_glue()) {
    const auto& g = m.glue.at(c.index);
    out.tau = g.tau;
    out.D = g.D;
    return out;
  }
  const auto& s = m.slots.at(c.index);
  if (s.base == c.slope) {
    out.trans = s.trans;
    out.D = s.D;
    return out;
  }
  const Slope ref = reference_neighbor(c.slope);
  out.trans = twist(c.slope, relative_twisting(c.slope, ref, s.base), ref);
  return out;
}

bool q_membership(const Simplex& s, const AugMarking& m) {
  for (const auto& c : s.curves)
    if (!is_base(c, m)) return false;
  return true;
}

AugMarking phi(const Simplex& s, const AugMarking& m) {
  validate(s, m.k());
  AugMarking out = m;
  for (const auto& c : s.curves) {
    if (c.is_glue() || is_base(c, m)) continue;
    auto mp = marked_projection(c, m);
    out.slots[c.index] = SlotData{c.slope, mp.trans, mp.D};
  }
  return out;
}

bool interlocks(const SubsurfaceRef& y, const Simplex& s) {
  for (const auto& c : s.curves) {
    if (c.is_glue()) continue;
    if (y.kind == SubsurfaceRef::Kind::slot && y.slot == c.index) return true;
    if (y.kind == SubsurfaceRef::Kind::annulus && !y.curve.is_glue() &&
        y.curve.index == c.index && intersection(y.curve.slope, c.slope) != 0)
      return true;
  }
  return false;
}

std::vector<Slope> slot_annulus_candidates(int i, const AugMarking& a,
                                           const AugMarking& b) {
  const Slope& x = a.slots.at(i).base;
  const Slope& y = b.slots.at(i).base;
  std::vector<Slope> out = farey_geodesic(x, y);
  std::set<Slope> seen(out.begin(), out.end());
  out.assign(seen.begin(), seen.end());
  return out;
}

std::int64_t distance_to_q(const Simplex& s, const AugMarking& m, int K) {
  if (K < 1) throw PreconditionFailure("threshold must be positive");
  const AugMarking p = phi(s, m);
  std::int64_t total = 0;
  std::set<int> slots;
  for (const auto& c : s.curves)
    if (!c.is_glue()) slots.insert(c.index);
  for (int i : slots) {
    auto y = SubsurfaceRef::slot_of(i);
    if (interlocks(y, s)) total += threshold(proj_distance(y, m, p), K);
    for (const Slope& c : slot_annulus_candidates(i, m, p)) {
      auto a = SubsurfaceRef::annulus(CurveRef::in_slot(i, c));
      if (interlocks(a, s)) total += threshold(proj_distance(a, m, p), K);
    }
  }
  return total;
}

}  // namespace ct
