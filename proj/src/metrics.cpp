#include "ct/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "ct/errors.hpp"

namespace ct {

void Thresholds::validate() const {
  if (K < 1 || K_hat < K || R < 1)
    throw PreconditionFailure("thresholds need 1 <= K <= K_hat and R >= 1");
}

std::vector<FormulaTerm> formula_terms(const AugMarking& a, const AugMarking& b,
                                       int K) {
  require_same_surface(a, b);
  std::vector<FormulaTerm> out;
  auto add = [&](const SubsurfaceRef& y) {
    auto raw = proj_distance(y, a, b);
    out.push_back({y, raw, threshold(raw, K)});
  };
  for (int i = 0; i < a.k(); ++i) add(SubsurfaceRef::slot_of(i));
  add(SubsurfaceRef::whole());
  for (int j = 0; j < a.k(); ++j) add(SubsurfaceRef::annulus(CurveRef::glue(j)));
  for (int i = 0; i < a.k(); ++i)
    for (const Slope& c : slot_annulus_candidates(i, a, b))
      add(SubsurfaceRef::annulus(CurveRef::in_slot(i, c)));
  return out;
}

std::int64_t formula_distance_T(const AugMarking& a, const AugMarking& b,
                                const Thresholds& th) {
  std::int64_t s = 0;
  for (const auto& t : formula_terms(a, b, th.K)) s += t.kept;
  return s;
}

std::int64_t formula_distance_WP(const AugMarking& a, const AugMarking& b,
                                 const Thresholds& th) {
  require_same_surface(a, b);
  std::int64_t s = threshold(proj_distance(SubsurfaceRef::whole(), a, b), th.K);
  for (int i = 0; i < a.k(); ++i)
    s += threshold(proj_distance(SubsurfaceRef::slot_of(i), a, b), th.K);
  return s;
}

namespace {

std::optional<double> short_length(const RafiSnapshot& s, const CurveRef& c) {
  for (const auto& sc : s.short_curves)
    if (sc.curve == c) return sc.length;
  return std::nullopt;
}

void check_lengths(const RafiSnapshot& s) {
  for (const auto& sc : s.short_curves)
    if (!(sc.length > 0.0)) throw PreconditionFailure("short-curve length must be positive");
}

}  // namespace

RafiTerms rafi_terms(const RafiSnapshot& a, const RafiSnapshot& b,
                     const Thresholds& th) {
  check_lengths(a);
  check_lengths(b);
  const auto& ma = a.marking;
  const auto& mb = b.marking;
  require_same_surface(ma, mb);
  RafiTerms t;
  t.subsurface = double(formula_distance_WP(ma, mb, th));

  std::vector<CurveRef> annuli;
  for (int j = 0; j < ma.k(); ++j) annuli.push_back(CurveRef::glue(j));
  for (int i = 0; i < ma.k(); ++i)
    for (const Slope& c : slot_annulus_candidates(i, ma, mb))
      annuli.push_back(CurveRef::in_slot(i, c));
  for (const auto& sc : a.short_curves)
    if (std::find(annuli.begin(), annuli.end(), sc.curve) == annuli.end())
      annuli.push_back(sc.curve);
  for (const auto& sc : b.short_curves)
    if (std::find(annuli.begin(), annuli.end(), sc.curve) == annuli.end())
      annuli.push_back(sc.curve);

  for (const auto& c : annuli) {
    auto la = short_length(a, c), lb = short_length(b, c);
    HoroPoint pa = annular_coordinate(c, ma), pb = annular_coordinate(c, mb);
    if (la && lb) {
      t.horoball_max = std::max(t.horoball_max, double(horo_distance(pa, pb)));
      continue;
    }
    const double dx = std::abs(double(pa.x) - double(pb.x));
    if (dx >= 1.0) {
      const double v = std::log(dx);
      if (v >= th.K) t.annular_log += v;
    }
    for (auto l : {la, lb})
      if (l) t.length_max = std::max(t.length_max, std::log(1.0 / *l));
  }
  return t;
}

double rafi_formula(const RafiSnapshot& a, const RafiSnapshot& b,
                    const Thresholds& th) {
  return rafi_terms(a, b, th).total();
}

std::vector<LargeLink> large_links(const AugMarking& a, const AugMarking& b,
                                   int cut) {
  if (cut < 1) throw PreconditionFailure("cut must be positive");
  require_same_surface(a, b);
  std::vector<LargeLink> out;
  for (int i = 0; i < a.k(); ++i) {
    auto y = SubsurfaceRef::slot_of(i);
    auto v = proj_distance(y, a, b);
    if (v > cut) out.push_back({y, v, -1, 0});
  }
  for (int j = 0; j < a.k(); ++j) {
    auto y = SubsurfaceRef::annulus(CurveRef::glue(j));
    auto v = proj_distance(y, a, b);
    if (v > cut) out.push_back({y, v, -1, 0});
  }
  for (int i = 0; i < a.k(); ++i) {
    auto geo = farey_geodesic(a.slots[i].base, b.slots[i].base);
    for (std::size_t p = 0; p < geo.size(); ++p) {
      auto y = SubsurfaceRef::annulus(CurveRef::in_slot(i, geo[p]));
      auto v = proj_distance(y, a, b);
      if (v > cut) out.push_back({y, v, -1, int(1 + p)});
    }
  }
  return out;
}

namespace {

int slot_of(const SubsurfaceRef& y) {
  return y.kind == SubsurfaceRef::Kind::slot ? y.slot : y.curve.index;
}

bool interlock_in_slot(const SubsurfaceRef& x, const SubsurfaceRef& y) {
  if (x.kind != SubsurfaceRef::Kind::annulus || y.kind != SubsurfaceRef::Kind::annulus)
    return false;
  if (x.curve.is_glue() || y.curve.is_glue() || x.curve.index != y.curve.index)
    return false;
  return intersection(x.curve.slope, y.curve.slope) != 0;
}

}  // namespace

int time_index_of(const SubsurfaceRef& y, const AugMarking& a, const AugMarking& b) {
  if (y.kind != SubsurfaceRef::Kind::annulus || y.curve.is_glue()) return 0;
  const int i = y.curve.index;
  auto geo = farey_geodesic(a.slots.at(i).base, b.slots.at(i).base);
  for (std::size_t p = 0; p < geo.size(); ++p)
    if (geo[p] == y.curve.slope) return int(1 + p);
  return 0;
}

SymmetricFamilyList group_symmetric_families(const std::vector<LargeLink>& links,
                                             const AugMarking& x, const AugMarking& mu,
                                             int member_cut, double comparability) {
  require_same_surface(x, mu);
  const int k = mu.k();
  SymmetricFamilyList out;
  std::vector<bool> used(links.size(), false);
  for (std::size_t i = 0; i < links.size(); ++i) {
    if (used[i]) continue;
    if (links[i].y.kind == SubsurfaceRef::Kind::whole)
      throw SymmetryViolation("whole-surface link cannot form a symmetric family");
    SymmetricFamily fam;
    // Start the orbit at slot 0 so the representative has the smallest index.
    const int shift = mod_k(-slot_of(links[i].y), k);
    for (int r = 0; r < k; ++r) {
      auto y = act(mod_k(shift + r, k), links[i].y, k);
      LargeLink member{y, proj_distance(y, x, mu), -1, time_index_of(y, x, mu)};
      if (member.value <= member_cut)
        throw SymmetryViolation("orbit of " + to_string(links[i].y) + " is missing " +
                                to_string(y));
      for (std::size_t j = 0; j < links.size(); ++j)
        if (links[j].y == y) used[j] = true;
      fam.members.push_back(member);
    }
    std::int64_t lo = fam.members[0].value, hi = lo;
    fam.time_index = fam.members[0].time_index;
    for (const auto& m : fam.members) {
      lo = std::min(lo, m.value);
      hi = std::max(hi, m.value);
      fam.time_index = std::min(fam.time_index, m.time_index);
    }
    fam.ratio = double(hi) / double(std::max<std::int64_t>(1, lo));
    if (fam.ratio > comparability)
      throw SymmetryViolation("orbit values of " + to_string(links[i].y) +
                              " are not comparable");
    out.families.push_back(std::move(fam));
  }
  std::stable_sort(out.families.begin(), out.families.end(),
                   [](const SymmetricFamily& x, const SymmetricFamily& y) {
                     return x.time_index < y.time_index;
                   });
  for (std::size_t f = 0; f < out.families.size(); ++f) {
    out.families[f].id = int(f);
    for (auto& m : out.families[f].members) m.family = int(f);
  }
  // Interlocking families must be traversed in the same order in every slot.
  for (std::size_t f = 0; f < out.families.size(); ++f)
    for (std::size_t g = f + 1; g < out.families.size(); ++g)
      for (const auto& x : out.families[f].members)
        for (const auto& y : out.families[g].members)
          if (interlock_in_slot(x.y, y.y) && x.time_index >= y.time_index)
            throw SymmetryViolation("time order of " + to_string(x.y) + " and " +
                                    to_string(y.y) + " is inconsistent");
  return out;
}

namespace {

void follow_glue(std::vector<AugMarking>& path, int j, const HoroPoint& to) {
  AugMarking cur = path.back();
  auto steps = horo_normal_path({cur.glue[j].tau, cur.glue[j].D}, to);
  for (std::size_t s = 1; s < steps.size(); ++s) {
    cur.glue[j] = GlueData{steps[s].x, steps[s].level};
    path.push_back(cur);
  }
}

// Moves slot i within the horoball of its current base, from the current
// transversal to twist offset `target` at `level`.
void follow_slot(std::vector<AugMarking>& path, int i, std::int64_t target,
                 int level) {
  AugMarking cur = path.back();
  const Slope base = cur.slots[i].base;
  auto steps = horo_normal_path({0, cur.slots[i].D}, {target, level});
  for (std::size_t s = 1; s < steps.size(); ++s) {
    const std::int64_t dx = steps[s].x - steps[s - 1].x;
    if (dx != 0) cur.slots[i].trans = twist(base, dx, cur.slots[i].trans);
    cur.slots[i].D = steps[s].level;
    path.push_back(cur);
  }
}

}  // namespace

std::vector<AugMarking> canonical_path(const AugMarking& a, const AugMarking& b) {
  require_same_surface(a, b);
  std::vector<AugMarking> path{a};
  const int k = a.k();
  for (int j = 0; j < k; ++j) follow_glue(path, j, {b.glue[j].tau, b.glue[j].D});

  std::vector<std::vector<Slope>> geo(k);
  std::size_t longest = 0;
  for (int i = 0; i < k; ++i) {
    geo[i] = farey_geodesic(a.slots[i].base, b.slots[i].base);
    longest = std::max(longest, geo[i].size());
  }
  for (std::size_t step = 0; step + 1 < longest; ++step)
    for (int i = 0; i < k; ++i) {
      if (step + 1 >= geo[i].size()) continue;
      const auto& cur = path.back().slots[i];
      follow_slot(path, i, twist_offset(cur.base, cur.trans, geo[i][step + 1]), 0);
      AugMarking flipped = path.back();
      std::swap(flipped.slots[i].base, flipped.slots[i].trans);
      path.push_back(flipped);
    }
  for (int i = 0; i < k; ++i) {
    const auto& cur = path.back().slots[i];
    follow_slot(path, i, twist_offset(cur.base, cur.trans, b.slots[i].trans), b.slots[i].D);
  }
  if (!(path.back() == b)) throw InternalAssertion("canonical path missed its endpoint");
  return path;
}

std::optional<std::pair<std::size_t, std::size_t>> active_segment(
    const std::vector<AugMarking>& path, const SubsurfaceRef& y) {
  if (path.empty()) return std::nullopt;
  if (y.kind != SubsurfaceRef::Kind::annulus || y.curve.is_glue())
    return std::make_pair(std::size_t(0), path.size() - 1);
  std::size_t s = 0;
  while (s < path.size() && !is_base(y.curve, path[s])) ++s;
  if (s == path.size()) return std::nullopt;
  std::size_t e = s;
  while (e + 1 < path.size() && is_base(y.curve, path[e + 1])) ++e;
  return std::make_pair(s, e);
}

}  // namespace ct
