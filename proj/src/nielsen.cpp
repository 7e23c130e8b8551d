#include "ct/nielsen.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "ct/errors.hpp"

namespace ct {

std::int64_t orbit_diameter(const AugMarking& m, const Thresholds& th) {
  return certify(m, th).diameter;
}

AlmostFixedCertificate certify(const AugMarking& m, const Thresholds& th) {
  validate(m);
  AlmostFixedCertificate c{m, 0, {}};
  // h^i m to h^j m is h^(j-i) m to m, so one row covers all pairs.
  for (int r = 1; r < m.k(); ++r) {
    auto d = formula_distance_T(m, act(r, m), th);
    c.per_element.push_back(d);
    c.diameter = std::max(c.diameter, d);
  }
  return c;
}

std::vector<CurveOrbit> symmetric_short_curves(const AugMarking& m,
                                               const Thresholds& th, int slack) {
  validate(m);
  const int k = m.k();
  const int cut = th.R + slack;
  std::vector<CurveOrbit> out;
  auto need = [&](int D) { return std::max(1, D - th.R); };

  bool glue_done = false;
  for (int j = 0; j < k && !glue_done; ++j) {
    if (m.glue[j].D <= cut) continue;
    CurveOrbit o;
    for (int r = 0; r < k; ++r) {
      if (m.glue[r].D < need(m.glue[j].D))
        throw SymmetryViolation("short gluing curve " + std::to_string(j) +
                                " has a long translate " + std::to_string(r));
      o.members.push_back(CurveRef::glue(r));
    }
    o.D = m.glue[0].D;
    out.push_back(std::move(o));
    glue_done = true;
  }
  std::set<Slope> seen;
  for (int i = 0; i < k; ++i) {
    const auto& s = m.slots[i];
    if (s.D <= cut || seen.count(s.base)) continue;
    seen.insert(s.base);
    CurveOrbit o;
    for (int r = 0; r < k; ++r) {
      if (m.slots[r].base != s.base || m.slots[r].D < need(s.D))
        throw SymmetryViolation("short curve " + to_string(s.base) + " in slot " +
                                std::to_string(i) + " is not short in slot " +
                                std::to_string(r));
      o.members.push_back(CurveRef::in_slot(r, s.base));
    }
    o.D = m.slots[0].D;
    out.push_back(std::move(o));
  }
  return out;
}

AugMarking wp_seed(const AugMarking& m) {
  validate(m);
  const auto& s0 = m.slots[0];
  double mean = 0.0;
  for (const auto& g : m.glue) mean += g.D;
  mean /= double(m.k());
  return uniform_marking(m.k(), SlotData{s0.base, reference_neighbor(s0.base), s0.D},
                         GlueData{0, int(std::lround(mean))});
}

AugMarking orbit_multitwist(const AugMarking& x, const CurveRef& c, std::int64_t e) {
  AugMarking out = x;
  if (e == 0) return out;
  for (int r = 0; r < x.k(); ++r) {
    if (c.is_glue()) {
      out.glue[r].tau += e;
      continue;
    }
    auto& s = out.slots[r];
    if (s.base != c.slope) s.base = twist(c.slope, e, s.base);
    s.trans = twist(c.slope, e, s.trans);
  }
  return out;
}

namespace {

void require_fixed(const AugMarking& x, const char* where) {
  if (!is_fixed(x)) throw InternalAssertion(std::string(where) + " produced a non-fixed marking");
}

// Offset e with T_c^e moving x's annular coordinate onto mu's.
std::int64_t annular_offset(const CurveRef& c, const AugMarking& x, const AugMarking& mu) {
  return annular_coordinate(c, mu).x - annular_coordinate(c, x).x;
}

}  // namespace

AugMarking reduce_short_curves(const AugMarking& mu, const AugMarking& seed,
                               const Thresholds& th) {
  require_same_surface(mu, seed);
  if (!is_fixed(seed)) throw PreconditionFailure("seed marking is not fixed");
  AugMarking x = seed;
  for (const auto& o : symmetric_short_curves(mu, th)) {
    const CurveRef& c = o.members[0];
    if (c.is_glue()) {
      for (auto& g : x.glue) g.D = o.D;
    } else {
      if (x.slots[0].base != c.slope) {
        auto mp = marked_projection(c, x);
        for (auto& s : x.slots) s = SlotData{c.slope, mp.trans, 0};
      }
      for (auto& s : x.slots) s.D = o.D;
    }
    x = orbit_multitwist(x, c, annular_offset(c, x, mu));
    require_fixed(x, "reduce_short_curves");
  }
  return x;
}

std::pair<AugMarking, ReductionTrace> fixed_point_search_from(
    const AugMarking& mu, const AugMarking& seed, const Thresholds& th,
    const SearchOptions& opt) {
  th.validate();
  require_same_surface(mu, seed);
  if (!is_fixed(seed)) throw PreconditionFailure("seed marking is not fixed");
  AugMarking x = seed;
  ReductionTrace trace;
  trace.initial = x;
  trace.initial_distance = formula_distance_T(x, mu, th);

  auto links = large_links(x, mu, th.K_hat);
  trace.links = std::int64_t(links.size());
  auto fams = group_symmetric_families(links, x, mu, th.K, opt.comparability).families;

  // Slot families: replace the slot marking by the input's slot 0 block.
  std::vector<SymmetricFamily> annular;
  for (auto& f : fams) {
    if (f.members[0].y.kind == SubsurfaceRef::Kind::slot) {
      const Slope b = mu.slots[0].base;
      auto mp = marked_projection(CurveRef::in_slot(0, b), x);
      for (auto& s : x.slots) s = SlotData{b, mp.trans, mp.D};
    } else {
      annular.push_back(f);
    }
  }
  if (opt.reverse_order) std::reverse(annular.begin(), annular.end());

  // Exponents come from the seed, before any stage is applied.
  std::vector<std::int64_t> offsets;
  for (const auto& f : annular) offsets.push_back(annular_offset(f.members[0].y.curve, x, mu));

  const std::int64_t slack = th.K_hat + th.R;
  for (std::size_t i = 0; i < annular.size(); ++i) {
    const auto& rep = annular[i].members[0].y;
    AugMarking prev = x;
    x = orbit_multitwist(x, rep.curve, offsets[i]);
    require_fixed(x, "fixed_point_search stage");
    ReductionStage st;
    st.family = annular[i].id;
    st.representative = rep;
    st.exponent = std::abs(offsets[i]);
    st.sign = offsets[i] < 0 ? -1 : 1;
    st.marking = x;
    st.distance = formula_distance_T(x, mu, th);
    st.residual = proj_distance(rep, x, mu);
    trace.stages.push_back(st);
    if (!opt.check_induction || opt.reverse_order) continue;
    for (std::size_t j = 0; j <= i; ++j) {
      const auto& y = annular[j].members[0].y;
      if (proj_distance(y, x, mu) > slack)
        throw InternalAssertion("processed family " + to_string(y) + " kept a large residual");
    }
    for (std::size_t j = i + 1; j < annular.size(); ++j) {
      const auto& y = annular[j].members[0].y;
      if (proj_distance(y, x, prev) > slack)
        throw InternalAssertion("stage moved unprocessed family " + to_string(y));
    }
  }
  if (std::int64_t(trace.stages.size()) > std::max<std::int64_t>(trace.links, 0))
    throw InternalAssertion("more stages than large links");

  // Symmetric offsets below the link cut on the gluing and base orbits.
  if (opt.polish) {
    for (const CurveRef& c : {CurveRef::glue(0), CurveRef::in_slot(0, x.slots[0].base)}) {
      auto y = orbit_multitwist(x, c, annular_offset(c, x, mu));
      if (formula_distance_T(y, mu, th) < formula_distance_T(x, mu, th)) {
        x = y;
        ++trace.polish_twists;
      }
    }
  }
  require_fixed(x, "fixed_point_search");
  trace.final_distance = formula_distance_T(x, mu, th);
  return {x, trace};
}

std::pair<AugMarking, ReductionTrace> fixed_point_search(const AugMarking& mu,
                                                         const Thresholds& th,
                                                         const SearchOptions& opt) {
  th.validate();
  validate(mu);
  if (is_fixed(mu)) {
    ReductionTrace t;
    t.initial = mu;
    return {mu, t};
  }
  auto cert = certify(mu, th);
  AugMarking seed = reduce_short_curves(mu, wp_seed(mu), th);
  // Grouping raises SymmetryViolation on asymmetric links before the
  // diameter check, so that failure mode is reported first.
  group_symmetric_families(large_links(seed, mu, th.K_hat), seed, mu, th.K, opt.comparability);
  if (cert.diameter > th.R)
    throw PreconditionFailure("orbit diameter " + std::to_string(cert.diameter) +
                              " exceeds R = " + std::to_string(th.R));
  return fixed_point_search_from(mu, seed, th, opt);
}

namespace {

HoroPoint horo_center(const std::vector<HoroPoint>& pts) {
  std::set<std::int64_t> xs;
  int top = 0;
  std::int64_t lo = pts[0].x, hi = pts[0].x;
  for (const auto& p : pts) {
    xs.insert(p.x);
    top = std::max(top, p.level);
    lo = std::min(lo, p.x);
    hi = std::max(hi, p.x);
  }
  for (const auto& p : pts)
    for (const auto& q : pts) xs.insert(p.x + (q.x - p.x) / 2);
  const int levels = top + 2 + int(std::ceil(std::log(double(hi - lo) + 1.0)));
  HoroPoint best = pts[0];
  std::int64_t best_cost = -1, best_sum = 0;
  for (std::int64_t x : xs)
    for (int l = 0; l <= levels; ++l) {
      std::int64_t cost = 0, sum = 0;
      for (const auto& p : pts) {
        auto d = horo_distance({x, l}, p);
        cost = std::max(cost, d);
        sum += d;
      }
      if (best_cost < 0 || cost < best_cost || (cost == best_cost && sum < best_sum)) {
        best_cost = cost;
        best_sum = sum;
        best = {x, l};
      }
    }
  return best;
}

Slope farey_center(const std::vector<Slope>& bases) {
  std::set<Slope> cand;
  for (const auto& a : bases)
    for (const auto& b : bases)
      for (const auto& v : farey_geodesic(a, b)) cand.insert(v);
  Slope best = bases[0];
  std::int64_t best_max = -1, best_sum = 0;
  for (const auto& c : cand) {
    std::int64_t mx = 0, sum = 0;
    for (const auto& b : bases) {
      auto d = farey_distance(c, b);
      mx = std::max(mx, d);
      sum += d;
    }
    if (best_max < 0 || mx < best_max || (mx == best_max && sum < best_sum)) {
      best_max = mx;
      best_sum = sum;
      best = c;
    }
  }
  return best;
}

}  // namespace

AugMarking coarse_barycenter(const AugMarking& sigma, const Thresholds& th,
                             const SearchOptions& opt) {
  th.validate();
  validate(sigma);
  if (is_fixed(sigma)) return sigma;
  const int k = sigma.k();

  std::vector<Slope> bases;
  for (const auto& s : sigma.slots) bases.push_back(s.base);
  const Slope beta = farey_center(bases);
  std::vector<HoroPoint> slot_pts, glue_pts;
  for (int i = 0; i < k; ++i) {
    slot_pts.push_back(annular_coordinate(CurveRef::in_slot(i, beta), sigma));
    glue_pts.push_back(annular_coordinate(CurveRef::glue(i), sigma));
  }
  const HoroPoint bs = horo_center(slot_pts), bg = horo_center(glue_pts);
  AugMarking x = uniform_marking(
      k, SlotData{beta, twist(beta, bs.x, reference_neighbor(beta)), bs.level},
      GlueData{bg.x, bg.level});
  require_fixed(x, "coarse_barycenter");

  // Orbitwise reduction; kept only when it helps.
  SearchOptions lenient = opt;
  lenient.comparability = 1e18;
  lenient.check_induction = false;
  lenient.reverse_order = false;
  lenient.polish = true;
  try {
    auto refined = fixed_point_search_from(sigma, x, th, lenient).first;
    if (formula_distance_T(sigma, refined, th) < formula_distance_T(sigma, x, th))
      x = refined;
  } catch (const SymmetryViolation&) {
  }
  require_fixed(x, "coarse_barycenter");
  return x;
}

}  // namespace ct
