#include "ct/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "ct/errors.hpp"
#include "ct/horoball.hpp"
#include "ct/projection.hpp"

namespace ct {

AugMarking random_walk(std::mt19937_64& rng, AugMarking m, int steps, int max_D) {
  for (int s = 0; s < steps; ++s) {
    auto nb = elementary_moves(m);
    std::uniform_int_distribution<std::size_t> pick(0, nb.size() - 1);
    const auto& n = nb[pick(rng)];
    bool ok = true;
    for (const auto& sl : n.slots) ok = ok && sl.D <= max_D;
    for (const auto& g : n.glue) ok = ok && g.D <= max_D;
    if (ok) m = n;
  }
  return m;
}

AugMarking random_marking(std::mt19937_64& rng, int k, int steps) {
  return random_walk(rng, uniform_marking(k, SlotData{}, GlueData{}), steps);
}

namespace {

const std::vector<Slope> kSmallSlopes{Slope{1, 0}, Slope{0, 1}, Slope{1, 1}, Slope{-1, 1},
                                      Slope{2, 1}, Slope{1, 2}, Slope{3, 2}, Slope{-2, 5}};

template <class T>
T pick(std::mt19937_64& rng, const std::vector<T>& v) {
  std::uniform_int_distribution<std::size_t> d(0, v.size() - 1);
  return v[d(rng)];
}

std::int64_t uniform(std::mt19937_64& rng, std::int64_t lo, std::int64_t hi) {
  return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng);
}

// 10^u for u uniform in [0, decades].
std::int64_t log_uniform(std::mt19937_64& rng, double decades) {
  const double u = std::uniform_real_distribution<double>(0, decades)(rng);
  return std::max<std::int64_t>(1, std::llround(std::pow(10.0, u)));
}

// A slope a few twists away from s.
Slope nearby_slope(std::mt19937_64& rng, const Slope& s) {
  Slope c = s;
  const int hops = int(uniform(rng, 1, 3));
  for (int h = 0; h < hops; ++h) c = twist(c, uniform(rng, -3, 3), reference_neighbor(c));
  return c;
}

}  // namespace

AugMarking random_fixed_marking(std::mt19937_64& rng, int k) {
  Slope b = pick(rng, kSmallSlopes);
  return uniform_marking(k,
                         SlotData{b, twist(b, uniform(rng, -3, 3), reference_neighbor(b)),
                                  int(uniform(rng, 0, 2))},
                         GlueData{uniform(rng, -3, 3), int(uniform(rng, 0, 2))});
}

SlotData two_pivot_slot(std::int64_t M, std::int64_t N) {
  return SlotData{make_slope(M * N - 1, N), Slope{M, 1}, 0};
}

HoroExactness horo_exactness(std::int64_t x_max, int level_max) {
  if (x_max < 0 || level_max < 0) throw PreconditionFailure("empty horoball box");
  // Geodesics between box points stay inside the x-span and climb at most a
  // few levels above the apex log(2 x_max).
  const int box_level = std::max(level_max, int(std::ceil(std::log(2.0 * x_max + 1)))) + 3;
  HoroExactness out;
  for (std::int64_t x = -x_max; x <= x_max; ++x)
    for (int l = 0; l <= level_max; ++l) {
      auto dist = horo_bfs_box({x, l}, x_max, box_level);
      for (std::int64_t y = -x_max; y <= x_max; ++y)
        for (int m = 0; m <= level_max; ++m) {
          ++out.pairs;
          if (dist[(y + x_max) * (box_level + 1) + m] != horo_distance({x, l}, {y, m}))
            ++out.mismatches;
        }
    }
  return out;
}

std::vector<DistanceSample> distance_samples(int k, int basepoints, int cap, int per_base,
                                             std::uint64_t seed, const Thresholds& th) {
  std::mt19937_64 rng(seed);
  std::vector<DistanceSample> out;
  for (int b = 0; b < basepoints; ++b) {
    const AugMarking base = random_marking(rng, k, 40);
    for (int t = 0; t < per_base; ++t) {
      AugMarking y = base;
      switch (t % 3) {
        case 0:
          break;
        case 1: {
          const int j = int(uniform(rng, 0, k - 1));
          y.glue[j].tau += uniform(rng, -300, 300);
          break;
        }
        default: {
          const int i = int(uniform(rng, 0, k - 1));
          y.slots[i].trans = twist(y.slots[i].base, uniform(rng, -300, 300), y.slots[i].trans);
          break;
        }
      }
      y = random_walk(rng, y, int(uniform(rng, 1, 2 * cap)));
      auto d = bfs_distance(base, y, cap);
      if (!d) continue;
      out.push_back({k, *d, formula_distance_T(base, y, th)});
    }
  }
  return out;
}

namespace {

int qi_additive(const std::vector<DistanceSample>& s, double L) {
  double worst = 0;
  for (const auto& x : s) {
    worst = std::max(worst, double(x.bfs) / L - double(x.formula));
    worst = std::max(worst, double(x.formula) - L * double(x.bfs));
  }
  return int(std::ceil(worst - 1e-9));
}

}  // namespace

QiFit fit_quasi_isometry(const std::vector<DistanceSample>& s, int reference_distance) {
  if (s.empty()) throw PreconditionFailure("no distance samples");
  QiFit best{0, 0};
  double best_cost = 0;
  for (double L : {1.0, 1.25, 1.5, 2.0, 2.5, 3.0, 4.0, 5.0, 6.0, 8.0}) {
    const int C = qi_additive(s, L);
    const double cost = L * reference_distance + C;
    if (best.L == 0 || cost < best_cost) {
      best = {L, C};
      best_cost = cost;
    }
  }
  return best;
}

std::size_t qi_violations(const std::vector<DistanceSample>& s, double L, int C) {
  std::size_t bad = 0;
  for (const auto& x : s)
    if (double(x.bfs) / L > double(x.formula) + C || double(x.formula) > L * x.bfs + C) ++bad;
  return bad;
}

EquivarianceStats equivariance_suite(std::size_t cases, std::uint64_t seed,
                                     const Thresholds& th) {
  std::mt19937_64 rng(seed);
  EquivarianceStats st;
  for (std::size_t n = 0; n < cases; ++n) {
    const int k = 2 + int(n % 3);
    const AugMarking m = random_marking(rng, k, 20);
    const int r = int(uniform(rng, 1, k - 1));
    const AugMarking hm = act(r, m);
    const int i = int(uniform(rng, 0, k - 1));
    CurveRef c = CurveRef::glue(i);
    switch (n % 3) {
      case 1:
        c = CurveRef::in_slot(i, m.slots[i].base);
        break;
      case 2:
        c = CurveRef::in_slot(i, nearby_slope(rng, m.slots[i].base));
        break;
      default:
        break;
    }
    bool ok = length_data(act(r, c, k), hm) == length_data(c, m);
    const AugMarking other = random_walk(rng, m, 8);
    ok = ok && formula_distance_T(hm, act(r, other), th) == formula_distance_T(m, other, th);
    ++st.cases;
    if (!ok) ++st.failures;
  }
  return st;
}

PhiStats phi_suite(std::size_t triples, std::uint64_t seed, const Thresholds& th) {
  std::mt19937_64 rng(seed);
  PhiStats st;
  const int W = 8, Dmax = 3;
  for (std::size_t n = 0; n < triples; ++n) {
    const int k = 2 + int(n % 2);
    const AugMarking mu = random_marking(rng, k, 40);
    const int i1 = int(uniform(rng, 0, k - 1));
    const int i2 = mod_k(i1 + uniform(rng, 1, k - 1), k);
    Simplex d1{{CurveRef::in_slot(i1, nearby_slope(rng, mu.slots[i1].base))}};
    Simplex d2{{CurveRef::in_slot(i2, nearby_slope(rng, mu.slots[i2].base))}};
    if (uniform(rng, 0, 1)) d1.curves.push_back(CurveRef::glue(int(uniform(rng, 0, k - 1))));
    if (uniform(rng, 0, 1)) {
      auto g = CurveRef::glue(int(uniform(rng, 0, k - 1)));
      if (std::find(d1.curves.begin(), d1.curves.end(), g) == d1.curves.end())
        d2.curves.push_back(g);
    }
    Simplex both = d1;
    both.curves.insert(both.curves.end(), d2.curves.begin(), d2.curves.end());

    const AugMarking p = phi(d1, mu);
    ++st.triples;
    if (!(phi(d1, p) == p)) ++st.idempotence_failures;
    const int r = int(uniform(rng, 1, k - 1));
    if (!(phi(act(r, d1, k), act(r, mu)) == act(r, p))) ++st.equivariance_failures;

    auto nb = elementary_moves(mu);
    const AugMarking mu2 = pick(rng, nb);
    st.lipschitz = std::max(st.lipschitz, formula_distance_T(p, phi(d1, mu2), th));

    const std::int64_t at_phi = formula_distance_T(mu, p, th);
    std::int64_t best = at_phi;
    for (const auto& c : d1.curves) {
      if (c.is_glue()) continue;
      const Slope ref = reference_neighbor(c.slope);
      const std::int64_t n0 = twist_offset(c.slope, ref, p.slots[c.index].trans);
      for (std::int64_t t = n0 - W; t <= n0 + W; ++t)
        for (int D = 0; D <= Dmax; ++D) {
          AugMarking x = p;
          x.slots[c.index] = SlotData{c.slope, twist(c.slope, t, ref), D};
          best = std::min(best, formula_distance_T(mu, x, th));
        }
    }
    st.closest_excess = std::max(st.closest_excess, at_phi - best);
    st.commuting =
        std::max(st.commuting, formula_distance_T(phi(both, p), phi(both, mu), th));
  }
  return st;
}

AugMarking planted_almost_fixed(std::uint64_t seed, int k, std::int64_t m,
                                const Thresholds& th) {
  for (std::uint64_t attempt = 0;; ++attempt) {
    std::mt19937_64 rng(seed * 7919 + attempt);
    auto x = random_fixed_marking(rng, k);
    x = orbit_multitwist(x, CurveRef::in_slot(0, x.slots[0].base), m);
    x = orbit_multitwist(x, CurveRef::glue(0), -m / 3 - 1);
    for (int s = 0; s < 3; ++s) {
      std::vector<AugMarking> ok;
      for (auto& n : elementary_moves(x)) {
        bool flip = false;
        for (int i = 0; i < k; ++i) flip = flip || n.slots[i].base != x.slots[i].base;
        if (!flip) ok.push_back(n);
      }
      x = pick(rng, ok);
    }
    if (orbit_diameter(x, th) <= th.R) return x;
    if (attempt > 1000) throw InternalAssertion("could not plant an almost-fixed marking");
  }
}

const std::vector<std::int64_t>& sweep_magnitudes() {
  static const std::vector<std::int64_t> m{10, 100, 1000, 10000, 100000, 1000000};
  return m;
}

std::vector<SweepRow> magnitude_sweep(int k, int instances, std::uint64_t seed,
                                      const Thresholds& th) {
  std::vector<SweepRow> rows;
  for (int inst = 0; inst < instances; ++inst)
    for (std::int64_t m : sweep_magnitudes()) {
      const auto mu = planted_almost_fixed(seed * 1000 + std::uint64_t(100 * k + inst), k, m, th);
      auto [x, trace] = fixed_point_search(mu, th);
      SweepRow row{k, inst, m, trace.final_distance, is_fixed(x), trace.stages.size(), 1.0};
      auto fams = group_symmetric_families(large_links(trace.initial, mu, th.K_hat),
                                           trace.initial, mu, th.K, 1e18);
      for (const auto& f : fams.families) row.max_family_ratio = std::max(row.max_family_ratio, f.ratio);
      rows.push_back(row);
    }
  return rows;
}

double worst_sweep_ratio(const std::vector<SweepRow>& rows) {
  std::map<std::pair<int, int>, std::pair<std::int64_t, std::int64_t>> span;
  for (const auto& r : rows) {
    const std::int64_t v = std::max<std::int64_t>(1, r.final_distance);
    auto [it, fresh] = span.try_emplace({r.k, r.instance}, v, v);
    if (!fresh) {
      it->second.first = std::min(it->second.first, v);
      it->second.second = std::max(it->second.second, v);
    }
  }
  double worst = 1;
  for (const auto& [_, lh] : span) worst = std::max(worst, double(lh.second) / double(lh.first));
  return worst;
}

AdversarialStats adversarial_suite(std::size_t instances, std::uint64_t seed,
                                   const Thresholds& th) {
  std::mt19937_64 rng(seed);
  AdversarialStats st;
  for (std::size_t n = 0; n < instances; ++n) {
    const int k = 2 + int(n % 3);
    auto mu = random_fixed_marking(rng, k);
    const int j = int(uniform(rng, 1, k - 1));
    switch (n % 4) {
      case 0:
        mu.glue[j].tau += uniform(rng, 100000, 200000);
        break;
      case 1:
        mu.slots[j].trans =
            twist(mu.slots[j].base, uniform(rng, 5000, 10000), mu.slots[j].trans);
        break;
      case 2:
        mu.glue[j].D = th.R + int(uniform(rng, 30, 60));
        break;
      default:
        mu.slots[j].D = th.R + int(uniform(rng, 30, 60));
        break;
    }
    ++st.instances;
    try {
      fixed_point_search(mu, th);
    } catch (const SymmetryViolation&) {
      ++st.triggered;
    }
  }
  return st;
}

std::vector<BaryRow> barycenter_sweep(int k, int instances, std::uint64_t seed,
                                      const Thresholds& th) {
  std::mt19937_64 rng(seed);
  std::vector<BaryRow> rows;
  for (int n = 0; n < instances; ++n) {
    auto s = random_fixed_marking(rng, k);
    const int i = int(uniform(rng, 0, k - 1));
    const int j = int(uniform(rng, 0, k - 1));
    const std::int64_t m = log_uniform(rng, 5.0);
    switch (n % 3) {
      case 0:
        s.slots[i].trans = twist(s.slots[i].base, m, s.slots[i].trans);
        break;
      case 1:
        s.glue[j].tau -= m;
        break;
      default:
        s.slots[i].trans = twist(s.slots[i].base, m, s.slots[i].trans);
        s.glue[j].tau += log_uniform(rng, 4.0);
        break;
    }
    s = random_walk(rng, s, int(uniform(rng, 0, 4)));
    const auto b = coarse_barycenter(s, th);
    if (!is_fixed(b)) throw InternalAssertion("barycenter is not fixed");
    rows.push_back({k, double(formula_distance_T(s, act(1, s), th)),
                    double(formula_distance_T(s, b, th))});
  }
  return rows;
}

LinearFit barycenter_fit(const std::vector<BaryRow>& rows) {
  std::vector<double> x, y;
  for (const auto& r : rows) {
    x.push_back(r.displacement);
    y.push_back(r.distance);
  }
  return fit_line(x, y);
}

ActiveStats active_segment_suite(std::size_t paths, std::uint64_t seed, const Thresholds& th) {
  std::mt19937_64 rng(seed);
  ActiveStats st;
  for (std::size_t n = 0; n < paths; ++n) {
    const int k = 2 + int(n % 2);
    const AugMarking x = uniform_marking(k, SlotData{}, GlueData{});
    AugMarking mu = x;
    const SlotData target = two_pivot_slot(log_uniform(rng, 3.0) + 100, log_uniform(rng, 3.0) + 100);
    for (auto& s : mu.slots) s = target;
    mu.glue.assign(k, GlueData{uniform(rng, -50, 50), 0});
    const auto path = canonical_path(x, mu);
    ++st.paths;

    SymmetricFamilyList fams;
    try {
      fams = group_symmetric_families(large_links(x, mu, th.K_hat), x, mu, th.K, 1e18);
    } catch (const SymmetryViolation&) {
      ++st.violations;
      continue;
    }
    for (std::size_t f = 0; f < fams.families.size(); ++f)
      for (std::size_t g = f + 1; g < fams.families.size(); ++g)
        for (const auto& a : fams.families[f].members)
          for (const auto& b : fams.families[g].members) {
            const auto& ya = a.y;
            const auto& yb = b.y;
            if (ya.kind != SubsurfaceRef::Kind::annulus || yb.kind != SubsurfaceRef::Kind::annulus ||
                ya.curve.is_glue() || yb.curve.is_glue() || ya.curve.index != yb.curve.index ||
                intersection(ya.curve.slope, yb.curve.slope) == 0)
              continue;
            ++st.families_checked;
            auto sa = active_segment(path, ya);
            auto sb = active_segment(path, yb);
            if (!sa || !sb || !(sa->second < sb->first)) ++st.violations;
          }
    for (const auto& fam : fams.families)
      for (const auto& m : fam.members) {
        auto seg = active_segment(path, m.y);
        if (!seg) {
          ++st.violations;
          continue;
        }
        for (std::size_t p = 0; p < seg->first; ++p)
          st.drift = std::max(st.drift, proj_distance(m.y, path[p], path.front()));
        for (std::size_t p = seg->second + 1; p < path.size(); ++p)
          st.drift = std::max(st.drift, proj_distance(m.y, path[p], path.back()));
      }
  }
  return st;
}

NonqcSweep nonqc_sweep(const Config& cfg) {
  NonqcSweep out;
  std::vector<double> ds, mids;
  for (double d : cfg.d_grid) {
    out.runs.push_back(nonqc_experiment(cfg.nonqc(d)));
    const auto& r = out.runs.back();
    out.endpoint_max = std::max({out.endpoint_max, r.start, r.end});
    ds.push_back(d);
    mids.push_back(r.midpoint);
  }
  if (ds.size() >= 2) out.midpoint_fit = fit_line(ds, mids);
  return out;
}

namespace {

double round_up(double x, double unit) { return std::ceil(x / unit - 1e-9) * unit; }

}  // namespace

Calibration calibrate(const Config& cfg) {
  cfg.validate();
  const Thresholds& th = cfg.th;
  Calibration c;

  const auto horo = compare_to_horodisk(HoroSampleSpec{200, 8});
  c.horo_mult = round_up(horo.multiplicative, 1e-4);
  c.horo_add = round_up(horo.additive, 1e-4);

  std::vector<DistanceSample> samples;
  for (int k : {2, 3}) {
    auto s = distance_samples(k, 3 * cfg.basepoints, cfg.bfs_cap, 20, cfg.seed + k, th);
    samples.insert(samples.end(), s.begin(), s.end());
  }
  const auto qi = fit_quasi_isometry(samples, cfg.bfs_cap);
  c.L = qi.L;
  c.C = qi.C;

  // Raw distances: at the default cut every phi discrepancy vanishes.
  const auto ph = phi_suite(1000, cfg.seed + 10, Thresholds{1, th.K_hat, th.R});
  c.C_phi = int(ph.lipschitz);
  c.C_cpj = int(ph.closest_excess);
  c.C_add = int(ph.commuting);

  double ratio = 1;
  for (int k : {2, 3, 4})
    for (const auto& r : magnitude_sweep(k, 4, cfg.seed + 20, th))
      ratio = std::max(ratio, r.max_family_ratio);
  c.comparability = round_up(ratio, 0.01);

  bool first = true;
  for (int k : {2, 3})
    for (std::uint64_t rep = 0; rep < 3; ++rep) {
      const auto f = barycenter_fit(barycenter_sweep(k, 300, cfg.seed + 30 + 10 * rep + k, th));
      c.K_tilde = first ? f.slope : std::max(c.K_tilde, f.slope);
      c.C_tilde = first ? f.intercept : std::max(c.C_tilde, f.intercept);
      first = false;
    }
  c.K_tilde = round_up(c.K_tilde, 1e-3);
  c.C_tilde = round_up(c.C_tilde, 1e-3);

  const auto nq = nonqc_sweep(cfg);
  c.E0 = nq.endpoint_max;
  c.c1 = std::floor(nq.midpoint_fit.slope * 1000) / 1000;
  double c2 = 0;
  for (const auto& r : nq.runs) c2 = std::max(c2, c.c1 * r.d - r.midpoint);
  c.c2 = round_up(c2, 1e-3);

  c.M2 = int(active_segment_suite(200, cfg.seed + 40, th).drift);
  return c;
}

}  // namespace ct
