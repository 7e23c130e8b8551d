#include "ct/flat_sim.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "ct/errors.hpp"

namespace ct {

namespace {

using boost::multiprecision::abs;
using boost::multiprecision::exp;
using boost::multiprecision::log;
using boost::multiprecision::round;
using boost::multiprecision::sqrt;

Real cross(const Vec2& a, const Vec2& b) { return a(0) * b(1) - a(1) * b(0); }

Vec2 flow_vec(const Vec2& v, const Real& et) {
  Vec2 w;
  w << v(0) * et, v(1) / et;
  return w;
}

std::int64_t to_int(const Real& x) {
  if (abs(x) > Real(std::int64_t(1) << 62))
    throw RegimeViolation("lattice coefficients overflow; flow time too large");
  return x.convert_to<std::int64_t>();
}

SlitTorus flow_component(const SlitTorus& c, const Real& time) {
  const Real et = exp(time);
  SlitTorus out = c;
  out.torus = flow(c.torus, time);
  for (auto& s : out.slits) {
    s.midpoint = flow_vec(s.midpoint, et);
    s.vec = flow_vec(s.vec, et);
  }
  out.phase = c.phase + time.convert_to<double>();
  return out;
}

// Planar lifts of two slits meet.
bool segments_cross(const Slit& a, const Slit& b) {
  const Vec2 a0 = a.midpoint - a.vec / 2, b0 = b.midpoint - b.vec / 2;
  const Real den = cross(a.vec, b.vec);
  if (den == 0) return abs(cross(a.vec, b0 - a0)) == 0;
  const Real u = cross(b0 - a0, b.vec) / den;
  const Real v = cross(b0 - a0, a.vec) / den;
  return u >= 0 && u <= 1 && v >= 0 && v <= 1;
}

double log_plus(const Real& x) { return x > 1 ? log(x).convert_to<double>() : 0.0; }

}  // namespace

Real FlatTorus::area() const { return abs(basis.determinant()); }

Vec2 FlatTorus::vector(const Slope& s) const {
  return basis.col(0) * Real(s.p) + basis.col(1) * Real(s.q);
}

Real FlatTorus::length(const Slope& s) const { return vector(s).norm(); }

void FlatTorus::validate() const {
  if (!(basis.determinant() > 0))
    throw PreconditionFailure("flat torus basis must have positive determinant");
}

Real anosov_lambda() { return (Real(3) + sqrt(Real(5))) / 2; }

double farey_progress_rate() { return 2.0 / std::log((3.0 + std::sqrt(5.0)) / 2.0); }

FlatTorus anosov_torus() {
  const Real lam = anosov_lambda();
  Mat2 P;  // eigenvectors of [[2,1],[1,1]] as columns: stable, unstable
  P << 1, 1, 1 / lam - 2, lam - 2;
  Mat2 B = P.inverse();
  Real det = B.determinant();
  if (det < 0) {
    B.row(1) *= -1;
    det = -det;
  }
  B /= sqrt(det);
  return FlatTorus{B};
}

FlatTorus flow(const FlatTorus& t, const Real& time) {
  const Real et = exp(time);
  FlatTorus out = t;
  out.basis.row(0) *= et;
  out.basis.row(1) /= et;
  return out;
}

ReducedBasis reduce(const FlatTorus& t) {
  Vec2 v1 = t.basis.col(0), v2 = t.basis.col(1);
  std::int64_t c1[2] = {1, 0}, c2[2] = {0, 1};
  for (int it = 0; it < 10000; ++it) {
    if (v1.squaredNorm() > v2.squaredNorm()) {
      std::swap(v1, v2);
      std::swap(c1, c2);
    }
    const std::int64_t mu = to_int(round(v1.dot(v2) / v1.squaredNorm()));
    if (mu == 0) break;
    v2 -= v1 * Real(mu);
    c2[0] -= mu * c1[0];
    c2[1] -= mu * c1[1];
  }
  ReducedBasis r{make_slope(c1[0], c1[1]), make_slope(c2[0], c2[1]), v1.norm(), v2.norm()};
  if (abs(r.partner_length - r.shortest_length) <= r.shortest_length * Real(1e-40) &&
      r.partner < r.shortest) {
    std::swap(r.shortest, r.partner);
  }
  return r;
}

Real systole(const FlatTorus& t) { return reduce(t).shortest_length; }

double Slit::angle() const { return atan2(vec(1), vec(0)).convert_to<double>(); }

Real SlitSurface::area() const {
  Real a = 0;
  for (const auto& c : components) a += c.area();
  return a;
}

int SlitSurface::k() const {
  int n = 0;
  for (const auto& c : components) n += c.slot >= 0;
  return n;
}

void SlitSurface::validate() const {
  for (const auto& c : components) {
    c.torus.validate();
    if (!(c.scale > 0)) throw PreconditionFailure("component scale must be positive");
    for (std::size_t i = 0; i < c.slits.size(); ++i) {
      if (!(c.slits[i].length() > 0)) throw PreconditionFailure("slit length must be positive");
      for (std::size_t j = i + 1; j < c.slits.size(); ++j) {
        const auto& a = c.slits[i];
        const auto& b = c.slits[j];
        if (c.slot >= 0) {
          if (abs(cross(a.vec, b.vec)) > a.length() * b.length() * Real(1e-30))
            throw PreconditionFailure("slits on a slot torus must be parallel");
          if (abs(cross(a.vec, b.midpoint - a.midpoint)) <= a.length() * Real(1e-30))
            throw PreconditionFailure("parallel slits must not be colinear");
        } else if (segments_cross(a, b)) {
          throw PreconditionFailure("slits overlap");
        }
      }
    }
  }
  std::vector<std::vector<int>> used(components.size());
  for (std::size_t i = 0; i < components.size(); ++i)
    used[i].assign(components[i].slits.size(), 0);
  for (const auto& g : gluings) {
    if (g.comp_a < 0 || g.comp_b < 0 || g.comp_a >= int(components.size()) ||
        g.comp_b >= int(components.size()))
      throw ModelMismatch("gluing refers to a missing component");
    const auto& A = components[g.comp_a];
    const auto& B = components[g.comp_b];
    if (g.slit_a < 0 || g.slit_b < 0 || g.slit_a >= int(A.slits.size()) ||
        g.slit_b >= int(B.slits.size()))
      throw ModelMismatch("gluing refers to a missing slit");
    if (++used[g.comp_a][g.slit_a] > 1 || ++used[g.comp_b][g.slit_b] > 1)
      throw ModelMismatch("slit glued twice");
    const Vec2 va = A.slits[g.slit_a].vec * A.scale;
    const Vec2 vb = B.slits[g.slit_b].vec * B.scale;
    if ((va - vb).norm() > va.norm() * Real(1e-30))
      throw PreconditionFailure("paired slits differ in length or angle");
  }
}

SlitSurface flow(const SlitSurface& s, const Real& time) {
  SlitSurface out = s;
  for (auto& c : out.components) c = flow_component(c, time);
  return out;
}

void ConstructionParams::validate() const {
  if (!(c > 0 && c < 1)) throw RegimeViolation("c must lie in (0, 1)");
  if (!(d > 0)) throw RegimeViolation("d must be positive");
  if (!(delta_ratio > 0 && delta_ratio <= 0.1))
    throw RegimeViolation("delta must be much smaller than rho (ratio in (0, 0.1])");
}

SlitSurface Construction::at(const SlitSurface& family, double t) const {
  return flow(family, Real(t));
}

namespace {

SlitTorus slot_torus(const FlatTorus& T, int slot, double phase, double rho, double delta,
                     double window) {
  SlitTorus y;
  y.torus = T;
  y.scale = Real(delta);
  y.slot = slot;
  y.window = window;
  Vec2 dir;
  dir << sqrt(Real(2)) / 2, sqrt(Real(2)) / 2;
  for (auto [u, v] : {std::pair{0.25, 0.25}, std::pair{0.5, 0.75}}) {
    Vec2 f;
    f << Real(u), Real(v);
    y.slits.push_back(Slit{T.basis * f, dir * Real(rho)});
  }
  return flow_component(y, Real(phase));
}

SlitTorus filler_torus(const FlatTorus& T, const SlitTorus& ya, int sa, const SlitTorus& yb,
                       int sb) {
  SlitTorus x;
  x.torus = T;
  for (auto [y, s, u, v] : {std::tuple{&ya, sa, 0.2, 0.3}, std::tuple{&yb, sb, 0.6, 0.8}}) {
    Vec2 f;
    f << Real(u), Real(v);
    x.slits.push_back(Slit{T.basis * f, y->slits[s].vec * y->scale});
  }
  return x;
}

SlitSurface assemble(const FlatTorus& T, double phase1, double phase2, double rho,
                     double delta, double window) {
  const SlitTorus y1 = slot_torus(T, 0, phase1, rho, delta, window);
  const SlitTorus y2 = slot_torus(T, 1, phase2, rho, delta, window);
  SlitSurface s;
  // T_A, Y_1, T_B, Y_2 in a cycle; gluing curve j bounds Y_j.
  s.components = {filler_torus(T, y1, 0, y2, 1), y1, filler_torus(T, y1, 1, y2, 0), y2};
  s.gluings = {Gluing{0, 0, 1, 0, 0, 0.0}, Gluing{2, 0, 1, 1, 0, 0.0},
               Gluing{2, 1, 3, 0, 1, 0.0}, Gluing{0, 1, 3, 1, 1, 0.0}};
  s.validate();
  return s;
}

}  // namespace

Construction build_construction(const ConstructionParams& p) {
  p.validate();
  Construction c;
  c.params = p;
  c.rho = p.c * std::exp(-p.d / 2);
  c.delta = p.delta_ratio * c.rho;
  const FlatTorus T = anosov_torus();
  const double w = p.d / 2;
  c.G1 = assemble(T, -p.d / 2, -p.d / 2, c.rho, c.delta, w);
  c.G2 = assemble(T, -1.5 * p.d, -1.5 * p.d, c.rho, c.delta, w);
  c.G = assemble(T, -p.d / 2, -1.5 * p.d, c.rho, c.delta, w);
  for (std::size_t g = 0; g < c.G.gluings.size(); ++g) {
    c.G.gluings[g].twist_offset = c.G1.gluings[g].twist_offset;
    c.G2.gluings[g].twist_offset = c.G1.gluings[g].twist_offset;
  }
  return c;
}

int length_level(double ext, double eps) {
  if (!(ext > 0)) throw PreconditionFailure("extremal length must be positive");
  if (!std::isfinite(ext)) return 0;
  return std::max(0, int(std::floor(std::log(eps / ext))));
}

FlatShadow shadow(const SlitSurface& s, const ShadowParams& sp) {
  const int k = s.k();
  if (k < 2) throw ModelMismatch("shadow needs at least two slot components");
  FlatShadow out;
  out.snapshot.marking.slots.assign(k, SlotData{});
  out.snapshot.marking.glue.assign(k, GlueData{});
  out.slot_phase.assign(k, 0.0);
  out.glue_ext.assign(k, std::numeric_limits<double>::infinity());
  out.glue_loglen.assign(k, -std::numeric_limits<double>::infinity());

  std::vector<SlitTorus> eff(s.components.size());
  for (std::size_t i = 0; i < s.components.size(); ++i) {
    const auto& c = s.components[i];
    eff[i] = c;
    if (c.slot < 0) continue;
    if (c.slot >= k) throw ModelMismatch("slot index out of range");
    const double ph = sp.clamp ? std::clamp(c.phase, -c.window, c.window) : c.phase;
    eff[i] = flow_component(c, Real(ph - c.phase));
    out.slot_phase[c.slot] = ph;

    const auto r = reduce(eff[i].torus);
    const double ext = (r.shortest_length * r.shortest_length / eff[i].torus.area())
                           .convert_to<double>();
    const int D = length_level(ext, sp.eps);
    out.snapshot.marking.slots[c.slot] = SlotData{r.shortest, r.partner, D};
    if (D >= sp.short_cut)
      out.snapshot.short_curves.push_back({CurveRef::in_slot(c.slot, r.shortest), ext});
  }

  const Real total = s.area();
  std::vector<bool> seen(k, false);
  for (const auto& g : s.gluings) {
    if (g.curve < 0 || g.curve >= k) throw ModelMismatch("gluing curve index out of range");
    const SlitTorus* y = &eff[g.comp_a];
    const SlitTorus* x = &eff[g.comp_b];
    int ys = g.slit_a;
    if (y->slot < 0) {
      std::swap(y, x);
      ys = g.slit_b;
    }
    const Real l = y->slits[ys].length() * y->scale;
    const Real sys_y = systole(y->torus) * y->scale;
    const Real sys_x = systole(x->torus) * x->scale;
    const double mod = (log_plus(sys_y / l) + log_plus(sys_x / l)) / (2 * M_PI);
    const double lower = (l * l / total).convert_to<double>();
    const double ext = mod > 0 ? std::max(lower, 1.0 / mod) : std::numeric_limits<double>::infinity();
    const int j = g.curve;
    if (!seen[j]) out.snapshot.marking.glue[j].tau = std::llround(g.twist_offset);
    seen[j] = true;
    out.glue_ext[j] = std::min(out.glue_ext[j], ext);
    out.glue_loglen[j] =
        std::max(out.glue_loglen[j], -log(y->slits[ys].length()).convert_to<double>());
  }
  for (int j = 0; j < k; ++j) {
    if (!seen[j]) throw ModelMismatch("gluing curve has no slits");
    const int D = length_level(out.glue_ext[j], sp.eps);
    out.snapshot.marking.glue[j].D = D;
    if (D >= sp.short_cut)
      out.snapshot.short_curves.push_back({CurveRef::glue(j), out.glue_ext[j]});
  }
  validate(out.snapshot.marking);
  return out;
}

namespace {

RafiSnapshot act(int r, const RafiSnapshot& s) {
  RafiSnapshot out{ct::act(r, s.marking), {}};
  for (const auto& c : s.short_curves)
    out.short_curves.push_back({ct::act(r, c.curve, s.marking.k()), c.length});
  return out;
}

// Fixed snapshot copying slot j and gluing curve j everywhere.
RafiSnapshot symmetrize(const RafiSnapshot& s, int j) {
  const int k = s.marking.k();
  RafiSnapshot out{uniform_marking(k, s.marking.slots[j], s.marking.glue[j]), {}};
  for (const auto& c : s.short_curves) {
    if (c.curve.index != j) continue;
    for (int r = 0; r < k; ++r)
      out.short_curves.push_back({ct::act(r, c.curve, k), c.length});
  }
  return out;
}

}  // namespace

NonqcResult nonqc_experiment(const NonqcParams& p) {
  if (p.steps < 2 || p.steps % 2) throw PreconditionFailure("steps must be even and >= 2");
  if (!(p.jitter >= 0 && p.jitter < 1)) throw PreconditionFailure("jitter must lie in [0, 1)");
  p.th.validate();
  const Construction c = build_construction(p.construction);
  const double d = p.construction.d;
  const double step = 2 * d / p.steps;
  std::mt19937_64 rng(p.seed);
  std::uniform_real_distribution<double> jit(-p.jitter / 2, p.jitter / 2);

  NonqcResult res;
  res.d = d;
  for (int i = 0; i <= p.steps; ++i) {
    double t = i * step;
    if (i > 0 && i < p.steps && i != p.steps / 2 && p.jitter > 0) t += jit(rng) * step;
    const auto sh = shadow(c.at(c.G, t), p.shadow);
    const auto& snap = sh.snapshot;
    NonqcRow row;
    row.t = t;
    row.orbit_diam = rafi_formula(snap, act(1, snap), p.th);
    std::vector<RafiSnapshot> fixed;
    for (int j = 0; j < snap.marking.k(); ++j) fixed.push_back(symmetrize(snap, j));
    fixed.push_back(shadow(c.at(c.G1, t), p.shadow).snapshot);
    fixed.push_back(shadow(c.at(c.G2, t), p.shadow).snapshot);
    row.dist_to_fixed = std::numeric_limits<double>::infinity();
    for (const auto& f : fixed)
      row.dist_to_fixed = std::min(row.dist_to_fixed, rafi_formula(snap, f, p.th));
    row.slot1 = snap.marking.slots[0].base;
    row.slot2 = snap.marking.slots[1].base;
    row.glue_loglen = *std::max_element(sh.glue_loglen.begin(), sh.glue_loglen.end());
    res.rows.push_back(row);
  }
  res.start = res.rows.front().orbit_diam;
  res.end = res.rows.back().orbit_diam;
  res.midpoint = res.rows[p.steps / 2].orbit_diam;
  double best = -1;
  for (const auto& r : res.rows) best = std::max(best, r.orbit_diam);
  double first = -1, last = -1;
  for (const auto& r : res.rows)
    if (r.orbit_diam >= best - 1e-9) {
      if (first < 0) first = r.t;
      last = r.t;
    }
  res.peak_t = (first + last) / 2;
  return res;
}

LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2)
    throw PreconditionFailure("line fit needs at least two paired points");
  const double n = double(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double den = n * sxx - sx * sx;
  if (den == 0) throw PreconditionFailure("line fit needs distinct abscissae");
  LinearFit f;
  f.slope = (n * sxy - sx * sy) / den;
  f.intercept = (sy - f.slope * sx) / n;
  return f;
}

std::string nonqc_csv(const std::vector<NonqcRow>& rows) {
  std::ostringstream os;
  os.precision(10);
  os << "t,orbit_diam,dist_to_fixed,slot1_slope,slot2_slope,glue_loglen\n";
  for (const auto& r : rows)
    os << r.t << ',' << r.orbit_diam << ',' << r.dist_to_fixed << ',' << to_string(r.slot1)
       << ',' << to_string(r.slot2) << ',' << r.glue_loglen << '\n';
  return os.str();
}

}  // namespace ct
