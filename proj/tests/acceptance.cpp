// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any FAIL.
// Seeds differ from the ones calibrate() uses, so pinned constants are checked
// on fresh samples.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "ct/calibration.hpp"
#include "ct/experiments.hpp"
#include "ct/horoball.hpp"

using namespace ct;

namespace {

constexpr double kRerunTol = 0.05;
constexpr std::uint64_t kSeed = 7001;

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

bool within(double fresh, double pinned, double rel) {
  return std::abs(fresh - pinned) <= rel * std::max(std::abs(fresh), std::abs(pinned)) + 1e-12;
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

Outcome horoball_exactness() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto r = horo_exactness(60, 6);
  const double s = seconds_since(t0);
  return {r.mismatches == 0 && r.pairs >= 10000 && s < 60,
          fmt("pairs=%zu mismatches=%zu time=%.1fs", r.pairs, r.mismatches, s)};
}

Outcome horoball_qi(const Calibration& cal) {
  const auto r = compare_to_horodisk(HoroSampleSpec{200, 8});
  const bool ok = r.multiplicative <= 4 && r.additive <= 8 &&
                  within(r.multiplicative, cal.horo_mult, kRerunTol) &&
                  within(r.additive, cal.horo_add, kRerunTol);
  return {ok, fmt("mult=%.4f (pinned %.4f) add=%.4f (pinned %.4f)", r.multiplicative,
                  cal.horo_mult, r.additive, cal.horo_add)};
}

Outcome distance_formula(const Calibration& cal, const Thresholds& th) {
  const auto t0 = std::chrono::steady_clock::now();
  std::size_t n = 0, bad = 0;
  for (int k : {2, 3}) {
    const auto s = distance_samples(k, 50, 10, 20, kSeed + std::uint64_t(k), th);
    n += s.size();
    bad += qi_violations(s, cal.L, cal.C);
  }
  const double t = seconds_since(t0);
  return {bad == 0 && n > 0 && t < 600,
          fmt("pairs=%zu violations=%zu L=%.2f C=%d time=%.1fs", n, bad, cal.L, cal.C, t)};
}

Outcome equivariance(const Thresholds& th) {
  const auto r = equivariance_suite(10000, kSeed + 4, th);
  return {r.failures == 0 && r.cases == 10000, fmt("cases=%zu failures=%zu", r.cases, r.failures)};
}

Outcome phi_properties(const Calibration& cal, const Thresholds& th) {
  const auto r = phi_suite(1000, kSeed + 5, Thresholds{1, th.K_hat, th.R});
  const bool ok = r.idempotence_failures == 0 && r.equivariance_failures == 0 &&
                  r.lipschitz <= cal.C_phi && r.closest_excess <= cal.C_cpj &&
                  r.commuting <= cal.C_add;
  return {ok, fmt("triples=%zu idem=%zu equiv=%zu lip=%lld/%d closest=%lld/%d commute=%lld/%d",
                  r.triples, r.idempotence_failures, r.equivariance_failures,
                  (long long)r.lipschitz, cal.C_phi, (long long)r.closest_excess, cal.C_cpj,
                  (long long)r.commuting, cal.C_add)};
}

Outcome main_theorem(const Thresholds& th) {
  std::size_t n = 0, fixed = 0;
  double worst = 1;
  for (int k : {2, 3, 4}) {
    const auto rows = magnitude_sweep(k, 28, kSeed + 6, th);
    n += rows.size();
    for (const auto& r : rows)
      if (r.fixed) ++fixed;
    worst = std::max(worst, worst_sweep_ratio(rows));
  }
  return {n >= 500 && fixed == n && worst <= 1.5,
          fmt("instances=%zu fixed=%zu worst_ratio=%.3f", n, fixed, worst)};
}

Outcome adversarial(const Thresholds& th) {
  const auto r = adversarial_suite(200, kSeed + 7, th);
  return {r.instances == 200 && r.triggered == r.instances,
          fmt("instances=%zu triggered=%zu", r.instances, r.triggered)};
}

Outcome barycenter(const Calibration& cal, const Config& cfg) {
  bool ok = true;
  std::string d;
  // Fresh samples against the pinned bounds.
  for (int k : {2, 3}) {
    const auto f = barycenter_fit(barycenter_sweep(k, 300, kSeed + 8 + std::uint64_t(k), cfg.th));
    ok = ok && f.slope <= cal.K_tilde && f.intercept <= cal.C_tilde;
    d += fmt("k=%d slope=%.4f intercept=%.3f; ", k, f.slope, f.intercept);
  }
  // Rerun of the calibration fit.
  const Calibration again = calibrate(cfg);
  const bool stable = within(again.K_tilde, cal.K_tilde, kRerunTol) &&
                      within(again.C_tilde, cal.C_tilde, kRerunTol);
  d += fmt("pinned K=%.3f C=%.3f rerun K=%.3f C=%.3f", cal.K_tilde, cal.C_tilde, again.K_tilde,
           again.C_tilde);
  return {ok && stable, d};
}

Outcome non_quasiconvex(const Calibration& cal, const Config& cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto sw = nonqc_sweep(cfg);
  const double t = seconds_since(t0);
  bool ok = sw.runs.size() == 7 && t < 300 && sw.endpoint_max <= cal.E0;
  for (const auto& r : sw.runs) {
    ok = ok && r.midpoint >= cal.c1 * r.d - cal.c2;
    ok = ok && r.peak_t >= 0.8 * r.d && r.peak_t <= 1.2 * r.d;
  }
  const double ratio = sw.midpoint_fit.slope / farey_progress_rate();
  ok = ok && ratio >= 0.5 && ratio <= 2.0;
  return {ok, fmt("endpoints<=%.3f (E0 %.3f) slope=%.3f ratio=%.3f time=%.1fs", sw.endpoint_max,
                  cal.E0, sw.midpoint_fit.slope, ratio, t)};
}

Outcome active_segments(const Calibration& cal, const Thresholds& th) {
  const auto r = active_segment_suite(200, kSeed + 10, th);
  return {r.paths == 200 && r.families_checked > 0 && r.violations == 0 && r.drift <= cal.M2,
          fmt("paths=%zu pairs=%zu violations=%zu drift=%lld (M2 %d)", r.paths,
              r.families_checked, r.violations, (long long)r.drift, cal.M2)};
}

}  // namespace

int main() {
  const Config cfg;
  Calibration cal;
  try {
    cal = load_calibration(calibration_path(cfg));
  } catch (const std::exception& e) {
    std::printf("cannot load calibration: %s\n", e.what());
    return 2;
  }
  std::printf("calibration %s (%s)\n", calibration_path(cfg).c_str(), digest(cal).c_str());

  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"horoball exactness", [] { return horoball_exactness(); }},
      {"horoball quasi-isometry", [&] { return horoball_qi(cal); }},
      {"distance formula", [&] { return distance_formula(cal, cfg.th); }},
      {"equivariance", [&] { return equivariance(cfg.th); }},
      {"phi suite", [&] { return phi_properties(cal, cfg.th); }},
      {"fixed point search", [&] { return main_theorem(cfg.th); }},
      {"symmetry violation", [&] { return adversarial(cfg.th); }},
      {"coarse barycenter", [&] { return barycenter(cal, cfg); }},
      {"non-quasiconvexity", [&] { return non_quasiconvex(cal, cfg); }},
      {"active segments", [&] { return active_segments(cal, cfg.th); }},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::printf("%-4s %2zu %-24s %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first,
                o.detail.c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
