#include "ct/horoball.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <deque>
#include <limits>

#include "ct/errors.hpp"

namespace ct {

namespace {

constexpr int kTableSize = 44;  // e^43 < 2^63 < e^44

const std::array<std::int64_t, kTableSize>& width_table() {
  static const auto table = [] {
    std::array<std::int64_t, kTableSize> t{};
    for (int m = 0; m < kTableSize; ++m)
      t[m] = static_cast<std::int64_t>(std::floor(std::exp((long double)m)));
    return t;
  }();
  return table;
}

std::int64_t ceil_div(std::int64_t a, std::int64_t b) {
  return a == 0 ? 0 : 1 + (a - 1) / b;
}

// Best apex level and cost of the up-across-down route.
std::pair<int, std::int64_t> best_apex(const HoroPoint& u, const HoroPoint& v) {
  if (u.level < 0 || v.level < 0) throw PreconditionFailure("negative level");
  const std::int64_t dx = u.x > v.x ? u.x - v.x : v.x - u.x;
  const int lo = std::max(u.level, v.level);
  int best_l = lo;
  std::int64_t best = std::numeric_limits<std::int64_t>::max();
  for (int l = lo;; ++l) {
    const std::int64_t w = horo_width(l);
    const std::int64_t across = ceil_div(dx, w);
    const std::int64_t cost = 2 * std::int64_t(l) - u.level - v.level + across;
    if (cost < best) {
      best = cost;
      best_l = l;
    }
    if (across <= 1) break;
  }
  return {best_l, best};
}

}  // namespace

std::int64_t horo_width(int level) {
  if (level < 0) throw PreconditionFailure("negative level");
  if (level >= kTableSize) return std::numeric_limits<std::int64_t>::max();
  return width_table()[level];
}

// Every path with top level l pays at least 2l - a - b vertically and at
// least ceil(dx / floor(e^l)) horizontally, and the normal form attains
// that, so the minimum over l is exact.
std::int64_t horo_distance(const HoroPoint& u, const HoroPoint& v) {
  return best_apex(u, v).second;
}

std::vector<HoroPoint> horo_normal_path(const HoroPoint& u,
                                        const HoroPoint& v) {
  const int apex = best_apex(u, v).first;
  std::vector<HoroPoint> path{u};
  HoroPoint cur = u;
  while (cur.level < apex) {
    ++cur.level;
    path.push_back(cur);
  }
  const std::int64_t w = horo_width(apex);
  while (cur.x != v.x) {
    std::int64_t gap = v.x - cur.x;
    std::int64_t step = std::min<std::int64_t>(gap < 0 ? -gap : gap, w);
    cur.x += gap < 0 ? -step : step;
    path.push_back(cur);
  }
  while (cur.level > v.level) {
    --cur.level;
    path.push_back(cur);
  }
  return path;
}

std::vector<int> horo_bfs_box(const HoroPoint& src, std::int64_t x_max,
                              int level_max) {
  const std::int64_t nx = 2 * x_max + 1;
  const int nl = level_max + 1;
  auto id = [&](std::int64_t x, int l) { return (x + x_max) * nl + l; };
  std::vector<int> dist(nx * nl, -1);
  if (src.x < -x_max || src.x > x_max || src.level > level_max) return dist;
  std::deque<HoroPoint> queue{src};
  dist[id(src.x, src.level)] = 0;
  while (!queue.empty()) {
    HoroPoint p = queue.front();
    queue.pop_front();
    const int d = dist[id(p.x, p.level)];
    auto visit = [&](std::int64_t x, int l) {
      auto& slot = dist[id(x, l)];
      if (slot < 0) {
        slot = d + 1;
        queue.push_back({x, l});
      }
    };
    if (p.level > 0) visit(p.x, p.level - 1);
    if (p.level < level_max) visit(p.x, p.level + 1);
    const std::int64_t w = horo_width(p.level);
    const std::int64_t lo = std::max(-x_max, p.x - std::min(w, nx));
    const std::int64_t hi = std::min(x_max, p.x + std::min(w, nx));
    for (std::int64_t x = lo; x <= hi; ++x)
      if (x != p.x) visit(x, p.level);
  }
  return dist;
}

double horodisk_distance(const HoroPoint& u, const HoroPoint& v) {
  const double y1 = std::exp(double(u.level)), y2 = std::exp(double(v.level));
  const double dx = double(u.x - v.x), dy = y1 - y2;
  return std::acosh(1.0 + (dx * dx + dy * dy) / (2.0 * y1 * y2));
}

namespace {

// Multiplicative distortion is the worst ratio among pairs at hyperbolic
// distance >= 2; the additive term is the least eps making
// dc/lambda - eps <= dh <= lambda*dc + eps hold on every pair.
struct Accum {
  double mult = 0.0;
  std::vector<std::pair<double, double>> samples;

  void add(double dc, double dh) {
    samples.push_back({dc, dh});
    if (dh >= 2.0 && dc > 0.0) mult = std::max({mult, dc / dh, dh / dc});
  }
  HoroballMetricReport finish() const {
    HoroballMetricReport r;
    r.pairs = samples.size();
    r.multiplicative = mult;
    const double lambda = std::max(1.0, mult);
    for (auto [dc, dh] : samples)
      r.additive = std::max({r.additive, dc / lambda - dh, dh - lambda * dc});
    return r;
  }
};

}  // namespace

HoroballMetricReport compare_to_horodisk(const HoroSampleSpec& spec) {
  if (spec.x_max < 0 || spec.level_max < 0)
    throw PreconditionFailure("empty horoball sample");
  // Both distances depend only on |dx| and the two levels.
  Accum acc;
  for (std::int64_t dx = 0; dx <= 2 * spec.x_max; ++dx)
    for (int a = 0; a <= spec.level_max; ++a)
      for (int b = 0; b <= spec.level_max; ++b) {
        HoroPoint u{0, a}, v{dx, b};
        acc.add(double(horo_distance(u, v)), horodisk_distance(u, v));
      }
  return acc.finish();
}

HoroballMetricReport compare_to_horodisk(
    const std::vector<std::pair<HoroPoint, HoroPoint>>& pairs) {
  if (pairs.empty()) throw PreconditionFailure("empty horoball sample");
  Accum acc;
  for (const auto& [u, v] : pairs)
    acc.add(double(horo_distance(u, v)), horodisk_distance(u, v));
  return acc.finish();
}

}  // namespace ct
