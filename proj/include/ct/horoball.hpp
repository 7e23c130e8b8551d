#pragma once

#include <cstdint>
#include <vector>

namespace ct {

struct HoroPoint {
  std::int64_t x = 0;
  int level = 0;

  friend bool operator==(const HoroPoint&, const HoroPoint&) = default;
};

// floor(e^m), saturating at INT64_MAX.
std::int64_t horo_width(int level);

std::int64_t horo_distance(const HoroPoint& u, const HoroPoint& v);

// Up, across at the best apex level, then down. Ties in apex pick the
// lowest level.
std::vector<HoroPoint> horo_normal_path(const HoroPoint& u,
                                        const HoroPoint& v);

// Plain BFS in the finite box |x| <= x_max, level <= level_max.
// Returns distances from src indexed by (x + x_max) * (level_max + 1) + level;
// -1 for unreachable.
std::vector<int> horo_bfs_box(const HoroPoint& src, std::int64_t x_max,
                              int level_max);

struct HoroSampleSpec {
  std::int64_t x_max = 200;
  int level_max = 8;
};

struct HoroballMetricReport {
  std::size_t pairs = 0;
  double multiplicative = 0.0;
  double additive = 0.0;
};

// Hyperbolic distance between (x1, e^l1) and (x2, e^l2) in the upper half plane.
double horodisk_distance(const HoroPoint& u, const HoroPoint& v);

HoroballMetricReport compare_to_horodisk(const HoroSampleSpec& spec);
HoroballMetricReport compare_to_horodisk(
    const std::vector<std::pair<HoroPoint, HoroPoint>>& pairs);

}  // namespace ct
