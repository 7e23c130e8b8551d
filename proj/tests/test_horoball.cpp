#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "ct/errors.hpp"
#include "ct/horoball.hpp"

using namespace ct;

TEST_CASE("edge widths floor e^m") {
  CHECK(horo_width(0) == 1);
  CHECK(horo_width(1) == 2);
  CHECK(horo_width(2) == 7);
  CHECK(horo_width(3) == 20);
  CHECK(horo_width(6) == 403);
}

TEST_CASE("horo distance examples") {
  CHECK(horo_distance({4, 2}, {4, 7}) == 5);
  CHECK(horo_distance({0, 0}, {1, 0}) == 1);
  // Oracle value, frozen; the normal-form bound min_l 2l + ceil(10/w_l) is 6.
  auto d = horo_bfs_box({0, 0}, 20, 8);
  CHECK(d[(10 + 20) * 9 + 0] == 6);
  CHECK(horo_distance({0, 0}, {10, 0}) == 6);
}

TEST_CASE("horo distance equals BFS on a small box") {
  const std::int64_t X = 15;
  const int L = 4, Lbox = 7;
  int mismatches = 0;
  for (std::int64_t x = -X; x <= X; ++x)
    for (int l = 0; l <= L; ++l) {
      auto dist = horo_bfs_box({x, l}, X, Lbox);
      for (std::int64_t y = -X; y <= X; ++y)
        for (int m = 0; m <= L; ++m)
          if (dist[(y + X) * (Lbox + 1) + m] != horo_distance({x, l}, {y, m}))
            ++mismatches;
    }
  CHECK(mismatches == 0);
}

TEST_CASE("horo distance is a metric") {
  for (std::int64_t a = -12; a <= 12; a += 3)
    for (std::int64_t b = -12; b <= 12; b += 4)
      for (std::int64_t c = -12; c <= 12; c += 5)
        for (int la = 0; la <= 3; ++la)
          for (int lc = 0; lc <= 3; ++lc) {
            HoroPoint u{a, la}, v{b, 1}, w{c, lc};
            CHECK(horo_distance(u, v) == horo_distance(v, u));
            CHECK(horo_distance(u, w) <=
                  horo_distance(u, v) + horo_distance(v, w));
          }
}

TEST_CASE("monotone and logarithmic along level zero") {
  std::int64_t prev = 0;
  for (std::int64_t n = 0; n <= 100000; ++n) {
    auto d = horo_distance({0, 0}, {n, 0});
    CHECK(d >= prev);
    prev = d;
    if (n >= 3) {
      double l = 2.0 * std::log(double(n));
      CHECK(double(d) >= l - 6.0);
      CHECK(double(d) <= l + 6.0);
    }
  }
}

TEST_CASE("normal path") {
  auto p = horo_normal_path({0, 0}, {0, 3});
  CHECK(p == std::vector<HoroPoint>{{0, 0}, {0, 1}, {0, 2}, {0, 3}});
  CHECK(horo_normal_path({0, 0}, {1, 0}) ==
        std::vector<HoroPoint>{{0, 0}, {1, 0}});
  for (std::int64_t target : {100, 5, -77, 3000}) {
    for (int l0 : {0, 2}) {
      HoroPoint u{0, l0}, v{target, 1};
      auto path = horo_normal_path(u, v);
      CHECK(path.front() == u);
      CHECK(path.back() == v);
      for (std::size_t i = 1; i < path.size(); ++i) {
        auto a = path[i - 1], b = path[i];
        bool vertical = a.x == b.x && std::abs(a.level - b.level) == 1;
        bool horizontal = a.level == b.level && a.x != b.x &&
                          std::abs(a.x - b.x) <= horo_width(a.level);
        CHECK((vertical || horizontal));
      }
      CHECK(std::int64_t(path.size()) - 1 <= horo_distance(u, v) + 4);
    }
  }
  auto bfs = horo_bfs_box({0, 0}, 120, 8);
  CHECK(std::int64_t(horo_normal_path({0, 0}, {100, 0}).size()) - 1 ==
        bfs[(100 + 120) * 9]);
}

TEST_CASE("horodisk comparison") {
  auto r0 = compare_to_horodisk(
      std::vector<std::pair<HoroPoint, HoroPoint>>{{{0, 0}, {0, 0}}});
  CHECK(r0.multiplicative == 0.0);
  CHECK(r0.additive == 0.0);

  std::vector<std::pair<HoroPoint, HoroPoint>> vertical;
  for (int a = 0; a <= 8; ++a)
    for (int b = 0; b <= 8; ++b) vertical.push_back({{3, a}, {3, b}});
  auto rv = compare_to_horodisk(vertical);
  CHECK(rv.multiplicative <= 1.0 + 1e-9);
  CHECK(rv.additive <= 1e-9);

  auto r = compare_to_horodisk(HoroSampleSpec{200, 8});
  CHECK(r.pairs == 401u * 81u);
  CHECK(r.multiplicative <= 4.0);
  CHECK(r.additive <= 8.0);
  CHECK_THROWS_AS(compare_to_horodisk(std::vector<std::pair<HoroPoint, HoroPoint>>{}),
                  PreconditionFailure);
}
