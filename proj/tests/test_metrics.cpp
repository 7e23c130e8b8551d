#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "ct/errors.hpp"
#include "ct/metrics.hpp"

using namespace ct;

namespace {

AugMarking base_marking(int k) {
  return uniform_marking(k, SlotData{Slope{1, 0}, Slope{0, 1}, 0}, GlueData{0, 0});
}

AugMarking walk(std::mt19937_64& rng, AugMarking m, int steps, int max_D = 3) {
  for (int s = 0; s < steps; ++s) {
    auto nb = elementary_moves(m);
    std::uniform_int_distribution<std::size_t> pick(0, nb.size() - 1);
    auto n = nb[pick(rng)];
    bool ok = true;
    for (auto& sl : n.slots) ok = ok && sl.D <= max_D;
    for (auto& g : n.glue) ok = ok && g.D <= max_D;
    if (ok) m = n;
  }
  return m;
}

// Slot with base (MN-1)/N reached from 1/0 through the pivot M/1.
SlotData two_pivot_slot(std::int64_t M, std::int64_t N) {
  Slope pivot{M, 1};
  Slope end = make_slope(M * N - 1, N);
  return SlotData{end, pivot, 0};
}

}  // namespace

TEST_CASE("thresholds") {
  CHECK_NOTHROW(Thresholds{}.validate());
  CHECK_THROWS_AS((Thresholds{5, 4, 10}.validate()), PreconditionFailure);
  CHECK_THROWS_AS((Thresholds{0, 4, 10}.validate()), PreconditionFailure);
}

TEST_CASE("formula distance examples") {
  Thresholds th;
  std::mt19937_64 rng(31);
  auto m = walk(rng, base_marking(3), 30);
  CHECK(formula_distance_T(m, m, th) == 0);
  CHECK(formula_distance_WP(m, m, th) == 0);

  for (std::int64_t n : {1000, 100000, 10000000}) {
    auto b = base_marking(2);
    b.slots[0].trans = twist(Slope{1, 0}, n, Slope{0, 1});
    auto v = formula_distance_T(base_marking(2), b, th);
    CHECK(double(v) == doctest::Approx(2.0 * std::log(double(n))).epsilon(0.25));
    CHECK(v == horo_distance({0, 0}, {n, 0}));
    CHECK(formula_distance_WP(base_marking(2), b, th) == 0);
  }

  auto b = base_marking(2);
  Slope far{985, 408};  // partial quotients all 2
  b.slots[1] = SlotData{far, reference_neighbor(far), 0};
  auto d = farey_distance(Slope{1, 0}, far);
  REQUIRE(d > th.K);
  CHECK(formula_distance_WP(base_marking(2), b, th) == d);
}

TEST_CASE("formula distance properties") {
  std::mt19937_64 rng(32);
  for (int trial = 0; trial < 300; ++trial) {
    int k = 2 + trial % 3;
    auto a = walk(rng, base_marking(k), 25);
    auto b = walk(rng, a, 25);
    Thresholds th{1 + trial % 5, 8, 10};
    auto T = formula_distance_T(a, b, th);
    auto W = formula_distance_WP(a, b, th);
    CHECK(W <= T);
    CHECK(T == formula_distance_T(b, a, th));
    for (int r = 1; r < k; ++r) CHECK(formula_distance_T(act(r, a), act(r, b), th) == T);
    Thresholds up = th;
    up.K += 1;
    up.K_hat = std::max(up.K_hat, up.K);
    CHECK(formula_distance_T(a, b, up) <= T);
    CHECK(formula_distance_WP(a, b, up) <= W);
  }
}

TEST_CASE("formula distance tracks the move graph on small pairs") {
  std::mt19937_64 rng(33);
  Thresholds th{2, 8, 10};
  for (int trial = 0; trial < 200; ++trial) {
    auto a = walk(rng, base_marking(2 + trial % 2), 20);
    auto b = walk(rng, a, 1 + trial % 10);
    auto d = bfs_distance(a, b, 12);
    if (!d) continue;
    auto f = formula_distance_T(a, b, th);
    CHECK(double(f) <= 4.0 * *d + 12.0);
    CHECK(double(*d) <= 4.0 * f + 12.0);
  }
}

TEST_CASE("rafi formula") {
  Thresholds th;
  RafiSnapshot s{base_marking(2), {{CurveRef::glue(0), 0.01}}};
  CHECK(rafi_formula(s, s, th) == 0.0);

  RafiSnapshot t{base_marking(2), {}};
  for (double d : {3.0, 7.5, 20.0}) {
    RafiSnapshot u{base_marking(2), {{CurveRef::in_slot(1, Slope{1, 0}), std::exp(-d)}}};
    CHECK(rafi_formula(u, t, th) == doctest::Approx(d));
  }

  RafiSnapshot bad{base_marking(2), {{CurveRef::glue(1), 0.0}}};
  CHECK_THROWS_AS(rafi_formula(bad, t, th), PreconditionFailure);

  // Shadow consistency: with no short curves and large twists the log terms
  // follow half of the horoball terms.
  std::mt19937_64 rng(34);
  for (int trial = 0; trial < 50; ++trial) {
    auto a = walk(rng, base_marking(2), 20, 0);
    auto b = a;
    std::int64_t n = 100000 + std::int64_t(rng() % 1000000);
    b.glue[0].tau += n;
    auto r = rafi_terms(RafiSnapshot{a, {}}, RafiSnapshot{b, {}}, th);
    CHECK(r.annular_log == doctest::Approx(std::log(double(n))));
    auto f = formula_distance_T(a, b, th);
    CHECK(std::abs(2.0 * r.total() - double(f)) <= 6.0);
  }
}

TEST_CASE("large links") {
  auto a = base_marking(2);
  CHECK(large_links(a, a, 3).empty());

  auto b = a;
  b.glue[1].tau = 5000000;
  auto links = large_links(a, b, 4);
  REQUIRE(links.size() == 1);
  CHECK(links[0].y == SubsurfaceRef::annulus(CurveRef::glue(1)));
  CHECK(links[0].value == horo_distance({0, 0}, {5000000, 0}));

  auto c = a;
  c.slots[0] = two_pivot_slot(2000, 3000);
  auto l2 = large_links(a, c, 4);
  bool first = false, second = false;
  for (const auto& l : l2) {
    CHECK(l.value > 4);
    if (l.y == SubsurfaceRef::annulus(CurveRef::in_slot(0, Slope{1, 0}))) {
      first = true;
      CHECK(l.time_index == 1);
    }
    if (l.y == SubsurfaceRef::annulus(CurveRef::in_slot(0, Slope{2000, 1}))) {
      second = true;
      CHECK(l.time_index == 2);
    }
    CHECK(l.y.kind == SubsurfaceRef::Kind::annulus);
  }
  CHECK(first);
  CHECK(second);
  CHECK_THROWS_AS(large_links(a, c, 0), PreconditionFailure);
}

TEST_CASE("symmetric families") {
  CHECK(group_symmetric_families({}, base_marking(3), base_marking(3), 4, 2.0).families.empty());

  const int k = 3;
  auto a = base_marking(k);
  auto b = a;
  for (int i = 0; i < k; ++i) b.slots[i].trans = twist(Slope{1, 0}, 1000000, Slope{0, 1});
  auto fam = group_symmetric_families(large_links(a, b, 8), a, b, 4, 1.5);
  REQUIRE(fam.families.size() == 1);
  CHECK(fam.families[0].members.size() == std::size_t(k));
  CHECK(fam.families[0].ratio == 1.0);

  auto c = a;
  for (int i = 0; i < k; ++i) c.slots[i] = two_pivot_slot(5000, 7000);
  auto two = group_symmetric_families(large_links(a, c, 8), a, c, 4, 1.5);
  REQUIRE(two.families.size() >= 2);
  CHECK(two.families[0].members[0].y ==
        SubsurfaceRef::annulus(CurveRef::in_slot(0, Slope{1, 0})));
  CHECK(two.families[1].members[0].y ==
        SubsurfaceRef::annulus(CurveRef::in_slot(0, Slope{5000, 1})));
  for (std::size_t f = 1; f < two.families.size(); ++f)
    CHECK(two.families[f - 1].time_index <= two.families[f].time_index);

  auto near = b;
  near.slots[1].trans = twist(Slope{1, 0}, 30, Slope{0, 1});
  auto nf = group_symmetric_families(large_links(a, near, 24), a, near, 4, 1e9);
  REQUIRE(nf.families.size() == 1u);
  CHECK(nf.families[0].members[1].value == horo_distance({0, 0}, {30, 0}));

  auto lone = b;
  lone.slots[1] = a.slots[1];
  CHECK_THROWS_AS(group_symmetric_families(large_links(a, lone, 8), a, lone, 4, 1.5),
                  SymmetryViolation);

  auto uneven = b;
  uneven.slots[2].trans = twist(Slope{1, 0}, 1000, Slope{0, 1});
  CHECK_THROWS_AS(group_symmetric_families(large_links(a, uneven, 8), a, uneven, 4, 1.2),
                  SymmetryViolation);
}

TEST_CASE("canonical path") {
  auto a = base_marking(2);
  CHECK(canonical_path(a, a) == std::vector<AugMarking>{a});

  auto up = a;
  up.glue[1].D = 3;
  auto p = canonical_path(a, up);
  REQUIRE(p.size() == 4u);
  for (int l = 0; l <= 3; ++l) CHECK(p[l].glue[1].D == l);

  std::mt19937_64 rng(35);
  Thresholds th{2, 8, 10};
  for (int trial = 0; trial < 100; ++trial) {
    int k = 2 + trial % 3;
    auto x = walk(rng, base_marking(k), 30);
    auto y = walk(rng, x, 40);
    if (trial % 4 == 0) y.slots[0] = two_pivot_slot(300 + trial, 17);
    auto path = canonical_path(x, y);
    CHECK(path.front() == x);
    CHECK(path.back() == y);
    for (std::size_t i = 1; i < path.size(); ++i)
      CHECK(is_elementary_move(path[i - 1], path[i]));
    auto f = formula_distance_T(x, y, th);
    CHECK(double(path.size() - 1) <= 4.0 * f + 30.0);
    auto d = bfs_distance(x, y, 30);
    if (d) CHECK(std::int64_t(path.size()) - 1 >= *d);
  }
}

TEST_CASE("active segments") {
  auto a = base_marking(2);
  auto c = a;
  for (int i = 0; i < 2; ++i) c.slots[i] = two_pivot_slot(400, 900);
  auto path = canonical_path(a, c);
  CHECK_FALSE(active_segment(path, SubsurfaceRef::annulus(CurveRef::in_slot(0, Slope{3, 7}))));
  auto full = active_segment(path, SubsurfaceRef::annulus(CurveRef::glue(0)));
  REQUIRE(full);
  CHECK(full->first == 0);
  CHECK(full->second == path.size() - 1);

  auto s1 = active_segment(path, SubsurfaceRef::annulus(CurveRef::in_slot(0, Slope{1, 0})));
  auto s2 = active_segment(path, SubsurfaceRef::annulus(CurveRef::in_slot(0, Slope{400, 1})));
  auto s3 = active_segment(path, SubsurfaceRef::annulus(CurveRef::in_slot(0, c.slots[0].base)));
  REQUIRE(s1);
  REQUIRE(s2);
  REQUIRE(s3);
  CHECK(s1->second < s2->first);
  CHECK(s2->second < s3->first);
  CHECK(s3->second == path.size() - 1);
}
