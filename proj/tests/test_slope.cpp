#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <deque>
#include <map>
#include <numeric>
#include <random>
#include <set>

#include "ct/errors.hpp"
#include "ct/slope.hpp"

using namespace ct;

namespace {

// Farey graph restricted to slopes with |p|, q <= bound, explored by BFS.
struct BoundedFarey {
  std::vector<Slope> verts;
  std::map<Slope, int> index;
  std::vector<std::vector<int>> adj;

  explicit BoundedFarey(std::int64_t bound) {
    for (std::int64_t q = 0; q <= bound; ++q)
      for (std::int64_t p = -bound; p <= bound; ++p) {
        if (q == 0 && p != 1) continue;
        if (std::gcd(p, q) != 1) continue;
        index[Slope{p, q}] = int(verts.size());
        verts.push_back(Slope{p, q});
      }
    adj.resize(verts.size());
    for (std::size_t i = 0; i < verts.size(); ++i)
      for (std::size_t j = i + 1; j < verts.size(); ++j) {
        __int128 w = __int128(verts[i].p) * verts[j].q -
                     __int128(verts[i].q) * verts[j].p;
        if (w == 1 || w == -1) {
          adj[i].push_back(int(j));
          adj[j].push_back(int(i));
        }
      }
  }

  std::vector<int> bfs(const Slope& s) const {
    std::vector<int> d(verts.size(), -1);
    std::deque<int> q{index.at(s)};
    d[index.at(s)] = 0;
    while (!q.empty()) {
      int u = q.front();
      q.pop_front();
      for (int v : adj[u])
        if (d[v] < 0) {
          d[v] = d[u] + 1;
          q.push_back(v);
        }
    }
    return d;
  }
  int dist(const Slope& a, const Slope& b) const { return bfs(a)[index.at(b)]; }
};

const BoundedFarey& oracle() {
  static const BoundedFarey f(45);
  return f;
}

Slope random_slope(std::mt19937_64& rng, std::int64_t bound) {
  std::uniform_int_distribution<std::int64_t> dp(-bound, bound), dq(0, bound);
  for (;;) {
    std::int64_t p = dp(rng), q = dq(rng);
    if (q == 0 && p != 1) continue;
    if (std::gcd(p, q) != 1) continue;
    return Slope{p, q};
  }
}

// Unimodular action of one positive twist written out with explicit
// matrices, for comparison with the library formula.
Slope twist_once(const Slope& c, const Slope& v) {
  std::int64_t w = c.p * v.q - c.q * v.p;
  return make_slope(v.p + w * c.p, v.q + w * c.q);
}

}  // namespace

TEST_CASE("canonical form and parsing") {
  CHECK(make_slope(-2, -4) == Slope{1, 2});
  CHECK(make_slope(-3, 0) == Slope{1, 0});
  CHECK(make_slope(4, -6) == Slope{-2, 3});
  CHECK(parse_slope("5/2") == Slope{5, 2});
  CHECK(parse_slope("-1/0") == Slope{1, 0});
  CHECK(to_string(Slope{-3, 7}) == "-3/7");
  CHECK_THROWS_AS(parse_slope("2/4"), ParseError);
  CHECK_THROWS_AS(parse_slope("x"), ParseError);
  CHECK_THROWS_AS(intersection(Slope{2, 4}, Slope{1, 0}), PreconditionFailure);
}

TEST_CASE("intersection examples") {
  CHECK(intersection(Slope{0, 1}, Slope{1, 0}) == 1);
  CHECK(intersection(Slope{1, 1}, Slope{1, 1}) == 0);
  CHECK(intersection(Slope{5, 2}, Slope{3, 1}) == 1);
}

TEST_CASE("intersection symmetric and zero only on the diagonal") {
  std::vector<Slope> all;
  for (std::int64_t q = 0; q <= 30; ++q)
    for (std::int64_t p = -30; p <= 30; ++p)
      if ((q > 0 && std::gcd(p, q) == 1) || (q == 0 && p == 1))
        all.push_back(Slope{p, q});
  std::size_t bad = 0;
  for (const auto& a : all)
    for (const auto& b : all) {
      auto ab = intersection(a, b);
      if (ab != intersection(b, a)) ++bad;
      if ((ab == 0) != (a == b)) ++bad;
    }
  CHECK(bad == 0);
}

TEST_CASE("farey distance examples") {
  CHECK(farey_distance(Slope{0, 1}, Slope{0, 1}) == 0);
  CHECK(farey_distance(Slope{0, 1}, Slope{1, 0}) == 1);
  // BFS oracle value, frozen.
  CHECK(oracle().dist(Slope{0, 1}, Slope{5, 2}) == 3);
  CHECK(farey_distance(Slope{0, 1}, Slope{5, 2}) == 3);
}

TEST_CASE("farey distance matches bounded BFS on random pairs") {
  std::mt19937_64 rng(11);
  int mismatches = 0;
  for (int i = 0; i < 400; ++i) {
    Slope a = random_slope(rng, 20), b = random_slope(rng, 20);
    if (farey_distance(a, b) != oracle().dist(a, b)) ++mismatches;
  }
  CHECK(mismatches == 0);
}

TEST_CASE("farey distance is a metric on random triples") {
  std::mt19937_64 rng(12);
  for (int i = 0; i < 200; ++i) {
    Slope a = random_slope(rng, 20), b = random_slope(rng, 20),
          c = random_slope(rng, 20);
    auto ab = farey_distance(a, b), bc = farey_distance(b, c),
         ac = farey_distance(a, c);
    CHECK(ab == farey_distance(b, a));
    CHECK(ac <= ab + bc);
    CHECK((ab == 0) == (a == b));
    CHECK((ab == 1) == (intersection(a, b) == 1));
  }
}

TEST_CASE("farey distance with huge partial quotients") {
  Slope a{0, 1};
  Slope b = twist(Slope{1, 0}, 1000000, Slope{1, 3});
  // T_{1/0}^n moves 1/3 to (1 + 3n)/3; a -> 1/0 -> 0/1 route is short.
  auto d = farey_distance(a, b);
  CHECK(d <= 4);
  auto g = farey_geodesic(a, b);
  CHECK(std::int64_t(g.size()) - 1 == d);
}

TEST_CASE("twist examples") {
  CHECK(twist(Slope{1, 0}, 1, Slope{0, 1}) == Slope{1, 1});
  CHECK(twist(Slope{3, 7}, 9, Slope{3, 7}) == Slope{3, 7});
  Slope it{1, 0};
  for (int i = 0; i < 3; ++i) it = twist_once(Slope{0, 1}, it);
  CHECK(it == Slope{-1, 3});
  CHECK(twist(Slope{0, 1}, 3, Slope{1, 0}) == Slope{-1, 3});
}

TEST_CASE("twist preserves intersection and inverts") {
  std::mt19937_64 rng(13);
  std::uniform_int_distribution<int> dn(-9, 9);
  for (int i = 0; i < 500; ++i) {
    Slope c = random_slope(rng, 12), a = random_slope(rng, 12),
          b = random_slope(rng, 12);
    int n = dn(rng);
    CHECK(intersection(twist(c, n, a), twist(c, n, b)) == intersection(a, b));
    CHECK(twist(c, -n, twist(c, n, a)) == a);
    Slope iter = a;
    for (int j = 0; j < std::abs(n); ++j)
      iter = n > 0 ? twist_once(c, iter) : twist(c, -1, iter);
    CHECK(iter == twist(c, n, a));
  }
}

TEST_CASE("relative twisting examples") {
  Slope core{1, 0}, a{0, 1};
  CHECK(relative_twisting(core, a, a) == 0);
  CHECK(relative_twisting(core, twist(core, 7, a), a) == -7);
  // Brute-force minimisation over n in [-20, 20], frozen.
  auto brute = [](Slope c, Slope x, Slope y) {
    std::int64_t best = 0, bv = -1;
    for (std::int64_t n = -20; n <= 20; ++n) {
      std::int64_t v = intersection(twist(c, n, x), y);
      if (bv < 0 || v < bv || (v == bv && std::abs(n) < std::abs(best))) {
        bv = v;
        best = n;
      }
    }
    return best;
  };
  CHECK(brute(core, Slope{0, 1}, Slope{1, 1}) == 1);
  CHECK(relative_twisting(core, Slope{0, 1}, Slope{1, 1}) == 1);

  std::mt19937_64 rng(14);
  for (int i = 0; i < 300; ++i) {
    Slope c = random_slope(rng, 6), x = random_slope(rng, 6),
          y = random_slope(rng, 6);
    if (c == x || c == y) continue;
    CHECK(relative_twisting(c, x, y) == brute(c, x, y));
  }
  CHECK_THROWS_AS(relative_twisting(core, core, a), UndefinedProjection);
}

TEST_CASE("relative twisting shifts with twisting of the first argument") {
  std::mt19937_64 rng(15);
  std::uniform_int_distribution<int> dn(-50, 50);
  for (int i = 0; i < 500; ++i) {
    Slope c = random_slope(rng, 10), a = random_slope(rng, 10),
          b = random_slope(rng, 10);
    if (c == a || c == b) continue;
    int n = dn(rng);
    auto lhs = relative_twisting(c, twist(c, n, a), b);
    auto rhs = relative_twisting(c, a, b) - n;
    CHECK(std::abs(lhs - rhs) <= 2);
    CHECK(std::abs(relative_twisting(c, a, b) + relative_twisting(c, b, a)) <= 1);
  }
}

TEST_CASE("reference neighbour and twist offset") {
  std::mt19937_64 rng(16);
  for (int i = 0; i < 300; ++i) {
    Slope s = random_slope(rng, 40);
    Slope r = reference_neighbor(s);
    CHECK(is_canonical(r));
    CHECK(intersection(s, r) == 1);
    std::int64_t n = std::int64_t(i) - 150;
    CHECK(twist_offset(s, r, twist(s, n, r)) == n);
  }
  CHECK(reference_neighbor(Slope{1, 0}) == Slope{0, 1});
  CHECK(reference_neighbor(Slope{4, 1}) == Slope{1, 0});
}

TEST_CASE("farey geodesic examples") {
  Slope a{3, 5};
  CHECK(farey_geodesic(a, a) == std::vector<Slope>{a});
  CHECK(farey_geodesic(Slope{0, 1}, Slope{1, 0}) ==
        std::vector<Slope>{Slope{0, 1}, Slope{1, 0}});
  auto g = farey_geodesic(Slope{0, 1}, Slope{5, 2});
  REQUIRE(g.size() == 4);
  for (std::size_t i = 1; i < g.size(); ++i)
    CHECK(intersection(g[i - 1], g[i]) == 1);
  // Strip-order tie break, frozen after the oracle length check above.
  CHECK(g == std::vector<Slope>{Slope{0, 1}, Slope{1, 1}, Slope{2, 1},
                                Slope{5, 2}});
}

TEST_CASE("farey geodesic length matches distance") {
  std::mt19937_64 rng(17);
  for (int i = 0; i < 300; ++i) {
    Slope a = random_slope(rng, 200), b = random_slope(rng, 200);
    auto g = farey_geodesic(a, b);
    CHECK(g.front() == a);
    CHECK(g.back() == b);
    for (std::size_t j = 1; j < g.size(); ++j)
      CHECK(intersection(g[j - 1], g[j]) == 1);
    CHECK(std::int64_t(g.size()) - 1 == farey_distance(b, a));
  }
}
