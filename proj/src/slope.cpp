#include "ct/slope.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <queue>
#include <utility>

#include "ct/errors.hpp"

namespace ct {

namespace {

using i128 = __int128;

std::int64_t narrow(i128 v) {
  if (v > std::numeric_limits<std::int64_t>::max() ||
      v < std::numeric_limits<std::int64_t>::min())
    throw InternalAssertion("slope arithmetic overflow");
  return static_cast<std::int64_t>(v);
}

i128 floor_div(i128 a, i128 b) {
  i128 q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

i128 abs128(i128 v) { return v < 0 ? -v : v; }

// u, v with a*u + b*v == gcd(a, b) > 0.
void egcd(std::int64_t a, std::int64_t b, std::int64_t& u, std::int64_t& v) {
  std::int64_t r0 = a, r1 = b, s0 = 1, s1 = 0, t0 = 0, t1 = 1;
  while (r1 != 0) {
    std::int64_t k = r0 / r1;
    std::tie(r0, r1) = std::make_pair(r1, r0 - k * r1);
    std::tie(s0, s1) = std::make_pair(s1, s0 - k * s1);
    std::tie(t0, t1) = std::make_pair(t1, t0 - k * t1);
  }
  if (r0 < 0) {
    s0 = -s0;
    t0 = -t0;
  }
  u = s0;
  v = t0;
}

Slope from128(i128 p, i128 q) { return make_slope(narrow(p), narrow(q)); }

}  // namespace

Slope make_slope(std::int64_t p, std::int64_t q) {
  if (p == 0 && q == 0) throw PreconditionFailure("zero vector is not a slope");
  std::int64_t g = std::gcd(p, q);
  p /= g;
  q /= g;
  if (q < 0 || (q == 0 && p < 0)) {
    p = -p;
    q = -q;
  }
  return Slope{p, q};
}

bool is_canonical(const Slope& s) {
  if (s.q == 0) return s.p == 1;
  if (s.q < 0) return false;
  return std::gcd(s.p, s.q) == 1;
}

void require_canonical(const Slope& s) {
  if (!is_canonical(s))
    throw PreconditionFailure("non-canonical slope " + std::to_string(s.p) +
                              "/" + std::to_string(s.q));
}

std::string to_string(const Slope& s) {
  return std::to_string(s.p) + "/" + std::to_string(s.q);
}

Slope parse_slope(const std::string& text) {
  auto slash = text.find('/');
  if (slash == std::string::npos) throw ParseError("slope needs p/q: " + text);
  std::int64_t p = 0, q = 0;
  try {
    std::size_t used = 0;
    p = std::stoll(text.substr(0, slash), &used);
    if (used != slash) throw ParseError("bad slope: " + text);
    std::string rest = text.substr(slash + 1);
    q = std::stoll(rest, &used);
    if (used != rest.size()) throw ParseError("bad slope: " + text);
  } catch (const std::logic_error&) {
    throw ParseError("bad slope: " + text);
  }
  if ((p == 0 && q == 0) || std::gcd(p, q) != 1)
    throw ParseError("slope not primitive: " + text);
  return make_slope(p, q);
}

std::int64_t omega(const Slope& a, const Slope& b) {
  return narrow(i128(a.p) * b.q - i128(a.q) * b.p);
}

std::int64_t intersection(const Slope& a, const Slope& b) {
  require_canonical(a);
  require_canonical(b);
  std::int64_t w = omega(a, b);
  return w < 0 ? -w : w;
}

Slope twist(const TwistWord& t, const Slope& a) {
  require_canonical(t.curve);
  require_canonical(a);
  if (t.exponent == 0) return a;
  i128 k = i128(t.exponent) * omega(t.curve, a);
  return from128(i128(a.p) + k * t.curve.p, i128(a.q) + k * t.curve.q);
}

std::int64_t relative_twisting(const Slope& core, const Slope& a,
                               const Slope& b) {
  require_canonical(core);
  require_canonical(a);
  require_canonical(b);
  i128 A = omega(core, a);
  i128 B = omega(core, b);
  if (A == 0 || B == 0)
    throw UndefinedProjection("curve disjoint from annulus core " +
                              to_string(core));
  i128 w = omega(a, b);
  i128 ab = A * B;
  i128 n0 = floor_div(-w, ab);
  i128 best = n0;
  i128 bestv = abs128(w + n0 * ab);
  i128 n1 = n0 + 1;
  i128 v1 = abs128(w + n1 * ab);
  if (v1 < bestv || (v1 == bestv && abs128(n1) < abs128(best))) best = n1;
  return narrow(best);
}

Slope reference_neighbor(const Slope& s) {
  require_canonical(s);
  if (s.q == 0) return Slope{0, 1};
  if (s.q == 1) return Slope{1, 0};
  // b = p^{-1} mod q, so that p*b - q*a == 1.
  std::int64_t u = 0, v = 0;
  egcd(((s.p % s.q) + s.q) % s.q, s.q, u, v);
  std::int64_t b = ((u % s.q) + s.q) % s.q;
  i128 a = (i128(s.p) * b - 1) / s.q;
  return from128(a, b);
}

std::int64_t twist_offset(const Slope& core, const Slope& from,
                          const Slope& to) {
  std::int64_t n = relative_twisting(core, from, to);
  if (twist(core, n, from) != to)
    throw PreconditionFailure("slopes are not twist-related around " +
                              to_string(core));
  return n;
}

std::vector<Slope> farey_geodesic(const Slope& a, const Slope& b) {
  require_canonical(a);
  require_canonical(b);
  if (a == b) return {a};
  if (intersection(a, b) == 1) return {a, b};

  // A = [[a.p, x], [a.q, y]] in SL2(Z) sends 1/0 to a.
  std::int64_t u = 0, v = 0;
  egcd(a.p, a.q, u, v);
  const std::int64_t y = u, x = -v;
  i128 bu = i128(y) * b.p - i128(x) * b.q;
  i128 bv = -i128(a.q) * b.p + i128(a.p) * b.q;
  if (bv < 0) {
    bu = -bu;
    bv = -bv;
  }
  const i128 a0 = floor_div(bu, bv);
  const i128 r = bu - a0 * bv;

  std::vector<std::int64_t> cf;
  for (i128 n = bv, d = r; d != 0;) {
    i128 k = n / d;
    cf.push_back(narrow(k));
    i128 t = n - k * d;
    n = d;
    d = t;
  }

  // Strip vertices in (num, den) coordinates of the translated target.
  struct Node {
    i128 num, den;
  };
  std::vector<Node> nodes;
  std::vector<std::vector<std::pair<int, int>>> adj;
  auto node_of = [&](i128 num, i128 den) {
    for (std::size_t i = 0; i < nodes.size(); ++i)
      if (nodes[i].num == num && nodes[i].den == den) return int(i);
    nodes.push_back({num, den});
    adj.emplace_back();
    return int(nodes.size() - 1);
  };
  auto link = [&](int i, int j, int w) {
    adj[i].push_back({j, w});
    adj[j].push_back({i, w});
  };
  struct Chain {
    i128 bn, bd, sn, sd;  // base vertex and step
    std::vector<std::int64_t> ms;
    std::vector<int> ids;
  };
  std::vector<Chain> chains;

  // Convergent recurrence seeded with 1/0 and 0/1.
  i128 hm2 = 1, km2 = 0, hm1 = 0, km1 = 1;
  const int start = node_of(1, 0);
  for (std::size_t j = 0; j < cf.size(); ++j) {
    const std::int64_t aj = cf[j];
    Chain c{hm2, km2, hm1, km1, {}, {}};
    for (std::int64_t m : {std::int64_t(0), std::int64_t(1), std::int64_t(2),
                           aj - 2, aj - 1, aj})
      if (m >= 0 && m <= aj) c.ms.push_back(m);
    std::sort(c.ms.begin(), c.ms.end());
    c.ms.erase(std::unique(c.ms.begin(), c.ms.end()), c.ms.end());
    const int pivot = node_of(hm1, km1);
    for (std::int64_t m : c.ms) {
      int id = node_of(hm2 + m * hm1, km2 + m * km1);
      c.ids.push_back(id);
      link(pivot, id, 1);
    }
    for (std::size_t i = 1; i < c.ms.size(); ++i)
      link(c.ids[i - 1], c.ids[i], int(c.ms[i] - c.ms[i - 1]));
    chains.push_back(std::move(c));
    i128 h = aj * hm1 + hm2, k = aj * km1 + km2;
    hm2 = hm1;
    km2 = km1;
    hm1 = h;
    km1 = k;
  }
  const int goal = node_of(hm1, km1);

  const int inf = std::numeric_limits<int>::max();
  std::vector<int> dist(nodes.size(), inf), pred(nodes.size(), -1);
  using Item = std::pair<int, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  dist[start] = 0;
  pq.push({0, start});
  while (!pq.empty()) {
    auto [d, u0] = pq.top();
    pq.pop();
    if (d != dist[u0]) continue;
    for (auto [w, wt] : adj[u0]) {
      int nd = d + wt;
      if (nd < dist[w]) {
        dist[w] = nd;
        pred[w] = u0;
        pq.push({nd, w});
      } else if (nd == dist[w] && u0 < pred[w]) {
        pred[w] = u0;
      }
    }
  }

  auto back = [&](i128 num, i128 den) {
    i128 n2 = num + a0 * den;
    return from128(i128(a.p) * n2 + i128(x) * den,
                   i128(a.q) * n2 + i128(y) * den);
  };
  // Expand compressed chain edges into their intermediate fan vertices.
  auto expand = [&](int from, int to, std::vector<Slope>& out) {
    for (const Chain& c : chains) {
      for (std::size_t i = 1; i < c.ids.size(); ++i) {
        bool fwd = c.ids[i - 1] == from && c.ids[i] == to;
        bool bwd = c.ids[i] == from && c.ids[i - 1] == to;
        if (!fwd && !bwd) continue;
        std::int64_t m0 = c.ms[i - 1], m1 = c.ms[i];
        if (m1 - m0 <= 1) return;
        if (fwd)
          for (std::int64_t m = m0 + 1; m < m1; ++m)
            out.push_back(back(c.bn + m * c.sn, c.bd + m * c.sd));
        else
          for (std::int64_t m = m1 - 1; m > m0; --m)
            out.push_back(back(c.bn + m * c.sn, c.bd + m * c.sd));
        return;
      }
    }
  };

  std::vector<int> rev;
  for (int cur = goal; cur != -1; cur = pred[cur]) rev.push_back(cur);
  std::reverse(rev.begin(), rev.end());
  std::vector<Slope> path;
  for (std::size_t i = 0; i < rev.size(); ++i) {
    if (i > 0) expand(rev[i - 1], rev[i], path);
    path.push_back(back(nodes[rev[i]].num, nodes[rev[i]].den));
  }
  check(path.front() == a && path.back() == b, "farey geodesic endpoints");
  return path;
}

std::int64_t farey_distance(const Slope& a, const Slope& b) {
  return std::int64_t(farey_geodesic(a, b).size()) - 1;
}

}  // namespace ct
