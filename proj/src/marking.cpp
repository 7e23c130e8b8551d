#include "ct/marking.hpp"

#include <algorithm>
#include <queue>
#include <tuple>
#include <unordered_map>

#include "ct/errors.hpp"

namespace ct {

namespace {

inline void mix(std::size_t& h, std::uint64_t v) {
  v ^= v >> 33;
  v *= 0xff51afd7ed558ccdULL;
  v ^= v >> 33;
  h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
}

}  // namespace

std::size_t AugMarkingHash::operator()(const AugMarking& m) const noexcept {
  std::size_t h = m.slots.size();
  for (const auto& g : m.glue) {
    mix(h, std::uint64_t(g.tau));
    mix(h, std::uint64_t(g.D));
  }
  for (const auto& s : m.slots) {
    mix(h, std::uint64_t(s.base.p));
    mix(h, std::uint64_t(s.base.q));
    mix(h, std::uint64_t(s.trans.p));
    mix(h, std::uint64_t(s.trans.q));
    mix(h, std::uint64_t(s.D));
  }
  return h;
}

void validate(const AugMarking& m) {
  if (m.slots.size() < 2 || m.glue.size() != m.slots.size())
    throw ModelMismatch("marking needs k >= 2 slots and k gluing curves");
  for (const auto& g : m.glue)
    if (g.D < 0) throw PreconditionFailure("negative length datum");
  for (const auto& s : m.slots) {
    require_canonical(s.base);
    require_canonical(s.trans);
    if (s.D < 0) throw PreconditionFailure("negative length datum");
    if (intersection(s.base, s.trans) != 1)
      throw PreconditionFailure("transversal must meet its base once");
  }
}

void require_same_surface(const AugMarking& a, const AugMarking& b) {
  if (a.k() != b.k() || a.glue.size() != b.glue.size())
    throw ModelMismatch("markings live on different model surfaces");
}

AugMarking uniform_marking(int k, const SlotData& slot, const GlueData& glue) {
  AugMarking m;
  m.slots.assign(k, slot);
  m.glue.assign(k, glue);
  return m;
}

AugMarking act(int r, const AugMarking& m) {
  const int k = m.k();
  AugMarking out = m;
  for (int i = 0; i < k; ++i) {
    out.slots[mod_k(i + r, k)] = m.slots[i];
    out.glue[mod_k(i + r, k)] = m.glue[i];
  }
  return out;
}

CurveRef act(int r, const CurveRef& c, int k) {
  CurveRef out = c;
  out.index = mod_k(c.index + r, k);
  return out;
}

bool is_fixed(const AugMarking& m) {
  for (int i = 1; i < m.k(); ++i)
    if (!(m.slots[i] == m.slots[0]) || !(m.glue[i] == m.glue[0])) return false;
  return true;
}

bool is_base(const CurveRef& c, const AugMarking& m) {
  if (c.is_glue()) return true;
  return m.slots.at(c.index).base == c.slope;
}

int length_data(const CurveRef& c, const AugMarking& m) {
  if (c.is_glue()) return m.glue.at(c.index).D;
  const auto& s = m.slots.at(c.index);
  return s.base == c.slope ? s.D : 0;
}

std::int64_t twist_reach(int D) { return std::max<std::int64_t>(1, horo_width(D)); }

namespace {

bool all_lengths_zero(const AugMarking& m) {
  for (const auto& g : m.glue)
    if (g.D != 0) return false;
  for (const auto& s : m.slots)
    if (s.D != 0) return false;
  return true;
}

}  // namespace

std::vector<AugMarking> elementary_moves(const AugMarking& m, FlipRule rule) {
  std::vector<AugMarking> out;
  const int k = m.k();
  const bool strict_ok = rule == FlipRule::relaxed || all_lengths_zero(m);
  for (int i = 0; i < k; ++i) {
    if (m.slots[i].D == 0 && strict_ok) {
      AugMarking n = m;
      std::swap(n.slots[i].base, n.slots[i].trans);
      out.push_back(std::move(n));
    }
  }
  for (int j = 0; j < k; ++j) {
    const std::int64_t reach = twist_reach(m.glue[j].D);
    for (std::int64_t s = -reach; s <= reach; ++s) {
      if (s == 0) continue;
      AugMarking n = m;
      n.glue[j].tau += s;
      out.push_back(std::move(n));
    }
  }
  for (int i = 0; i < k; ++i) {
    const auto& sd = m.slots[i];
    const std::int64_t reach = twist_reach(sd.D);
    for (std::int64_t s = -reach; s <= reach; ++s) {
      if (s == 0) continue;
      AugMarking n = m;
      n.slots[i].trans = twist(sd.base, s, sd.trans);
      out.push_back(std::move(n));
    }
  }
  for (int j = 0; j < k; ++j) {
    AugMarking up = m;
    ++up.glue[j].D;
    out.push_back(std::move(up));
    if (m.glue[j].D > 0) {
      AugMarking down = m;
      --down.glue[j].D;
      out.push_back(std::move(down));
    }
  }
  for (int i = 0; i < k; ++i) {
    AugMarking up = m;
    ++up.slots[i].D;
    out.push_back(std::move(up));
    if (m.slots[i].D > 0) {
      AugMarking down = m;
      --down.slots[i].D;
      out.push_back(std::move(down));
    }
  }
  return out;
}

bool is_elementary_move(const AugMarking& a, const AugMarking& b,
                        FlipRule rule) {
  require_same_surface(a, b);
  int diff_glue = -1, diff_slot = -1, ndiff = 0;
  for (int i = 0; i < a.k(); ++i) {
    if (!(a.glue[i] == b.glue[i])) {
      diff_glue = i;
      ++ndiff;
    }
    if (!(a.slots[i] == b.slots[i])) {
      diff_slot = i;
      ++ndiff;
    }
  }
  if (ndiff != 1) return false;
  if (diff_glue >= 0) {
    const auto &x = a.glue[diff_glue], &y = b.glue[diff_glue];
    if (x.D == y.D) {
      std::int64_t d = y.tau - x.tau;
      return d != 0 && std::abs(d) <= twist_reach(x.D);
    }
    return x.tau == y.tau && std::abs(x.D - y.D) == 1;
  }
  const auto &x = a.slots[diff_slot], &y = b.slots[diff_slot];
  if (x.base == y.base) {
    if (x.trans == y.trans) return std::abs(x.D - y.D) == 1;
    if (x.D != y.D) return false;
    std::int64_t n = relative_twisting(x.base, x.trans, y.trans);
    return twist(x.base, n, x.trans) == y.trans && n != 0 &&
           std::abs(n) <= twist_reach(x.D);
  }
  bool flip = x.D == 0 && y.D == 0 && y.base == x.trans && y.trans == x.base;
  if (!flip) return false;
  return rule == FlipRule::relaxed || all_lengths_zero(a);
}

std::optional<int> bfs_distance_literal(const AugMarking& a,
                                        const AugMarking& b, int cap,
                                        FlipRule rule) {
  require_same_surface(a, b);
  if (a == b) return 0;
  using Map = std::unordered_map<AugMarking, int, AugMarkingHash>;
  Map seen[2];
  std::vector<AugMarking> frontier[2];
  seen[0][a] = 0;
  seen[1][b] = 0;
  frontier[0] = {a};
  frontier[1] = {b};
  int depth[2] = {0, 0};
  int best = cap + 1;
  while (depth[0] + depth[1] < best && !frontier[0].empty() &&
         !frontier[1].empty()) {
    const int s = frontier[0].size() <= frontier[1].size() ? 0 : 1;
    std::vector<AugMarking> next;
    for (const auto& m : frontier[s]) {
      for (auto& n : elementary_moves(m, rule)) {
        if (seen[s].count(n)) continue;
        seen[s][n] = depth[s] + 1;
        auto hit = seen[1 - s].find(n);
        if (hit != seen[1 - s].end())
          best = std::min(best, depth[s] + 1 + hit->second);
        next.push_back(std::move(n));
      }
    }
    frontier[s] = std::move(next);
    ++depth[s];
  }
  if (best > cap) return std::nullopt;
  return best;
}

namespace {

struct PortalKey {
  Slope base, entry;
  int level;
  friend bool operator==(const PortalKey&, const PortalKey&) = default;
};

struct PortalHash {
  std::size_t operator()(const PortalKey& k) const noexcept {
    std::size_t h = std::size_t(k.level);
    mix(h, std::uint64_t(k.base.p));
    mix(h, std::uint64_t(k.base.q));
    mix(h, std::uint64_t(k.entry.p));
    mix(h, std::uint64_t(k.entry.q));
    return h;
  }
};

}  // namespace

// States are points of the horoball over the current base slope; leaving
// a horoball requires level 0 and a flip. A node records the base, the
// transversal at horoball offset zero, and the level.
std::optional<int> slot_move_distance(const SlotData& a, const SlotData& b,
                                      int cap) {
  if (cap < 0) return std::nullopt;
  const Slope target = b.base;
  auto lower = [&](const Slope& base, int level) -> int {
    if (base == target) return std::abs(level - b.D);
    return level + int(farey_distance(base, target)) + b.D;
  };

  struct Item {
    int f, g;
    PortalKey key;
    bool goal;
  };
  auto cmp = [](const Item& x, const Item& y) {
    return std::tie(x.f, x.g) > std::tie(y.f, y.g);
  };
  std::priority_queue<Item, std::vector<Item>, decltype(cmp)> open(cmp);
  std::unordered_map<PortalKey, int, PortalHash> best;

  PortalKey start{a.base, a.trans, a.D};
  const int h0 = lower(a.base, a.D);
  if (h0 > cap) return std::nullopt;
  open.push({h0, 0, start, false});
  best[start] = 0;

  while (!open.empty()) {
    Item it = open.top();
    open.pop();
    if (it.f > cap) return std::nullopt;
    if (it.goal) return it.g;
    auto found = best.find(it.key);
    if (found != best.end() && found->second < it.g) continue;
    const auto& [base, entry, level] = it.key;

    if (base == target) {
      std::int64_t n = twist_offset(base, entry, b.trans);
      std::int64_t c = horo_distance({0, level}, {n, b.D});
      if (it.g + c <= cap) open.push({int(it.g + c), int(it.g + c), it.key, true});
      // Leaving and coming back costs at least the direct twist.
      continue;
    }
    // Leave through a flip at offset n. Any route out through u_n that does
    // not come back to this base crosses every u_j between n and the pair of
    // link vertices bounding the region of the target, so offsets far from
    // that pair cannot beat the cap. Routes that return are dominated by
    // leaving from the later visit directly.
    const __int128 w = __int128(entry.p) * target.q - __int128(entry.q) * target.p;
    const __int128 ab = __int128(omega(base, entry)) * omega(base, target);
    __int128 num = -w, den = ab;
    if (den < 0) num = -num, den = -den;
    const __int128 lo = num >= 0 ? num / den : -((-num + den - 1) / den);
    const __int128 hi = lo + (lo * den == num ? 0 : 1);
    const std::int64_t room = cap - it.g - 1;
    if (room < 0) continue;
    for (__int128 nn = lo - room; nn <= hi + room; ++nn) {
      const std::int64_t n = std::int64_t(nn);
      const std::int64_t gap = nn < lo ? std::int64_t(lo - nn) : nn > hi ? std::int64_t(nn - hi) : 0;
      if (it.g + 1 + gap > cap) continue;
      const std::int64_t c = horo_distance({0, level}, {n, 0});
      if (it.g + c + 1 + gap > cap) continue;
      Slope out = twist(base, n, entry);
      PortalKey nk{out, base, 0};
      const int g = int(it.g + c + 1);
      const int f = g + std::max<int>(lower(out, 0), int(gap) + b.D);
      if (f > cap) continue;
      auto prev = best.find(nk);
      if (prev != best.end() && prev->second <= g) continue;
      best[nk] = g;
      open.push({f, g, nk, false});
    }
  }
  return std::nullopt;
}

std::optional<int> bfs_distance(const AugMarking& a, const AugMarking& b,
                                int cap) {
  require_same_surface(a, b);
  std::int64_t total = 0;
  for (int j = 0; j < a.k(); ++j) {
    total += horo_distance({a.glue[j].tau, a.glue[j].D},
                           {b.glue[j].tau, b.glue[j].D});
    if (total > cap) return std::nullopt;
  }
  for (int i = 0; i < a.k(); ++i) {
    auto d = slot_move_distance(a.slots[i], b.slots[i], cap - int(total));
    if (!d) return std::nullopt;
    total += *d;
  }
  return int(total);
}

void fixed_locus_members(int k, const FixedLocusBounds& bounds,
                         const std::function<void(const AugMarking&)>& emit) {
  if (bounds.bases.empty() || bounds.trans_twist < 0 || bounds.slot_D_max < 0 ||
      bounds.tau_max < 0 || bounds.glue_D_max < 0)
    throw PreconditionFailure("empty fixed-locus bounds");
  for (const Slope& base : bounds.bases) {
    const Slope ref = reference_neighbor(base);
    for (std::int64_t n = -bounds.trans_twist; n <= bounds.trans_twist; ++n)
      for (int sd = 0; sd <= bounds.slot_D_max; ++sd)
        for (std::int64_t t = -bounds.tau_max; t <= bounds.tau_max; ++t)
          for (int gd = 0; gd <= bounds.glue_D_max; ++gd)
            emit(uniform_marking(k, SlotData{base, twist(base, n, ref), sd},
                                 GlueData{t, gd}));
  }
}

std::size_t fixed_locus_count(const FixedLocusBounds& b) {
  return b.bases.size() * std::size_t(2 * b.trans_twist + 1) *
         std::size_t(b.slot_D_max + 1) * std::size_t(2 * b.tau_max + 1) *
         std::size_t(b.glue_D_max + 1);
}

}  // namespace ct
