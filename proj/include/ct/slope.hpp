#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace ct {

// Simple closed curve on a once-punctured torus, stored as a primitive
// integer pair in canonical form (q > 0, or exactly 1/0).
struct Slope {
  std::int64_t p = 1;
  std::int64_t q = 0;

  friend bool operator==(const Slope&, const Slope&) = default;
  friend auto operator<=>(const Slope& a, const Slope& b) {
    if (a.q != b.q) return a.q <=> b.q;
    return a.p <=> b.p;
  }
};

struct TwistWord {
  Slope curve;
  std::int64_t exponent = 0;
};

// Normalizes any nonzero integer pair to the canonical slope it spans.
Slope make_slope(std::int64_t p, std::int64_t q);
bool is_canonical(const Slope& s);
void require_canonical(const Slope& s);

std::string to_string(const Slope& s);
Slope parse_slope(const std::string& text);

// Algebraic intersection of the chosen representatives. Its sign is only
// meaningful up to the orientation of each curve.
std::int64_t omega(const Slope& a, const Slope& b);
std::int64_t intersection(const Slope& a, const Slope& b);

Slope twist(const TwistWord& t, const Slope& a);
inline Slope twist(const Slope& core, std::int64_t n, const Slope& a) {
  return twist(TwistWord{core, n}, a);
}

// argmin over n of intersection(T_core^n a, b), ties toward smaller |n|.
std::int64_t relative_twisting(const Slope& core, const Slope& a,
                               const Slope& b);

// Fixed neighbour of s used as the zero of twist coordinates around s.
Slope reference_neighbor(const Slope& s);

// n with T_core^n(from) == to; both must be Farey neighbours of core.
std::int64_t twist_offset(const Slope& core, const Slope& from,
                          const Slope& to);

std::int64_t farey_distance(const Slope& a, const Slope& b);

// Geodesic vertex sequence from a to b. Among geodesics, the one whose
// vertices come first in continued-fraction strip order is returned.
std::vector<Slope> farey_geodesic(const Slope& a, const Slope& b);

struct SlopeHash {
  std::size_t operator()(const Slope& s) const noexcept {
    return std::hash<std::int64_t>{}(s.p * 1000003 + s.q * 7919);
  }
};

}  // namespace ct
