#pragma once
// Universal-torsor counting.  Integral torsor points are
//   (v0,v1,v2,v3; y0,...,y4), v_i >= 1, y0,y2,y3 >= 1, y1,y4 nonzero,
// satisfying
//   v2 y0^2 y4 - v0 y1^3 y2^2 + v3 y3^2 = 0
// with v0 v2 v3 squarefree, gcd(v2 v3 y0, y2) = gcd(v0 v3, y0) = 1,
// gcd(y3, v0 y0 y2) = 1, gcd(y4, v1 v2) = 1, gcd(y1, v0 v1 v2 v3 y0) = 1.
// The monomial lift lands on the surface and is a bijection onto the points
// counted by count_direct, matching heights.

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "arith.hpp"
#include "surface.hpp"

namespace mnd5 {

struct TorsorPoint {
    std::array<u64, 4> v{1, 1, 1, 1};
    std::array<i64, 5> y{1, 1, 1, 1, 1};  // y0, y1, y2, y3, y4
};

bool is_torsor_point(const TorsorPoint& t);

// x0 = v0^4 v1^6 v2^5 v3^3 y0^4 y2^2,  x1 = v0^2 v1^2 v2 v3 y1^2 y2^2,
// x2 = v0^3 v1^4 v2^3 v3^2 y0^2 y1 y2^2,  x3 = v0^2 v1^3 v2^2 v3^2 y0 y2 y3,
// x4 = y4
Coords lift(const TorsorPoint& t);

// max of the x0, x1, x3 monomials and |y4|; equals the lifted height
u64 psi_height(const TorsorPoint& t);

// exact integer roots on 128-bit arguments
u64 isqrt_u128(u128 n);
u64 ceil_sqrt_u128(u128 n);
// largest L >= 0 with lhs_coef * L^3 < rhs
u64 icbrt_strict(u128 lhs_coef, u128 rhs);

struct RegionBounds {
    double V1 = 0, Y1 = 0, Y2 = 0, Y3 = 0;
};
RegionBounds region_bounds(u64 B, const std::array<u64, 4>& v, u64 y0, u64 y2);

CountRecord count_torsor(u64 B, int threads = 1);
std::vector<u64> torsor_histogram(u64 Bmax, int threads = 1);
std::vector<TorsorPoint> torsor_points(u64 B);  // B <= 2000

// constructive inverse of lift; empty when x is not a liftable point
std::optional<TorsorPoint> reduce_to_torsor(const Coords& x);

}  // namespace mnd5
