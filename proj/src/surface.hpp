#pragma once
// Point counting on the quartic del Pezzo surface
//   Q1: x0 x1 - x2^2 = 0
//   Q2: x0 x4 - x1 x2 + x3^2 = 0
// inside P^4, off the line x0 = x2 = x3 = 0.  Heights are max|x_i| on the
// primitive integral representative with positive first nonzero coordinate.

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "arith.hpp"

namespace mnd5 {

using Coords = std::array<i64, 5>;

bool is_on_surface(const Coords& x);
bool is_on_line(const Coords& x);
bool is_primitive(const Coords& x);

// primitive representative, first nonzero coordinate positive
Coords normalize(const Coords& x);
u64 height(const Coords& x);

struct CountRecord {
    u64 B = 0;
    u64 count = 0;
    std::string method;
    double elapsed_ms = 0.0;
};

// Exhaustive scan over representatives with x0 >= 1 (every point of the
// surface off the line has x0 != 0).  Heavy; capped at B <= 80.
CountRecord count_naive(u64 B);
std::vector<u64> naive_histogram(u64 Bmax);  // index h: classes at height h

// Count of (x0,...,x4), all coordinates nonzero, 0 < x0,x1,x3 <= B,
// |x4| <= B, primitive, on the surface: congruence enumeration over the
// square-part parameterization x0 = z0^2 z2, x1 = z1^2 z2, x2 = z0 z1 z2.
CountRecord count_direct(u64 B, int threads = 1);
std::vector<u64> direct_histogram(u64 Bmax, int threads = 1);
std::vector<Coords> direct_points(u64 B);  // B <= 2000, for structural tests

// Points of U with some coordinate in {x1,x2,x3,x4} equal to zero: one
// isolated point plus three one-parameter families indexed by coprime pairs.
CountRecord count_degenerate(u64 B);
std::vector<u64> degenerate_histogram(u64 Bmax);

// #{1 <= a,b <= x : gcd(a,b) = 1}  (Moebius sum)
u64 coprime_pair_count(u64 x);

u64 isqrt_u64(u64 n);
u64 icbrt_u64(u64 n);
u64 iroot4_u64(u64 n);

enum class CountMethod { naive, direct, torsor, degenerate };
CountMethod parse_method(const std::string& name);

// N_{U,H}(B): naive scans directly; direct/torsor assemble
// 2 * count(method) + count_degenerate.
CountRecord count_U(u64 B, CountMethod method, int threads = 1);

}  // namespace mnd5
