#include "torsor.hpp"

#include <algorithm>
#include <cassert>
#include <chrono>
#include <cmath>
#include <numeric>

#include "parallel.hpp"

namespace mnd5 {

namespace {

double ms_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

u64 abs_i64(i64 v) { return v < 0 ? u64(-v) : u64(v); }

}  // namespace

u64 isqrt_u128(u128 n) {
    if (n == 0) return 0;
    u64 r = u64(std::sqrt(double(u64(n >> 64)) * 0x1p64 + double(u64(n))));
    while (r > 0 && u128(r) * r > n) --r;
    while (u128(r + 1) * (r + 1) <= n) ++r;
    return r;
}

// smallest y with y*y >= n
u64 ceil_sqrt_u128(u128 n) {
    u64 r = isqrt_u128(n);
    if (u128(r) * r < n) ++r;
    return r;
}

u64 icbrt_strict(u128 lhs_coef, u128 rhs) {
    // largest L >= 0 with lhs_coef * L^3 < rhs
    if (rhs == 0) return 0;
    u64 L = u64(std::cbrt(double(u64(rhs / lhs_coef))));
    while (L > 0 && lhs_coef * L * L * L >= rhs) --L;
    while (lhs_coef * u128(L + 1) * (L + 1) * (L + 1) < rhs) ++L;
    return L;
}

namespace {

u64 checked_u64(u128 v) {
    if (v > u128(UINT64_MAX)) throw overflow_error("u64 range");
    return u64(v);
}

// u128 power-product of the lift monomials
u128 mono_x0(const std::array<u64, 4>& v, u64 y0, u64 y2) {
    u128 v0 = v[0], v1 = v[1], v2 = v[2], v3 = v[3];
    u128 r = v0 * v0 * v0 * v0;
    r *= v1 * v1 * v1 * v1 * v1 * v1;
    r *= v2 * v2 * v2 * v2 * v2;
    r *= v3 * v3 * v3;
    r *= u128(y0) * y0 * y0 * y0;
    r *= u128(y2) * y2;
    return r;
}

u128 mono_x1_coef(const std::array<u64, 4>& v, u64 y2) {
    u128 v0 = v[0], v1 = v[1], v2 = v[2], v3 = v[3];
    return v0 * v0 * v1 * v1 * v2 * v3 * u128(y2) * y2;
}

u128 mono_x3_coef(const std::array<u64, 4>& v, u64 y0, u64 y2) {
    u128 v0 = v[0], v1 = v[1], v2 = v[2], v3 = v[3];
    return v0 * v0 * v1 * v1 * v1 * v2 * v2 * v3 * v3 * u128(y0) * y2;
}

u64 kernel_squarefree(u64 n, u64& square_root_part) {
    // n = kernel * square_root_part^2 with kernel squarefree
    u64 ker = 1, sq = 1;
    for (auto& [p, e] : factorize(n).factors) {
        if (e & 1) ker *= p;
        for (int i = 0; i < e / 2; ++i) sq *= p;
    }
    square_root_part = sq;
    return ker;
}

}  // namespace

bool is_torsor_point(const TorsorPoint& t) {
    const auto& v = t.v;
    i64 y0 = t.y[0], y1 = t.y[1], y2 = t.y[2], y3 = t.y[3], y4 = t.y[4];
    for (u64 vi : v)
        if (vi < 1) return false;
    if (y0 < 1 || y2 < 1 || y3 < 1) return false;
    if (y1 == 0 || y4 == 0) return false;
    i128 eq = i128(v[2]) * y0 * y0 * y4 - i128(v[0]) * y1 * y1 * y1 * y2 * y2 + i128(v[3]) * y3 * y3;
    if (eq != 0) return false;
    if (mu(v[0] * v[2] * v[3]) == 0) return false;
    if (std::gcd(u64(v[2] * v[3]) * u64(y0), u64(y2)) != 1) return false;
    if (std::gcd(v[0] * v[3], u64(y0)) != 1) return false;
    if (std::gcd(u64(y3), v[0] * u64(y0) * u64(y2)) != 1) return false;
    if (std::gcd(abs_i64(y4), v[1] * v[2]) != 1) return false;
    if (std::gcd(abs_i64(y1), v[0] * v[1] * v[2] * v[3] * u64(y0)) != 1) return false;
    return true;
}

Coords lift(const TorsorPoint& t) {
    const auto& v = t.v;
    u64 y0 = u64(t.y[0]), y2 = u64(t.y[2]), y3 = u64(t.y[3]);
    i64 y1 = t.y[1];
    u128 x0 = mono_x0(v, y0, y2);
    u128 x1 = mono_x1_coef(v, y2) * u128(y1 < 0 ? -y1 : y1) * u128(y1 < 0 ? -y1 : y1);
    u128 x3 = mono_x3_coef(v, y0, y2) * y3;
    u128 v0 = v[0], v1 = v[1], v2 = v[2], v3 = v[3];
    u128 x2abs = v0 * v0 * v0 * v1 * v1 * v1 * v1 * v2 * v2 * v2 * v3 * v3 *
                 u128(y0) * y0 * abs_i64(y1) * u128(y2) * y2;
    i64 sx2 = y1 < 0 ? -1 : 1;
    Coords out{i64(checked_u64(x0)), i64(checked_u64(x1)), sx2 * i64(checked_u64(x2abs)),
               i64(checked_u64(x3)), t.y[4]};
    return out;
}

u64 psi_height(const TorsorPoint& t) {
    const auto& v = t.v;
    u64 y0 = u64(t.y[0]), y2 = u64(t.y[2]), y3 = u64(t.y[3]);
    u64 ay1 = abs_i64(t.y[1]);
    u128 x0 = mono_x0(v, y0, y2);
    u128 x1 = mono_x1_coef(v, y2) * ay1 * ay1;
    u128 x3 = mono_x3_coef(v, y0, y2) * y3;
    u128 h = std::max({x0, x1, x3, u128(abs_i64(t.y[4]))});
    return checked_u64(h);
}

RegionBounds region_bounds(u64 B, const std::array<u64, 4>& v, u64 y0, u64 y2) {
    double v0 = double(v[0]), v1 = double(v[1]), v2 = double(v[2]), v3 = double(v[3]);
    double b = double(B), t0 = double(y0), t2 = double(y2);
    RegionBounds r;
    r.V1 = std::pow(b / (std::pow(v0, 4) * std::pow(v2, 5) * std::pow(v3, 3) * std::pow(t0, 4) * t2 * t2), 1.0 / 6.0);
    r.Y1 = std::cbrt(b * v2 * t0 * t0 / (v0 * t2 * t2));
    r.Y2 = std::sqrt(b / (std::pow(v0, 4) * std::pow(v1, 6) * std::pow(v2, 5) * std::pow(v3, 3) * std::pow(t0, 4)));
    r.Y3 = std::sqrt(b * v2 * t0 * t0 / v3);
    if (r.V1 >= 1.0) assert(r.V1 * r.Y1 <= r.V1 * r.V1 * r.V1 * r.Y1 * 1.0000001);
    return r;
}

// ---------------------------------------------------------------------------
// enumeration

namespace {

struct OuterTuple {
    u64 v0, v1, v2, v3;
};

std::vector<OuterTuple> outer_tuples(u64 B) {
    std::vector<OuterTuple> out;
    for (u64 v0 = 1;; ++v0) {
        u128 p0 = u128(v0) * v0 * v0 * v0;
        if (p0 > B) break;
        if (!is_squarefree(v0)) continue;
        for (u64 v1 = 1;; ++v1) {
            u128 p1 = p0 * v1 * v1 * v1 * v1 * v1 * v1;
            if (p1 > B) break;
            for (u64 v2 = 1;; ++v2) {
                u128 p2 = p1 * v2 * v2 * v2 * v2 * v2;
                if (p2 > B) break;
                if (!is_squarefree(v2) || std::gcd(v0, v2) != 1) continue;
                for (u64 v3 = 1;; ++v3) {
                    u128 p3 = p2 * v3 * v3 * v3;
                    if (p3 > B) break;
                    if (!is_squarefree(v3) || std::gcd(v3, v0 * v2) != 1) continue;
                    out.push_back({v0, v1, v2, v3});
                }
            }
        }
    }
    return out;
}

template <class Emit>
void torsor_scan_tuple(u64 B, const OuterTuple& t, Emit&& emit) {
    const u64 v0 = t.v0, v1 = t.v1, v2 = t.v2, v3 = t.v3;
    u128 p3 = u128(v0) * v0 * v0 * v0;
    p3 *= u128(v1) * v1 * v1 * v1 * v1 * v1;
    p3 *= u128(v2) * v2 * v2 * v2 * v2;
    p3 *= u128(v3) * v3 * v3;
    const u64 y1gate = v0 * v1 * v2 * v3;
    for (u64 y0 = 1;; ++y0) {
        u128 p0 = p3 * y0 * y0 * y0 * y0;
        if (p0 > B) break;
        if (std::gcd(v0 * v3, y0) != 1) continue;
        const u64 m = v2 * y0 * y0;
        const u64 inv3 = inv_mod(v3 % m == 0 ? 1 : v3 % m, m);  // v3 coprime to m
        const Factorization fm = factorize(m);
        for (u64 y2 = 1;; ++y2) {
            u128 pfull = p0 * y2 * y2;
            if (pfull > B) break;  // x0 monomial
            if (std::gcd(v2 * v3 * y0, y2) != 1) continue;
            const u128 c1 = mono_x1_coef({v0, v1, v2, v3}, y2);  // x1 = c1 y1^2
            const u64 y1max = isqrt_u128(u128(B) / c1);
            if (y1max == 0) continue;
            // y1 > -Y1:  v0 y2^2 |y1|^3 < B v2 y0^2 for negative y1
            const u128 Kneg = u128(B) * v2 * y0 * y0;
            const u64 y1negmax = icbrt_strict(u128(v0) * y2 * y2, Kneg);
            const u128 c3 = mono_x3_coef({v0, v1, v2, v3}, y0, y2);  // x3 = c3 y3
            if (c3 > B) continue;
            const u64 y3cap = u64(u128(B) / c3);
            const u128 Bm = u128(B) * m;
            for (i64 y1 = -i64(y1negmax); y1 <= i64(y1max); ++y1) {
                if (y1 == 0) continue;
                u64 ay1 = abs_i64(y1);
                if (std::gcd(ay1, y1gate * y0) != 1) continue;
                // v3 rho^2 = v0 y1 (mod m)
                u64 y1m = u64(((y1 % i64(m)) + i64(m)) % i64(m));
                u64 a = mul_mod(mul_mod(v0 % m, y1m, m), inv3, m);
                auto roots = sqrt_roots_mod(i64(a), m, true, fm);
                if (roots.empty()) continue;
                // |y4| <= B window: W - Bm <= v3 y3^2 <= W + Bm
                i128 W = i128(v0) * y1 * y1 * y1 * i128(y2) * y2;
                i128 hi = W + i128(Bm);
                if (hi < i128(v3)) continue;
                u64 y3hi = isqrt_u128(u128(hi / i128(v3)));
                y3hi = std::min(y3hi, y3cap);
                i128 lo = W - i128(Bm);
                u64 y3lo = 1;
                if (lo > 0) {
                    // smallest y3 with v3 y3^2 >= lo
                    u128 q = u128(lo) / v3;
                    if (u128(lo) % v3) ++q;
                    y3lo = ceil_sqrt_u128(q);
                }
                if (y3lo > y3hi) continue;
                const u64 gate3 = v0 * y0 * y2;
                u64 y2m = y2 % m;
                for (u64 rho : roots) {
                    // y3 = rho y1 y2 (mod m)
                    u64 r0 = mul_mod(mul_mod(rho % m, y1m, m), y2m, m);
                    u64 y3 = r0 == 0 ? m : r0;
                    if (y3 < y3lo) y3 += ((y3lo - y3 + m - 1) / m) * m;
                    for (; y3 <= y3hi; y3 += m) {
                        i128 num = W - i128(v3) * y3 * y3;
                        i64 y4 = i64(num / i128(m));
                        if (y4 == 0) continue;
                        if (std::gcd(y3, gate3) != 1) continue;
                        if (std::gcd(abs_i64(y4), v1 * v2) != 1) continue;
                        TorsorPoint tp;
                        tp.v = {v0, v1, v2, v3};
                        tp.y = {i64(y0), y1, i64(y2), i64(y3), y4};
                        u128 x1 = c1 * ay1 * ay1;
                        u128 x3m = c3 * y3;
                        u64 h = checked_u64(std::max({pfull, x1, x3m, u128(abs_i64(y4))}));
                        emit(tp, h);
                    }
                }
            }
        }
    }
}

}  // namespace

CountRecord count_torsor(u64 B, int threads) {
    if (B < 1 || B > 100'000) throw std::invalid_argument("count_torsor: B out of range");
    auto t0 = std::chrono::steady_clock::now();
    auto tuples = outer_tuples(B);
    std::vector<u64> partial(tuples.size(), 0);
    run_blocks(tuples.size(), threads, [&](u64 i) {
        u64 c = 0;
        torsor_scan_tuple(B, tuples[i], [&](const TorsorPoint&, u64) { ++c; });
        partial[i] = c;
    });
    u64 total = 0;
    for (u64 c : partial) total += c;
    return {B, total, "torsor", ms_since(t0)};
}

std::vector<u64> torsor_histogram(u64 Bmax, int threads) {
    if (Bmax < 1 || Bmax > 100'000) throw std::invalid_argument("torsor_histogram: B out of range");
    auto tuples = outer_tuples(Bmax);
    std::vector<std::vector<u64>> partial(tuples.size());
    run_blocks(tuples.size(), threads, [&](u64 i) {
        std::vector<u64> local(Bmax + 1, 0);
        torsor_scan_tuple(Bmax, tuples[i], [&](const TorsorPoint&, u64 h) { local[h] += 1; });
        partial[i] = std::move(local);
    });
    std::vector<u64> hist(Bmax + 1, 0);
    for (auto& local : partial)
        for (u64 h = 1; h <= Bmax; ++h) hist[h] += local[h];
    return hist;
}

std::vector<TorsorPoint> torsor_points(u64 B) {
    if (B < 1 || B > 2000) throw std::invalid_argument("torsor_points: B out of range");
    std::vector<TorsorPoint> pts;
    for (const auto& t : outer_tuples(B))
        torsor_scan_tuple(B, t, [&](const TorsorPoint& tp, u64) { pts.push_back(tp); });
    return pts;
}

// ---------------------------------------------------------------------------
// constructive reduction surface -> torsor

std::optional<TorsorPoint> reduce_to_torsor(const Coords& x) {
    if (x[0] <= 0 || x[1] <= 0 || x[3] <= 0 || x[2] == 0 || x[4] == 0) return std::nullopt;
    if (!is_on_surface(x) || !is_primitive(x)) return std::nullopt;
    u64 x0 = u64(x[0]), x1 = u64(x[1]), x2a = abs_i64(x[2]), x3 = u64(x[3]);
    u64 z2 = std::gcd(x0, x1);
    u64 z0 = std::gcd(x0, x2a) / z2;
    u64 z1a = std::gcd(x1, x2a) / z2;
    if (z0 == 0 || z1a == 0) return std::nullopt;
    if (z0 * z0 * z2 != x0 || z1a * z1a * z2 != x1 || z0 * z1a * z2 != x2a) return std::nullopt;
    if (std::gcd(z0, z1a) != 1) return std::nullopt;
    // z0 = (v0 v3)(v1 v2 y0)^2, z2 = (v2 v3)(v0 v1 y2)^2
    u64 s0 = 0, s2 = 0;
    u64 a0 = kernel_squarefree(z0, s0);
    u64 a2 = kernel_squarefree(z2, s2);
    u64 v3 = std::gcd(a0, a2);
    u64 v0 = a0 / v3, v2 = a2 / v3;
    if (s0 % v2 != 0 || s2 % v0 != 0) return std::nullopt;
    u64 w0 = s0 / v2;  // v1 y0
    u64 w2 = s2 / v0;  // v1 y2
    u128 K = u128(v0) * v0 * v2 * v2 * v3 * v3;
    if (u128(x3) % K != 0) return std::nullopt;
    u64 w3 = u64(u128(x3) / K);  // v1^3 y0 y2 y3
    if (w3 % (w0 * w2) != 0) return std::nullopt;
    u64 w3p = w3 / (w0 * w2);  // v1 y3
    u64 v1 = std::gcd(w0, std::gcd(w2, w3p));
    TorsorPoint t;
    t.v = {v0, v1, v2, v3};
    t.y = {i64(w0 / v1), i64(x[2] < 0 ? -i64(z1a) : i64(z1a)), i64(w2 / v1), i64(w3p / v1), x[4]};
    if (!is_torsor_point(t)) return std::nullopt;
    return t;
}

}  // namespace mnd5
