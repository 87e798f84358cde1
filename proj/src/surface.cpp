#include "surface.hpp"

#include <algorithm>
#include <cassert>
#include <chrono>
#include <cmath>
#include <mutex>
#include <numeric>

#include "parallel.hpp"
#include "torsor.hpp"

namespace mnd5 {

namespace {

double ms_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

u64 abs_i64(i64 v) { return v < 0 ? u64(-v) : u64(v); }

}  // namespace

bool is_on_surface(const Coords& x) {
    i128 q1 = i128(x[0]) * x[1] - i128(x[2]) * x[2];
    i128 q2 = i128(x[0]) * x[4] - i128(x[1]) * x[2] + i128(x[3]) * x[3];
    return q1 == 0 && q2 == 0;
}

bool is_on_line(const Coords& x) { return x[0] == 0 && x[2] == 0 && x[3] == 0; }

bool is_primitive(const Coords& x) {
    u64 g = 0;
    for (i64 c : x) g = std::gcd(g, abs_i64(c));
    return g == 1;
}

Coords normalize(const Coords& x) {
    u64 g = 0;
    for (i64 c : x) g = std::gcd(g, abs_i64(c));
    if (g == 0) throw std::invalid_argument("normalize: zero vector");
    Coords out = x;
    for (i64& c : out) c /= i64(g);
    for (i64 c : out) {
        if (c == 0) continue;
        if (c < 0)
            for (i64& d : out) d = -d;
        break;
    }
    return out;
}

u64 height(const Coords& x) {
    u64 h = 0;
    for (i64 c : x) h = std::max(h, abs_i64(c));
    return h;
}

u64 isqrt_u64(u64 n) {
    if (n == 0) return 0;
    u64 r = u64(std::sqrt(double(n)));
    while (r > 0 && u128(r) * r > n) --r;
    while (u128(r + 1) * (r + 1) <= n) ++r;
    return r;
}

u64 icbrt_u64(u64 n) {
    if (n == 0) return 0;
    u64 r = u64(std::cbrt(double(n)));
    while (r > 0 && u128(r) * r * r > n) --r;
    while (u128(r + 1) * (r + 1) * (r + 1) <= n) ++r;
    return r;
}

u64 iroot4_u64(u64 n) { return isqrt_u64(isqrt_u64(n)); }

// ---------------------------------------------------------------------------
// naive scan

std::vector<u64> naive_histogram(u64 Bmax) {
    if (Bmax < 1 || Bmax > 80) throw std::invalid_argument("naive_histogram: B must be in [1,80]");
    std::vector<u64> hist(Bmax + 1, 0);
    i64 B = i64(Bmax);
    for (i64 x0 = 1; x0 <= B; ++x0) {
        for (i64 x1 = 0; x1 <= B; ++x1) {
            u64 prod = u64(x0) * u64(x1);
            u64 s = isqrt_u64(prod);
            if (s * s != prod) continue;
            i64 cands[2] = {i64(s), -i64(s)};
            int ncand = s == 0 ? 1 : 2;
            for (int ci = 0; ci < ncand; ++ci) {
                i64 x2 = cands[ci];
                for (i64 x3 = -B; x3 <= B; ++x3) {
                    i64 num = x1 * x2 - x3 * x3;
                    if (num % x0 != 0) continue;
                    i64 x4 = num / x0;
                    if (x4 < -B || x4 > B) continue;
                    Coords x{x0, x1, x2, x3, x4};
                    if (!is_primitive(x)) continue;
                    hist[height(x)] += 1;
                }
            }
        }
    }
    return hist;
}

CountRecord count_naive(u64 B) {
    auto t0 = std::chrono::steady_clock::now();
    auto hist = naive_histogram(B);
    u64 total = 0;
    for (u64 c : hist) total += c;
    return {B, total, "naive", ms_since(t0)};
}

// ---------------------------------------------------------------------------
// congruence enumeration over x0 = z0^2 z2, x1 = z1^2 z2, x2 = z0 z1 z2

namespace {

Factorization square_times(const Factorization& f0, const Factorization& f2) {
    // factorization of z0^2 * z2 from those of z0 and z2
    Factorization out;
    out.value = f0.value * f0.value * f2.value;
    size_t i = 0, j = 0;
    while (i < f0.factors.size() || j < f2.factors.size()) {
        if (j == f2.factors.size() ||
            (i < f0.factors.size() && f0.factors[i].first < f2.factors[j].first)) {
            out.factors.push_back({f0.factors[i].first, 2 * f0.factors[i].second});
            ++i;
        } else if (i == f0.factors.size() || f2.factors[j].first < f0.factors[i].first) {
            out.factors.push_back(f2.factors[j]);
            ++j;
        } else {
            out.factors.push_back({f0.factors[i].first, 2 * f0.factors[i].second + f2.factors[j].second});
            ++i;
            ++j;
        }
    }
    return out;
}

// all points with 0 < x0,x1,x3 <= Bmax, |x4| <= Bmax, coordinates nonzero,
// primitive, for z2 in [z2lo, z2hi)
template <class Emit>
void direct_scan_range(u64 Bmax, u64 z2lo, u64 z2hi, Emit&& emit) {
    for (u64 z2 = z2lo; z2 < z2hi; ++z2) {
        u64 zcap = isqrt_u64(Bmax / z2);
        if (zcap == 0) continue;
        Factorization f2 = factorize(z2);
        for (u64 z0 = 1; z0 <= zcap; ++z0) {
            u64 q = z0 * z0 * z2;
            Factorization fq = square_times(factorize(z0), f2);
            for (u64 z1 = 1; z1 <= zcap; ++z1) {
                if (std::gcd(z0, z1) != 1) continue;
                u64 x1 = z1 * z1 * z2;
                u64 x2abs = z0 * z1 * z2;
                for (int sgn : {1, -1}) {
                    i128 M = i128(sgn) * i128(z0) * z1 * z1 * z1 * z2 * z2;
                    i64 aq = i64(i128((M % i128(q)) + i128(q)) % i128(q));
                    for (u64 r : sqrt_roots_mod(aq, q, false, fq)) {
                        for (u64 x3 = r; x3 <= Bmax; x3 += q) {
                            i128 num = M - i128(x3) * x3;
                            i64 x4 = i64(num / i128(q));
                            if (x4 == 0) continue;
                            u64 ax4 = abs_i64(x4);
                            if (ax4 > Bmax) continue;
                            u64 g = std::gcd(z2, x3);
                            if (g > 1 && std::gcd(g, ax4) > 1) continue;
                            u64 h = std::max({q, x1, x2abs, x3, ax4});
                            emit(Coords{i64(q), i64(x1), i64(sgn) * i64(x2abs), i64(x3), x4}, h);
                        }
                    }
                }
            }
        }
    }
}

constexpr u64 kDirectBlock = 512;

}  // namespace

std::vector<u64> direct_histogram(u64 Bmax, int threads) {
    if (Bmax < 1 || Bmax > 1'000'000) throw std::invalid_argument("direct_histogram: B out of range");
    std::vector<u64> hist(Bmax + 1, 0);
    std::mutex merge_mutex;
    u64 nblocks = (Bmax + kDirectBlock - 1) / kDirectBlock;
    run_blocks(nblocks, threads, [&](u64 b) {
        u64 lo = b * kDirectBlock + 1;
        u64 hi = std::min(Bmax + 1, lo + kDirectBlock);
        std::vector<u64> local(Bmax + 1, 0);
        direct_scan_range(Bmax, lo, hi, [&](const Coords&, u64 h) { local[h] += 1; });
        std::lock_guard<std::mutex> lock(merge_mutex);
        for (u64 h = 1; h <= Bmax; ++h) hist[h] += local[h];
    });
    return hist;
}

CountRecord count_direct(u64 B, int threads) {
    if (B < 1 || B > 1'000'000) throw std::invalid_argument("count_direct: B out of range");
    auto t0 = std::chrono::steady_clock::now();
    u64 nblocks = (B + kDirectBlock - 1) / kDirectBlock;
    std::vector<u64> partial(nblocks, 0);
    run_blocks(nblocks, threads, [&](u64 b) {
        u64 lo = b * kDirectBlock + 1;
        u64 hi = std::min(B + 1, lo + kDirectBlock);
        u64 c = 0;
        direct_scan_range(B, lo, hi, [&](const Coords&, u64) { ++c; });
        partial[b] = c;
    });
    u64 total = 0;
    for (u64 c : partial) total += c;
    return {B, total, "direct", ms_since(t0)};
}

std::vector<Coords> direct_points(u64 B) {
    if (B < 1 || B > 2000) throw std::invalid_argument("direct_points: B out of range");
    std::vector<Coords> pts;
    direct_scan_range(B, 1, B + 1, [&](const Coords& x, u64) { pts.push_back(x); });
    return pts;
}

// ---------------------------------------------------------------------------
// degenerate locus: x1 x2 x3 x4 = 0 on U

u64 coprime_pair_count(u64 x) {
    if (x == 0) return 0;
    // mu sieve up to x
    std::vector<int> mu_tab(x + 1, 1);
    std::vector<bool> comp(x + 1, false);
    std::vector<u64> primes;
    for (u64 i = 2; i <= x; ++i) {
        if (!comp[i]) {
            primes.push_back(i);
            mu_tab[i] = -1;
        }
        for (u64 p : primes) {
            if (i * p > x) break;
            comp[i * p] = true;
            if (i % p == 0) {
                mu_tab[i * p] = 0;
                break;
            }
            mu_tab[i * p] = -mu_tab[i];
        }
    }
    i64 total = 0;
    for (u64 d = 1; d <= x; ++d) {
        if (mu_tab[d] == 0) continue;
        u64 m = x / d;
        total += i64(mu_tab[d]) * i64(m * m);
    }
    return u64(total);
}

CountRecord count_degenerate(u64 B) {
    if (B < 1) throw std::invalid_argument("count_degenerate: B must be >= 1");
    auto t0 = std::chrono::steady_clock::now();
    u64 total = 1;  // (1,0,0,0,0)
    total += 2 * coprime_pair_count(isqrt_u64(B));
    total += 2 * coprime_pair_count(icbrt_u64(B));
    total += 2 * coprime_pair_count(iroot4_u64(B));
    return {B, total, "degenerate", ms_since(t0)};
}

std::vector<u64> degenerate_histogram(u64 Bmax) {
    if (Bmax < 1) throw std::invalid_argument("degenerate_histogram: B must be >= 1");
    std::vector<u64> hist(Bmax + 1, 0);
    hist[1] += 1;  // (1,0,0,0,0)
    // x3 = 0 family: (a^2, 0, 0, +-ab, -b^2) has height max(a,b)^2
    for (u64 a = 1; a * a <= Bmax; ++a)
        for (u64 b = 1; b * b <= Bmax; ++b)
            if (std::gcd(a, b) == 1) hist[std::max(a, b) * std::max(a, b)] += 2;
    // x3-free cubic family: (a^3, a b^2, a^2 b, 0, b^3), b of either sign
    for (u64 a = 1; a * a * a <= Bmax; ++a)
        for (u64 b = 1; b * b * b <= Bmax; ++b)
            if (std::gcd(a, b) == 1) {
                u64 m = std::max(a, b);
                hist[m * m * m] += 2;
            }
    // x4 = 0 family: (a^4, b^4, a^2 b^2, +-a b^3, 0), height max(a,b)^4
    for (u64 a = 1; a * a * a * a <= Bmax; ++a)
        for (u64 b = 1; b * b * b * b <= Bmax; ++b)
            if (std::gcd(a, b) == 1) {
                u64 m = std::max(a, b);
                hist[m * m * m * m] += 2;
            }
    return hist;
}

CountMethod parse_method(const std::string& name) {
    if (name == "naive") return CountMethod::naive;
    if (name == "direct") return CountMethod::direct;
    if (name == "torsor") return CountMethod::torsor;
    if (name == "degenerate") return CountMethod::degenerate;
    throw std::invalid_argument("unknown method: " + name);
}

CountRecord count_U(u64 B, CountMethod method, int threads) {
    auto t0 = std::chrono::steady_clock::now();
    CountRecord rec;
    rec.B = B;
    switch (method) {
        case CountMethod::naive: {
            rec = count_naive(B);
            rec.method = "U/naive";
            break;
        }
        case CountMethod::direct: {
            rec.count = 2 * count_direct(B, threads).count + count_degenerate(B).count;
            rec.method = "U/direct";
            break;
        }
        case CountMethod::torsor: {
            rec.count = 2 * count_torsor(B, threads).count + count_degenerate(B).count;
            rec.method = "U/torsor";
            break;
        }
        case CountMethod::degenerate: {
            rec = count_degenerate(B);
            break;
        }
    }
    rec.elapsed_ms = ms_since(t0);
    return rec;
}

}  // namespace mnd5
