#include "constants.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "quadrature.hpp"

namespace mnd5 {

namespace {

double u01(std::mt19937_64& rng) { return double(rng() >> 11) * 0x1p-53; }

u64 pow_u64(u64 b, int e) {
    u64 r = 1;
    while (e-- > 0) r *= b;
    return r;
}

// shared v-integral of the slice function with the sqrt(v) substitution near
// zero and splits at the two clip thresholds
double integrate_slices(bool pos_only, double abs_tol, double* err_out) {
    const double g_tol = abs_tol / 10.0;
    auto gv = [&](double v) {
        return pos_only ? g_pos_slice(v, g_tol) : g_slice(v, g_tol);
    };
    auto low = integrate([&](double s) { return 2.0 * s * gv(s * s); }, 0.0,
                         0.5, 0.4 * abs_tol);
    auto high = integrate(gv, 0.25, 1.0, 0.4 * abs_tol,
                          {kVClipActive, kVClipBelowOne});
    if (!low.converged || !high.converged)
        throw quadrature_error("slice integral tolerance not reached");
    if (err_out) *err_out = low.error + high.error + g_tol;
    return low.value + high.value;
}

}  // namespace

Rat simplex_volume_exact() {
    const int weights[5] = {6, 5, 3, 4, 2};
    Rat v(1);
    for (int w : weights) v = v / Rat(w);
    for (int k = 2; k <= 5; ++k) v = v / Rat(k);
    return v;
}

Rat alpha_exact() { return simplex_volume_exact() / Rat(4); }

McEstimate mc_simplex_volume(u64 samples, u64 seed) {
    std::mt19937_64 rng(seed);
    long double sum = 0.0L, sumsq = 0.0L;
    for (u64 i = 0; i < samples; ++i) {
        double t1 = u01(rng), t2 = u01(rng);
        double s = 1.0 - 6.0 * t1 - 5.0 * t2;
        double x = 0.0;
        if (s > 0.0) x = s * s * s / 144.0;  // fiber simplex 3 t3 + 4 t4 + 2 t5 <= s
        sum += x;
        sumsq += (long double)x * x;
    }
    McEstimate out;
    out.samples = samples;
    out.value = double(sum / samples);
    long double var = (sumsq - sum * sum / samples) / (samples - 1);
    out.se = double(std::sqrt(var / samples));
    return out;
}

LatticeReport verify_lattice() {
    LatticeReport rep;
    rep.gram = {{{-2, 1, 1, 1, 0, 0},
                 {1, -2, 0, 0, 0, 1},
                 {1, 0, -2, 0, 0, 0},
                 {1, 0, 0, -2, 1, 0},
                 {0, 0, 0, 1, -2, 0},
                 {0, 1, 0, 0, 0, -1}}};
    rep.canonical_coefs = {6, 5, 3, 4, 2, 4};
    rep.symmetric = true;
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j)
            if (rep.gram[i][j] != rep.gram[j][i]) rep.symmetric = false;
    rep.adjunction_ok = true;
    for (int i = 0; i < 6; ++i) {
        int deg = 0;
        for (int j = 0; j < 6; ++j) deg += rep.canonical_coefs[j] * rep.gram[j][i];
        rep.degrees[i] = deg;
        if (deg != 2 + rep.gram[i][i]) rep.adjunction_ok = false;
    }
    rep.canonical_self_intersection = 0;
    for (int i = 0; i < 6; ++i)
        rep.canonical_self_intersection += rep.canonical_coefs[i] * rep.degrees[i];
    rep.pass = rep.symmetric && rep.adjunction_ok &&
               rep.canonical_self_intersection == 4;
    return rep;
}

LocalDensityPoint local_density(u64 p, int r) {
    if (r < 1) throw std::invalid_argument("local_density needs r >= 1");
    u128 p3r = 1;
    for (int i = 0; i < 3 * r; ++i) {
        p3r *= p;
        if (p3r > u128(1000000000000ull)) throw std::invalid_argument("p^{3r} too large");
    }
    const u64 pr = pow_u64(p, r);

    u128 S = 0;
    // x0 a unit: x1 is pinned mod p^r, eta factor is trivial
    S += u128(euler_phi(pr)) * pr;

    // x0 = 0: first quadric forces p^{ceil(r/2)} | x2, x1 free
    {
        u64 step = pow_u64(p, (r + 1) / 2);
        for (u64 x2 = 0; x2 < pr; x2 += step)
            for (u64 x1 = 0; x1 < pr; ++x1)
                S += eta(i64(mul_mod(x1, x2, pr)), pr);
    }

    // 0 < v_p(x0) < r
    for (u64 x0 = p; x0 < pr; x0 += p) {
        int k0 = 0;
        u64 t = x0;
        while (t % p == 0) {
            t /= p;
            ++k0;
        }
        const u64 pk = pow_u64(p, k0);
        const u64 prk = pr / pk;
        const u64 uinv = inv_mod((x0 / pk) % prk, prk);
        for (u64 x2 = 0; x2 < pr; ++x2) {
            u64 sq = mul_mod(x2, x2, pr);
            if (sq % pk != 0) continue;
            u64 x1base = mul_mod((sq / pk) % prk, uinv, prk);
            for (u64 j = 0; j < pk; ++j) {
                u64 x1 = x1base + j * prk;
                S += eta(i64(mul_mod(x1, x2, pk)), pk);
            }
        }
    }

    LocalDensityPoint out;
    out.p = p;
    out.r = r;
    out.raw = u128(pr) * S;
    out.scaled = double((long double)out.raw / (long double)p3r);
    return out;
}

u128 local_density_naive(u64 p, int r) {
    u128 p5r = 1;
    for (int i = 0; i < 5 * r; ++i) {
        p5r *= p;
        if (p5r > u128(2000000000ull)) throw std::invalid_argument("p^{5r} too large");
    }
    const i64 pr = i64(pow_u64(p, r));
    u128 n = 0;
    for (i64 x0 = 0; x0 < pr; ++x0)
        for (i64 x1 = 0; x1 < pr; ++x1)
            for (i64 x2 = 0; x2 < pr; ++x2) {
                if ((x0 * x1 - x2 * x2) % pr != 0) continue;
                for (i64 x3 = 0; x3 < pr; ++x3)
                    for (i64 x4 = 0; x4 < pr; ++x4)
                        if (((x0 * x4 - x1 * x2 + x3 * x3) % pr + pr) % pr == 0) ++n;
            }
    return n;
}

double omega_p_closed(u64 p) {
    double x = 1.0 / double(p);
    return 1.0 + 6.0 * x + x * x;
}

std::vector<LocalDensityPoint> local_density_sequence(u64 p, int r_max) {
    std::vector<LocalDensityPoint> out;
    for (int r = 1; r <= r_max; ++r) out.push_back(local_density(p, r));
    return out;
}

LocalDensityCases local_density_cases(u64 p, int r) {
    if (r < 1) throw std::invalid_argument("local_density_cases needs r >= 1");
    u128 p2r = 1;
    for (int i = 0; i < 2 * r; ++i) {
        p2r *= p;
        if (p2r > u128(200000000ull)) throw std::invalid_argument("p^{2r} too large");
    }
    const u64 pr = pow_u64(p, r);
    auto val = [&](u64 x) {
        if (x == 0) return r;
        int k = 0;
        while (x % p == 0) {
            x /= p;
            ++k;
        }
        return k;
    };

    LocalDensityCases out;
    out.p = p;
    out.r = r;
    u128 s1 = 0, s2 = 0, s3 = 0;
    auto add = [&](int k0, int k1, u128 amount) {
        if (k0 + k1 >= r)
            s3 += amount;
        else if (k0 <= 3 * k1)
            s1 += amount;
        else
            s2 += amount;
    };

    // x0 a unit: x1 = x2^2 / x0 has valuation min(2 v_p(x2), r)
    for (int v2 = 0; v2 <= r; ++v2) {
        u64 nx2 = v2 < r ? euler_phi(pow_u64(p, r - v2)) : 1;
        add(0, std::min(2 * v2, r), u128(euler_phi(pr)) * nx2);
    }

    // x0 = 0
    {
        u64 step = pow_u64(p, u64((r + 1) / 2));
        for (u64 x2 = 0; x2 < pr; x2 += step)
            for (u64 x1 = 0; x1 < pr; ++x1)
                s3 += eta(i64(mul_mod(x1, x2, pr)), pr);
    }

    // 0 < v_p(x0) < r
    for (u64 x0 = p; x0 < pr; x0 += p) {
        int k0 = val(x0);
        const u64 pk = pow_u64(p, k0);
        const u64 prk = pr / pk;
        const u64 uinv = inv_mod((x0 / pk) % prk, prk);
        for (u64 x2 = 0; x2 < pr; ++x2) {
            u64 sq = mul_mod(x2, x2, pr);
            if (sq % pk != 0) continue;
            u64 x1base = mul_mod((sq / pk) % prk, uinv, prk);
            for (u64 j = 0; j < pk; ++j) {
                u64 x1 = x1base + j * prk;
                add(k0, val(x1), eta(i64(mul_mod(x1 % pk, x2 % pk, pk)), pk));
            }
        }
    }
    out.n1 = u128(pr) * s1;
    out.n2 = u128(pr) * s2;
    out.n3 = u128(pr) * s3;

    auto ppow = [&](int e) {
        u128 x = 1;
        while (e-- > 0) x *= p;
        return x;
    };
    for (int k0 = 0; k0 < r; ++k0)
        for (int k1 = 0; k0 + k1 < r; ++k1) {
            if ((k0 + k1) % 2 != 0) continue;
            if (k0 <= 3 * k1) {
                u128 h = u128(euler_phi(pow_u64(p, r - k0))) *
                         euler_phi(pow_u64(p, r - (k0 + k1) / 2)) * ppow(k0);
                out.n1_closed += ppow(r + k0 / 2) * h;
            } else if ((k0 - k1) % 4 == 0) {
                out.n2_closed += u128(p - 1) * (p - 1) * ppow(3 * r - (k0 - k1) / 4 - 2);
            }
        }
    return out;
}

EulerProduct tau_euler(u64 prime_cutoff) {
    if (prime_cutoff < 11) throw std::invalid_argument("cutoff too small for the tail bound");
    long double prod = 1.0L;
    for (u64 p : primes_up_to(prime_cutoff)) {
        long double x = 1.0L / p;
        long double one = (1.0L - x);
        long double f = one * one * one;
        f *= f;
        f *= 1.0L + 6.0L * x + x * x;
        if (!(f < 1.0L)) throw std::logic_error("euler factor must be below 1");
        if (p >= 5 && std::abs((double)std::log(f)) > 21.0 / double(p * p))
            throw std::logic_error("euler factor log bound violated");
        prod *= f;
    }
    EulerProduct out;
    out.cutoff = prime_cutoff;
    out.value = double(prod);
    // |log(true/partial)| <= sum_{p > P} 21/p^2 <= 21/P
    out.tail = out.value * std::expm1(21.0 / double(prime_cutoff));
    return out;
}

TauInfinity tau_infinity(double abs_tol) {
    TauInfinity out;
    out.value = integrate_slices(false, abs_tol, &out.error);
    return out;
}

double omega_inf_plus(double abs_tol) {
    return 12.0 * integrate_slices(true, abs_tol, nullptr);
}

double omega_inf_minus(double abs_tol) { return 12.0 * g_neg_part(abs_tol / 12.0); }

LeadingConstant leading_constant(double abs_tol, u64 prime_cutoff) {
    TauInfinity ti = tau_infinity(abs_tol);
    EulerProduct ep = tau_euler(prime_cutoff);
    LeadingConstant out;
    out.tau_inf = ti.value;
    out.tau_fin = ep.value;
    out.value = ti.value * ep.value / 28800.0;
    out.error = (ti.error * ep.value + ep.tail * ti.value + ti.error * ep.tail) / 28800.0;
    return out;
}

}  // namespace mnd5
