#include "arith.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numeric>

namespace mnd5 {

// ---------------------------------------------------------------------------
// 128-bit helpers

u128 gcd_u128(u128 a, u128 b) {
    while (b) {
        u128 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

std::string to_string_u128(u128 v) {
    if (v == 0) return "0";
    std::string s;
    while (v) {
        s.push_back(char('0' + int(v % 10)));
        v /= 10;
    }
    std::reverse(s.begin(), s.end());
    return s;
}

std::string to_string_i128(i128 v) {
    if (v < 0) return "-" + to_string_u128(u128(-v));
    return to_string_u128(u128(v));
}

i128 mul_i128_checked(i128 a, i128 b) {
    i128 r;
    if (__builtin_mul_overflow(a, b, &r)) throw overflow_error("i128 multiply overflow");
    return r;
}

i128 add_i128_checked(i128 a, i128 b) {
    i128 r;
    if (__builtin_add_overflow(a, b, &r)) throw overflow_error("i128 add overflow");
    return r;
}

Rat::Rat(i128 n, i128 d) {
    if (d == 0) throw std::invalid_argument("Rat: zero denominator");
    if (d < 0) {
        n = -n;
        d = -d;
    }
    u128 g = gcd_u128(n < 0 ? u128(-n) : u128(n), u128(d));
    if (g > 1) {
        n /= i128(g);
        d /= i128(g);
    }
    num = n;
    den = d;
}

Rat Rat::operator+(const Rat& o) const {
    return Rat(add_i128_checked(mul_i128_checked(num, o.den), mul_i128_checked(o.num, den)),
               mul_i128_checked(den, o.den));
}
Rat Rat::operator-(const Rat& o) const {
    return Rat(add_i128_checked(mul_i128_checked(num, o.den), -mul_i128_checked(o.num, den)),
               mul_i128_checked(den, o.den));
}
Rat Rat::operator*(const Rat& o) const {
    return Rat(mul_i128_checked(num, o.num), mul_i128_checked(den, o.den));
}
Rat Rat::operator/(const Rat& o) const {
    if (o.num == 0) throw std::invalid_argument("Rat: divide by zero");
    return Rat(mul_i128_checked(num, o.den), mul_i128_checked(den, o.num));
}

double Rat::to_double() const {
    return double(static_cast<long double>(num) / static_cast<long double>(den));
}

std::string Rat::to_string() const {
    if (den == 1) return to_string_i128(num);
    return to_string_i128(num) + "/" + to_string_i128(den);
}

// ---------------------------------------------------------------------------
// Factorization

namespace {

using u32 = std::uint32_t;

constexpr u64 kSpfLimit = 1'000'000;

std::vector<u32> build_spf() {
    std::vector<u32> spf(kSpfLimit + 1, 0);
    for (u64 i = 2; i <= kSpfLimit; ++i) {
        if (spf[i] == 0) {
            for (u64 j = i; j <= kSpfLimit; j += i)
                if (spf[j] == 0) spf[j] = u32(i);
        }
    }
    return spf;
}

const std::vector<u32>& spf_table_impl() {
    static const std::vector<u32> table = build_spf();
    return table;
}

u64 pollard_rho(u64 n) {
    // Brent cycle detection; n odd composite, not a prime power of interest
    if (n % 2 == 0) return 2;
    u64 c = 1;
    while (true) {
        u64 x = 2, y = 2, d = 1;
        u64 ys = 0, q = 1;
        const u64 m = 128;
        u64 r = 1;
        auto f = [&](u64 v) { return (mul_mod(v, v, n) + c) % n; };
        while (d == 1) {
            x = y;
            for (u64 i = 0; i < r; ++i) y = f(y);
            u64 k = 0;
            while (k < r && d == 1) {
                ys = y;
                u64 lim = std::min(m, r - k);
                for (u64 i = 0; i < lim; ++i) {
                    y = f(y);
                    q = mul_mod(q, x > y ? x - y : y - x, n);
                }
                d = std::gcd(q, n);
                k += m;
            }
            r <<= 1;
        }
        if (d == n) {
            // backtrack
            d = 1;
            while (d == 1) {
                ys = f(ys);
                d = std::gcd(x > ys ? x - ys : ys - x, n);
            }
        }
        if (d != n) return d;
        ++c;
    }
}

void factor_rec(u64 n, std::vector<u64>& out) {
    if (n == 1) return;
    if (is_prime_u64(n)) {
        out.push_back(n);
        return;
    }
    u64 d = pollard_rho(n);
    factor_rec(d, out);
    factor_rec(n / d, out);
}

}  // namespace

bool is_prime_u64(u64 n) {
    if (n < 2) return false;
    for (u64 p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (n % p == 0) return n == p;
    }
    u64 d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    for (u64 a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        u64 x = pow_mod(a % n, d, n);
        if (x == 0 || x == 1 || x == n - 1) continue;
        bool witness = true;
        for (int i = 1; i < s; ++i) {
            x = mul_mod(x, x, n);
            if (x == n - 1) {
                witness = false;
                break;
            }
        }
        if (witness) return false;
    }
    return true;
}

Factorization factorize(u64 n) {
    Factorization f;
    f.value = n;
    if (n <= 1) return f;
    const auto& spf = spf_table_impl();
    std::vector<u64> primes;
    while (n > 1 && n <= kSpfLimit) {
        u64 p = spf[n];
        primes.push_back(p);
        n /= p;
    }
    if (n > 1) {
        // strip sieve-range primes first so the leftover has no factor <= 1e6
        for (u64 p : {2ull, 3ull, 5ull}) {
            while (n % p == 0) {
                primes.push_back(p);
                n /= p;
            }
        }
        u64 p = 7;
        static const int wheel[8] = {4, 2, 4, 2, 4, 6, 2, 6};
        int w = 0;
        while (p <= kSpfLimit && p * p <= n) {
            while (n % p == 0) {
                primes.push_back(p);
                n /= p;
            }
            p += wheel[w];
            w = (w + 1) & 7;
        }
        if (n > 1) {
            if (n <= kSpfLimit * kSpfLimit && is_prime_u64(n)) {
                primes.push_back(n);
            } else {
                factor_rec(n, primes);
            }
        }
    }
    std::sort(primes.begin(), primes.end());
    for (u64 p : primes) {
        if (!f.factors.empty() && f.factors.back().first == p)
            ++f.factors.back().second;
        else
            f.factors.push_back({p, 1});
    }
    return f;
}

int mu(u64 n) {
    if (n == 0) throw std::invalid_argument("mu(0)");
    Factorization f = factorize(n);
    for (auto& [p, e] : f.factors)
        if (e > 1) return 0;
    return (f.factors.size() % 2 == 0) ? 1 : -1;
}

int omega(u64 n) { return int(factorize(n).factors.size()); }

bool is_squarefree(u64 n) { return mu(n) != 0; }

u64 radical(u64 n) {
    u64 r = 1;
    for (auto& [p, e] : factorize(n).factors) r *= p;
    return r;
}

Rat phi_star(u64 n) {
    if (n == 0) throw std::invalid_argument("phi_star(0)");
    Rat r(1);
    for (auto& [p, e] : factorize(n).factors) r = r * Rat(i128(p) - 1, i128(p));
    return r;
}

Rat phi_dagger(u64 n) {
    if (n == 0) throw std::invalid_argument("phi_dagger(0)");
    Rat r(1);
    for (auto& [p, e] : factorize(n).factors) r = r * Rat(i128(p), i128(p) + 1);
    return r;
}

u64 euler_phi(u64 n) {
    u64 r = n;
    for (auto& [p, e] : factorize(n).factors) r -= r / p;
    return r;
}

std::vector<u64> squarefree_divisors(u64 n) {
    std::vector<u64> divs{1};
    for (auto& [p, e] : factorize(n).factors) {
        size_t m = divs.size();
        for (size_t i = 0; i < m; ++i) divs.push_back(divs[i] * p);
    }
    std::sort(divs.begin(), divs.end());
    return divs;
}

std::vector<u64> primes_up_to(u64 limit) {
    std::vector<u64> out;
    if (limit < 2) return out;
    std::vector<bool> comp(limit + 1, false);
    for (u64 i = 2; i <= limit; ++i) {
        if (!comp[i]) {
            out.push_back(i);
            for (u64 j = i * i; j <= limit; j += i) comp[j] = true;
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Modular arithmetic

u64 mul_mod(u64 a, u64 b, u64 m) { return u64((u128(a) * b) % m); }

u64 pow_mod(u64 a, u64 e, u64 m) {
    if (m == 1) return 0;
    u64 r = 1;
    a %= m;
    while (e) {
        if (e & 1) r = mul_mod(r, a, m);
        a = mul_mod(a, a, m);
        e >>= 1;
    }
    return r;
}

u64 inv_mod(u64 a, u64 m) {
    i64 t = 0, nt = 1;
    i64 r = i64(m), nr = i64(a % m);
    while (nr != 0) {
        i64 q = r / nr;
        std::swap(t -= q * nt, nt);
        std::swap(r -= q * nr, nr);
    }
    if (r != 1) throw std::invalid_argument("inv_mod: not invertible");
    if (t < 0) t += i64(m);
    return u64(t);
}

int jacobi(i64 a, u64 n) {
    if (n == 0 || n % 2 == 0) throw std::invalid_argument("jacobi: n must be odd positive");
    a %= i64(n);
    if (a < 0) a += i64(n);
    u64 ua = u64(a), un = n;
    int result = 1;
    while (ua != 0) {
        while (ua % 2 == 0) {
            ua /= 2;
            u64 r = un % 8;
            if (r == 3 || r == 5) result = -result;
        }
        std::swap(ua, un);
        if (ua % 4 == 3 && un % 4 == 3) result = -result;
        ua %= un;
    }
    return un == 1 ? result : 0;
}

namespace {

// Tonelli-Shanks: square root of a mod odd prime p; a must be a QR.
u64 sqrt_mod_prime(u64 a, u64 p) {
    a %= p;
    if (a == 0) return 0;
    if (p == 2) return a;
    if (p % 4 == 3) return pow_mod(a, (p + 1) / 4, p);
    // write p-1 = q 2^s
    u64 q = p - 1;
    int s = 0;
    while ((q & 1) == 0) {
        q >>= 1;
        ++s;
    }
    // find a non-residue
    u64 z = 2;
    while (jacobi(i64(z), p) != -1) ++z;
    u64 m = u64(s);
    u64 c = pow_mod(z, q, p);
    u64 t = pow_mod(a, q, p);
    u64 r = pow_mod(a, (q + 1) / 2, p);
    while (t != 1) {
        u64 t2 = t;
        u64 i = 0;
        while (t2 != 1) {
            t2 = mul_mod(t2, t2, p);
            ++i;
        }
        u64 b = c;
        for (u64 j = 0; j + i + 1 < m; ++j) b = mul_mod(b, b, p);
        m = i;
        c = mul_mod(b, b, p);
        t = mul_mod(t, c, p);
        r = mul_mod(r, b, p);
    }
    return r;
}

u64 pow_u64(u64 b, int e) {
    u64 r = 1;
    while (e-- > 0) r *= b;
    return r;
}

// roots of x^2 = a (mod p^e), values in [0, p^e)
std::vector<u64> roots_prime_power(u64 p, int e, u64 a) {
    u64 pe = pow_u64(p, e);
    a %= pe;
    std::vector<u64> roots;
    if (a == 0) {
        // x = m p^{ceil(e/2)}
        u64 step = pow_u64(p, (e + 1) / 2);
        for (u64 x = 0; x < pe; x += step) roots.push_back(x);
        return roots;
    }
    int j = 0;
    u64 ap = a;
    while (ap % p == 0) {
        ap /= p;
        ++j;
    }
    if (j % 2 == 1) return roots;
    int e2 = e - j;  // solve y^2 = ap (mod p^{e2}), ap a unit
    std::vector<u64> base;
    if (p == 2) {
        if (e2 == 1) {
            base = {1};
        } else if (e2 == 2) {
            if (ap % 4 != 1) return roots;
            base = {1, 3};
        } else {
            if (ap % 8 != 1) return roots;
            u64 r = 1;
            for (int t = 3; t < e2; ++t) {
                u64 mod_next = pow_u64(2, t + 1);
                if ((mul_mod(r, r, mod_next) != ap % mod_next)) r += pow_u64(2, t - 1);
            }
            u64 m2 = pow_u64(2, e2);
            u64 half = pow_u64(2, e2 - 1);
            base = {r, m2 - r, (r + half) % m2, (m2 - r + half) % m2};
            std::sort(base.begin(), base.end());
        }
    } else {
        if (jacobi(i64(ap % p), p) != 1) return roots;
        u64 r = sqrt_mod_prime(ap % p, p);
        // Hensel: lift to p^{e2}
        u64 mod_cur = p;
        for (int t = 1; t < e2; ++t) {
            u64 mod_next = mod_cur * p;
            u64 fx = u64((u128(r) * r + (mod_next - ap % mod_next)) % mod_next);
            u64 corr = mul_mod(fx / mod_cur % p, inv_mod(2 * r % p, p), p);
            r = (r + mod_next - mul_mod(corr, mod_cur % mod_next, mod_next)) % mod_next;
            mod_cur = mod_next;
        }
        u64 m2 = pow_u64(p, e2);
        base = {r % m2, (m2 - r) % m2};
        if (base[0] == base[1]) base.pop_back();
        std::sort(base.begin(), base.end());
    }
    // x = p^{j/2} (y + t p^{e2}), t in [0, p^{j/2})
    u64 scale = pow_u64(p, j / 2);
    u64 lift_mod = pow_u64(p, e2);
    for (u64 y : base)
        for (u64 t = 0; t < scale; ++t) {
            u64 x = scale * (y + t * lift_mod);
            roots.push_back(x % pe);
        }
    std::sort(roots.begin(), roots.end());
    return roots;
}

// count of roots of x^2 = a (mod p^e) without listing
u64 count_roots_prime_power(u64 p, int e, u64 a) {
    u64 pe = pow_u64(p, e);
    a %= pe;
    if (a == 0) return pow_u64(p, e / 2);
    int j = 0;
    u64 ap = a;
    while (ap % p == 0) {
        ap /= p;
        ++j;
    }
    if (j % 2 == 1) return 0;
    int e2 = e - j;
    u64 scale = pow_u64(p, j / 2);
    if (p == 2) {
        if (e2 == 1) return scale;
        if (e2 == 2) return ap % 4 == 1 ? 2 * scale : 0;
        return ap % 8 == 1 ? 4 * scale : 0;
    }
    return jacobi(i64(ap % p), p) == 1 ? 2 * scale : 0;
}

}  // namespace

u64 eta(i64 a, u64 q) {
    if (q == 0) throw std::invalid_argument("eta: q = 0");
    if (q == 1) return 1;
    u64 am = u64(((a % i64(q)) + i64(q)) % i64(q));
    u64 total = 1;
    for (auto& [p, e] : factorize(q).factors) {
        u64 pe = pow_u64(p, e);
        total *= count_roots_prime_power(p, e, am % pe);
        if (total == 0) return 0;
    }
    return total;
}

std::vector<u64> sqrt_roots_mod(i64 a, u64 q, bool require_coprime) {
    return sqrt_roots_mod(a, q, require_coprime, factorize(q));
}

std::vector<u64> sqrt_roots_mod(i64 a, u64 q, bool require_coprime,
                                const Factorization& q_fact) {
    if (q == 0) throw std::invalid_argument("sqrt_roots_mod: q = 0");
    u64 am = u64(((a % i64(q)) + i64(q)) % i64(q));
    std::vector<u64> roots{0};  // residues mod 1
    u64 mod_so_far = 1;
    for (auto& [p, e] : q_fact.factors) {
        u64 pe = pow_u64(p, e);
        auto local = roots_prime_power(p, e, am % pe);
        if (local.empty()) return {};
        std::vector<u64> next;
        next.reserve(roots.size() * local.size());
        u64 mod_next = mod_so_far * pe;
        // CRT: x = r (mod mod_so_far), x = l (mod pe)
        u64 inv = inv_mod(mod_so_far % pe, pe);
        for (u64 r : roots)
            for (u64 l : local) {
                u64 diff = (l + pe - r % pe) % pe;
                u64 x = r + mod_so_far * mul_mod(diff, inv, pe);
                next.push_back(x);
            }
        roots = std::move(next);
        mod_so_far = mod_next;
    }
    std::vector<u64> out;
    out.reserve(roots.size());
    for (u64 r : roots) {
        if (require_coprime && std::gcd(r, q) != 1) continue;
        out.push_back(r == 0 ? q : r);  // representatives in [1, q]
    }
    std::sort(out.begin(), out.end());
    return out;
}

// ---------------------------------------------------------------------------
// Sawtooth machinery

double psi(double t) { return t - std::floor(t) - 0.5; }

Rat psi_rat(const Rat& t) {
    // floor(num/den) with den > 0
    i128 fl = t.num / t.den;
    if (t.num % t.den != 0 && t.num < 0) fl -= 1;
    return t - Rat(fl, 1) - Rat(1, 2);
}

IntervalCount interval_count_residue(double t1, double t2, i64 a, u64 q) {
    if (q == 0) throw std::invalid_argument("interval_count_residue: q = 0");
    IntervalCount r;
    double qa = double(q);
    r.count = i64(std::floor((t2 - double(a)) / qa)) - i64(std::floor((t1 - double(a)) / qa));
    r.r_term = psi((t1 - double(a)) / qa) - psi((t2 - double(a)) / qa);
    return r;
}

std::pair<i64, Rat> interval_count_residue_exact(const Rat& t1, const Rat& t2,
                                                 i64 a, u64 q) {
    if (q == 0) throw std::invalid_argument("interval_count_residue_exact: q = 0");
    auto floor_rat = [](const Rat& x) -> i128 {
        i128 fl = x.num / x.den;
        if (x.num % x.den != 0 && x.num < 0) fl -= 1;
        return fl;
    };
    Rat rq(i128(q), 1);
    Rat u1 = (t1 - Rat(a)) / rq;
    Rat u2 = (t2 - Rat(a)) / rq;
    i64 count = i64(floor_rat(u2) - floor_rat(u1));
    Rat r = psi_rat(u1) - psi_rat(u2);
    // the identity count = (t2-t1)/q + r holds exactly
    Rat lhs(count);
    Rat rhs = (t2 - t1) / rq + r;
    if (!(lhs == rhs)) throw std::logic_error("interval_count_residue_exact: identity violated");
    return {count, r};
}

double psi_quadratic_sum(double t, i64 b, u64 q, bool coprime_only) {
    if (q == 0) throw std::invalid_argument("psi_quadratic_sum: q = 0");
    double s = 0.0;
    i64 bq = ((b % i64(q)) + i64(q)) % i64(q);
    for (u64 x = 0; x < q; ++x) {
        if (coprime_only && std::gcd(x, q) != 1) continue;
        u64 bx2 = mul_mod(u64(bq), mul_mod(x, x, q), q);
        s += psi((t - double(bx2)) / double(q));
    }
    return s;
}

}  // namespace mnd5
