#pragma once
// Exact number-theoretic primitives shared by every counting module:
// factorization, multiplicative functions, quadratic congruences modulo
// prime powers (CRT + Hensel), and the sawtooth helpers.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace mnd5 {

using u64 = std::uint64_t;
using i64 = std::int64_t;
using u128 = unsigned __int128;
using i128 = __int128;

struct overflow_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct quadrature_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// 128-bit helpers

u128 gcd_u128(u128 a, u128 b);
std::string to_string_u128(u128 v);
std::string to_string_i128(i128 v);

// checked multiply/add on signed 128-bit; throws overflow_error
i128 mul_i128_checked(i128 a, i128 b);
i128 add_i128_checked(i128 a, i128 b);

// Exact rational on 128-bit integers.  Always normalized: den > 0, gcd = 1.
struct Rat {
    i128 num = 0;
    i128 den = 1;

    Rat() = default;
    Rat(i64 n) : num(n), den(1) {}
    Rat(i128 n, i128 d);

    Rat operator+(const Rat& o) const;
    Rat operator-(const Rat& o) const;
    Rat operator*(const Rat& o) const;
    Rat operator/(const Rat& o) const;
    bool operator==(const Rat& o) const { return num == o.num && den == o.den; }
    bool operator!=(const Rat& o) const { return !(*this == o); }

    double to_double() const;
    std::string to_string() const;  // "num/den", or "num" when den == 1
};

// ---------------------------------------------------------------------------
// Factorization

struct Factorization {
    u64 value = 1;
    std::vector<std::pair<u64, int>> factors;  // (prime, exponent), primes increasing
};

// Trial division through a smallest-prime-factor sieve, then deterministic
// Miller-Rabin plus Pollard rho for the 64-bit leftovers.
Factorization factorize(u64 n);
bool is_prime_u64(u64 n);

int mu(u64 n);
int omega(u64 n);
bool is_squarefree(u64 n);
u64 radical(u64 n);
Rat phi_star(u64 n);    // phi(n)/n
Rat phi_dagger(u64 n);  // prod over p|n of (1+1/p)^{-1}
u64 euler_phi(u64 n);

// all squarefree divisors of n (the support of the Moebius sums)
std::vector<u64> squarefree_divisors(u64 n);

// primes up to limit, by sieve
std::vector<u64> primes_up_to(u64 limit);

// ---------------------------------------------------------------------------
// Modular arithmetic

u64 mul_mod(u64 a, u64 b, u64 m);
u64 pow_mod(u64 a, u64 e, u64 m);
u64 inv_mod(u64 a, u64 m);  // requires gcd(a,m)=1; throws otherwise

// Jacobi symbol (a/n), n odd positive.
int jacobi(i64 a, u64 n);

// Number of n in [1,q] with n^2 = a (mod q).  CRT over prime powers with the
// usual lifting count formulas; never the O(q) scan.
u64 eta(i64 a, u64 q);

// All rho in [1,q] with rho^2 = a (mod q), sorted; filtered to gcd(rho,q)=1
// when require_coprime is set.
std::vector<u64> sqrt_roots_mod(i64 a, u64 q, bool require_coprime);
std::vector<u64> sqrt_roots_mod(i64 a, u64 q, bool require_coprime,
                                const Factorization& q_fact);

// ---------------------------------------------------------------------------
// Sawtooth machinery

// psi(t) = {t} - 1/2
double psi(double t);
Rat psi_rat(const Rat& t);

struct IntervalCount {
    i64 count = 0;
    double r_term = 0.0;
};

// #{t1 < n <= t2 : n = a (mod q)} together with the sawtooth remainder
// r = psi((t1-a)/q) - psi((t2-a)/q); count = (t2-t1)/q + r.
IntervalCount interval_count_residue(double t1, double t2, i64 a, u64 q);

// exact-rational variant: returns (count, r) with the identity checked exactly
std::pair<i64, Rat> interval_count_residue_exact(const Rat& t1, const Rat& t2,
                                                 i64 a, u64 q);

// sum of psi((t - b x^2)/q) over 0 <= x < q, optionally restricted to
// gcd(x,q) = 1; direct evaluation (diagnostic for the averaged-squares bound)
double psi_quadratic_sum(double t, i64 b, u64 q, bool coprime_only);

}  // namespace mnd5
