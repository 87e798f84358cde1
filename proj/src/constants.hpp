#pragma once
// Ingredients of the leading constant: the exact weighted-simplex volume
// alpha, the intersection-form checks on the minimal desingularization, the
// p-adic densities omega_p, the archimedean density, and their product.

#include <array>
#include <string>
#include <vector>

#include "arith.hpp"
#include "asymptotics.hpp"

namespace mnd5 {

// volume of {t in R_{>=0}^5 : 6 t1 + 5 t2 + 3 t3 + 4 t4 + 2 t5 <= 1}
Rat simplex_volume_exact();
// the quarter of it entering the leading constant
Rat alpha_exact();
// Monte Carlo estimate of the same volume: sample the two heaviest
// coordinates, integrate the remaining 3-simplex fiber in closed form
McEstimate mc_simplex_volume(u64 samples, u64 seed);

struct LatticeReport {
    std::array<std::array<int, 6>, 6> gram{};
    std::array<int, 6> canonical_coefs{};
    std::array<int, 6> degrees{};  // -K . E_i
    int canonical_self_intersection = 0;
    bool symmetric = false;
    bool adjunction_ok = false;
    bool pass = false;
};
// checks the exceptional-curve intersection matrix against adjunction and
// the anticanonical self-intersection
LatticeReport verify_lattice();

struct LocalDensityPoint {
    u64 p = 0;
    int r = 0;
    u128 raw = 0;       // solutions of both quadrics mod p^r
    double scaled = 0;  // raw / p^{3r}
};
// solution count mod p^r via the fibration over the first quadric; needs
// p^{3r} within 64-bit comfort
LocalDensityPoint local_density(u64 p, int r);
// exhaustive 5-tuple scan, p^{5r} <= ~2e9
u128 local_density_naive(u64 p, int r);
// limit value (1 - 1/p)^{-?} free form: 1 + 6/p + 1/p^2
double omega_p_closed(u64 p);
// scaled densities for r = 1..r_max
std::vector<LocalDensityPoint> local_density_sequence(u64 p, int r_max);

struct LocalDensityCases {
    u64 p = 0;
    int r = 0;
    u128 n1 = 0;         // strata with k0 + k1 < r, k0 <= 3 k1
    u128 n2 = 0;         // strata with k0 + k1 < r, k0 > 3 k1
    u128 n3 = 0;         // boundary strata k0 + k1 >= r
    u128 n1_closed = 0;  // exact per-stratum sum for the n1 range
    u128 n2_closed = 0;  // exact per-stratum sum for the n2 range
};
// splits local_density by the valuations (k0, k1) = (v_p(x0), v_p(x1)) and
// evaluates the closed per-stratum counts for the two interior cases; the
// slow decay of n3 is what limits how fast scaled densities converge
LocalDensityCases local_density_cases(u64 p, int r);

struct EulerProduct {
    double value = 0;
    double tail = 0;  // bound on |true - value| from primes beyond cutoff
    u64 cutoff = 0;
};
// prod_p (1-1/p)^6 (1 + 6/p + 1/p^2) with a proven tail bound
EulerProduct tau_euler(u64 prime_cutoff);

struct TauInfinity {
    double value = 0;
    double error = 0;
};
// base-area integral of the fiber width, int_0^1 int_{-1}^{1/v} f du dv
TauInfinity tau_infinity(double abs_tol);
// the two signed parts of the full archimedean density, 12 * tau_infinity
double omega_inf_plus(double abs_tol);
double omega_inf_minus(double abs_tol);

struct LeadingConstant {
    double value = 0;
    double error = 0;
    double tau_inf = 0;
    double tau_fin = 0;
};
// alpha * omega_inf * tau / (normalizing factorial powers); the closed
// combination tau_infinity * tau_euler / 28800
LeadingConstant leading_constant(double abs_tol, u64 prime_cutoff);

}  // namespace mnd5
