#pragma once
// The arithmetic function whose Dirichlet series carries the B^{5/6} main
// term, its local factors in closed and series form, and the zeta-product
// identities tying them to the p-adic densities.

#include <array>
#include <string>
#include <utility>
#include <vector>

#include "arith.hpp"

namespace mnd5 {

// weight of one outer tuple: phi-star products when the admissibility gates
// hold, zero otherwise
Rat theta(const std::array<u64, 4>& v, u64 y0, u64 y2);

struct DeltaEntry {
    u64 n = 0;
    Rat coef;          // Delta(n) = coef * n^{1/6}
    double value = 0;  // coef * n^{1/6} as a double
};

// Delta(n) for n up to a limit, summed over the monomial factorizations
// n = v0^4 v1^6 v2^5 v3^3 y0^4 y2^2 with weight theta / (v0 v1 v2 v3 y0 y2)
class DeltaTable {
  public:
    explicit DeltaTable(u64 limit);
    u64 limit() const { return limit_; }
    Rat coef(u64 n) const;
    double delta(u64 n) const;
    const std::vector<DeltaEntry>& entries() const { return entries_; }
    // sum_{n <= limit} delta(n) / n^s
    double partial_sum(double s) const;
    std::string csv() const;  // n, coefficient, value

  private:
    u64 limit_ = 0;
    std::vector<Rat> coefs_;
    std::vector<DeltaEntry> entries_;
};

// Euler-Maclaurin zeta, reliable for x >= 1.05
double zeta_em(double x);

struct EulerProductSpec {
    std::vector<std::pair<int, int>> numerator;  // factors zeta(a s + b)
    std::vector<std::pair<int, int>> denominator;
};
// zeta(6s-5) zeta(5s-4) zeta(4s-3)^2 zeta(3s-2) zeta(2s-1)
const EulerProductSpec& e1_spec();
// zeta(14s-11) zeta(13s-10)^3 over five lower-order zeta factors
const EulerProductSpec& e2_spec();

// local factor of the product at one prime; every argument must be positive
double euler_local(const EulerProductSpec& spec, u64 p, double s);

struct TailedProduct {
    double value = 0;
    double tail = 0;  // bound on |true - value|
    u64 cutoff = 0;
};
// product of local factors over p <= cutoff plus a tail bound; requires
// every zeta argument to exceed 1
TailedProduct euler_product_eval(const EulerProductSpec& spec, double s,
                                 u64 prime_cutoff);
// the same value assembled from zeta directly
double euler_product_zeta(const EulerProductSpec& spec, double s);

// closed form of the local factor F_p(s + 1/6) of the Delta series
double local_factor_closed(u64 p, double s);
// the same local factor summed as a six-variable geometric series with the
// admissibility gates, truncated at a weighted exponent cutoff
TailedProduct local_factor_bruteforce(u64 p, double s, int exponent_cutoff);

// local factor at s = 1 of the Delta series divided by both Euler products
double g12_local(u64 p);

}  // namespace mnd5
