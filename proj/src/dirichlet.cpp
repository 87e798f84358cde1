#include "dirichlet.hpp"

#include <cmath>
#include <cstdio>
#include <numeric>
#include <stdexcept>

namespace mnd5 {

Rat theta(const std::array<u64, 4>& v, u64 y0, u64 y2) {
    const u64 v0 = v[0], v1 = v[1], v2 = v[2], v3 = v[3];
    if (!is_squarefree(v0 * v2 * v3)) return Rat(0);
    if (std::gcd(v2 * v3 * y0, y2) != 1) return Rat(0);
    if (std::gcd(v0 * v3, y0) != 1) return Rat(0);
    return phi_star(v0 * v1 * v2 * y2) * phi_star(v0 * v1 * v2 * v3 * y0) /
           phi_star(std::gcd(v1, v3));
}

DeltaTable::DeltaTable(u64 limit) : limit_(limit), coefs_(limit + 1) {
    if (limit < 1) throw std::invalid_argument("DeltaTable needs limit >= 1");
    for (u64 v0 = 1;; ++v0) {
        u64 c0 = v0 * v0 * v0 * v0;
        if (c0 > limit) break;
        for (u64 v1 = 1;; ++v1) {
            u64 p6 = v1 * v1 * v1;
            p6 *= p6;
            u64 c1 = c0 * p6;
            if (c1 > limit) break;
            for (u64 v2 = 1;; ++v2) {
                u64 c2 = c1 * v2 * v2 * v2 * v2 * v2;
                if (c2 > limit) break;
                for (u64 v3 = 1;; ++v3) {
                    u64 c3 = c2 * v3 * v3 * v3;
                    if (c3 > limit) break;
                    for (u64 y0 = 1;; ++y0) {
                        u64 c4 = c3 * y0 * y0 * y0 * y0;
                        if (c4 > limit) break;
                        for (u64 y2 = 1;; ++y2) {
                            u64 n = c4 * y2 * y2;
                            if (n > limit) break;
                            Rat th = theta({v0, v1, v2, v3}, y0, y2);
                            if (!(th == Rat(0)))
                                coefs_[n] = coefs_[n] +
                                            th / Rat(i64(v0 * v1 * v2 * v3 * y0 * y2));
                        }
                    }
                }
            }
        }
    }
    for (u64 n = 1; n <= limit; ++n)
        if (!(coefs_[n] == Rat(0))) {
            DeltaEntry e;
            e.n = n;
            e.coef = coefs_[n];
            e.value = coefs_[n].to_double() * std::pow(double(n), 1.0 / 6.0);
            entries_.push_back(e);
        }
}

Rat DeltaTable::coef(u64 n) const {
    if (n < 1 || n > limit_) throw std::invalid_argument("n outside the table");
    return coefs_[n];
}

double DeltaTable::delta(u64 n) const {
    return coef(n).to_double() * std::pow(double(n), 1.0 / 6.0);
}

double DeltaTable::partial_sum(double s) const {
    double total = 0.0;
    for (const auto& e : entries_) total += e.value * std::pow(double(e.n), -s);
    return total;
}

std::string DeltaTable::csv() const {
    std::string out = "n,coefficient,value\n";
    char buf[64];
    for (const auto& e : entries_) {
        out += std::to_string(e.n);
        out += ',';
        out += e.coef.to_string();
        std::snprintf(buf, sizeof buf, ",%.17g\n", e.value);
        out += buf;
    }
    return out;
}

double zeta_em(double x) {
    if (x < 1.05) throw std::invalid_argument("zeta argument below 1.05");
    static const double bern[10] = {1.0 / 6,      -1.0 / 30,     1.0 / 42,
                                    -1.0 / 30,    5.0 / 66,      -691.0 / 2730,
                                    7.0 / 6,      -3617.0 / 510, 43867.0 / 798,
                                    -174611.0 / 330};
    const double N = 64.0;
    double s = 0.0;
    for (int k = 1; k < 64; ++k) s += std::pow(double(k), -x);
    s += 0.5 * std::pow(N, -x) + std::pow(N, 1.0 - x) / (x - 1.0);
    double rise = x;                     // x (x+1) ... (x+2j-2)
    double fact = 2.0;                   // (2j)!
    double npow = std::pow(N, -x - 1.0);  // N^{-x-2j+1}
    for (int j = 1; j <= 10; ++j) {
        s += bern[j - 1] / fact * rise * npow;
        rise *= (x + 2 * j - 1) * (x + 2 * j);
        fact *= (2 * j + 1) * (2 * j + 2);
        npow /= N * N;
    }
    return s;
}

const EulerProductSpec& e1_spec() {
    static const EulerProductSpec spec{
        {{6, -5}, {5, -4}, {4, -3}, {4, -3}, {3, -2}, {2, -1}}, {}};
    return spec;
}

const EulerProductSpec& e2_spec() {
    static const EulerProductSpec spec{
        {{14, -11}, {13, -10}, {13, -10}, {13, -10}},
        {{10, -8}, {9, -7}, {8, -6}, {8, -6}, {8, -6}, {7, -5}, {7, -5}, {7, -5}, {19, -15}}};
    return spec;
}

double euler_local(const EulerProductSpec& spec, u64 p, double s) {
    double out = 1.0;
    for (auto [a, b] : spec.numerator) {
        double arg = a * s + b;
        if (!(arg > 0.0)) throw std::invalid_argument("nonpositive zeta argument");
        out /= 1.0 - std::pow(double(p), -arg);
    }
    for (auto [a, b] : spec.denominator) {
        double arg = a * s + b;
        if (!(arg > 0.0)) throw std::invalid_argument("nonpositive zeta argument");
        out *= 1.0 - std::pow(double(p), -arg);
    }
    return out;
}

TailedProduct euler_product_eval(const EulerProductSpec& spec, double s,
                                 u64 prime_cutoff) {
    double min_arg = 1e300;
    auto scan = [&](const std::vector<std::pair<int, int>>& part) {
        for (auto [a, b] : part) min_arg = std::min(min_arg, a * s + b);
    };
    scan(spec.numerator);
    scan(spec.denominator);
    if (!(min_arg > 1.0)) throw std::domain_error("zeta argument at or below 1");
    if (prime_cutoff < 2) throw std::invalid_argument("cutoff too small");

    long double value = 1.0L;
    for (u64 p : primes_up_to(prime_cutoff)) value *= euler_local(spec, p, s);

    // -log(1 - x) <= 2x for x <= 1/2, and sum_{n > P} n^{-a} has an
    // integral majorant; every factor contributes independently
    double P = double(prime_cutoff);
    double log_tail = 0.0;
    auto add_tail = [&](const std::vector<std::pair<int, int>>& part) {
        for (auto [a, b] : part) {
            double arg = a * s + b;
            log_tail += 2.0 * (std::pow(P, 1.0 - arg) / (arg - 1.0) + std::pow(P, -arg));
        }
    };
    add_tail(spec.numerator);
    add_tail(spec.denominator);

    TailedProduct out;
    out.value = double(value);
    out.tail = out.value * std::expm1(log_tail);
    out.cutoff = prime_cutoff;
    return out;
}

double euler_product_zeta(const EulerProductSpec& spec, double s) {
    double out = 1.0;
    for (auto [a, b] : spec.numerator) out *= zeta_em(a * s + b);
    for (auto [a, b] : spec.denominator) out /= zeta_em(a * s + b);
    return out;
}

double local_factor_closed(u64 p, double s) {
    if (!(s >= 0.0)) throw std::invalid_argument("local factor needs s >= 0");
    // negative powers keep every term finite for large s
    double q2 = std::pow(double(p), -(2.0 * s + 1.0));
    double q4 = std::pow(double(p), -(4.0 * s + 1.0));
    double q6 = std::pow(double(p), -(6.0 * s + 1.0));
    double q3 = std::pow(double(p), -(3.0 * s + 1.0));
    double q5 = std::pow(double(p), -(5.0 * s + 1.0));
    double m = 1.0 - 1.0 / double(p);
    double t2 = m * q2 / (1.0 - q2);
    double t3 = m * q4 / (1.0 - q4);
    double t4 = m * m * q6 / (1.0 - q6) * (1.0 / (1.0 - q2) + q4 / (1.0 - q4));
    double t5 = m * m * q4 / ((1.0 - q2) * (1.0 - q6));
    double t6 = m * m * q5 / ((1.0 - q4) * (1.0 - q6));
    double t7 = m * q3 / (1.0 - q6);
    return 1.0 + t2 + t3 + t4 + t5 + t6 + t7;
}

TailedProduct local_factor_bruteforce(u64 p, double s, int exponent_cutoff) {
    if (!(s > 0.0)) throw std::invalid_argument("bruteforce needs s > 0");
    if (exponent_cutoff < 10) throw std::invalid_argument("cutoff below 10");
    const double pd = double(p);
    const double m = 1.0 - 1.0 / pd;
    // v0 v2 v3 squarefree: at most one of the three carries the prime
    static const int sqf[4][3] = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
    long double total = 0.0L;
    for (const int* q : sqf) {
        int a0 = q[0], a2 = q[1], a3 = q[2];
        int base = 4 * a0 + 5 * a2 + 3 * a3;
        if (base > exponent_cutoff) continue;
        for (int a1 = 0; base + 6 * a1 <= exponent_cutoff; ++a1)
            for (int b0 = 0; base + 6 * a1 + 4 * b0 <= exponent_cutoff; ++b0) {
                if ((a0 + a3) > 0 && b0 > 0) continue;
                for (int b2 = 0; base + 6 * a1 + 4 * b0 + 2 * b2 <= exponent_cutoff;
                     ++b2) {
                    if ((a2 + a3 + b0) > 0 && b2 > 0) continue;
                    double f = 1.0;
                    if (a0 + a1 + a2 + b2 > 0) f *= m;
                    if (a0 + a1 + a2 + a3 + b0 > 0) f *= m;
                    if (a1 > 0 && a3 > 0) f /= m;
                    double expo = (4 * s + 1) * a0 + (6 * s + 1) * a1 +
                                  (5 * s + 1) * a2 + (3 * s + 1) * a3 +
                                  (4 * s + 1) * b0 + (2 * s + 1) * b2;
                    total += f * std::pow(pd, -expo);
                }
            }
    }
    // every term at weighted exponent W is at most 2 p^{-(s+1/6)W}, and
    // there are at most (W+1)^5 of them
    double tail = 0.0;
    double rate = s + 1.0 / 6.0;
    for (int w = exponent_cutoff + 1;; ++w) {
        double t = 2.0 * std::pow(double(w) + 1.0, 5.0) * std::pow(pd, -rate * w);
        tail += t;
        if (t < 1e-22 * (tail + 1.0)) break;
        if (w > exponent_cutoff + 4000) break;
    }
    TailedProduct out;
    out.value = double(total);
    out.tail = tail;
    out.cutoff = u64(exponent_cutoff);
    return out;
}

double g12_local(u64 p) {
    return local_factor_closed(p, 0.0) /
           (euler_local(e1_spec(), p, 1.0) * euler_local(e2_spec(), p, 1.0));
}

}  // namespace mnd5
