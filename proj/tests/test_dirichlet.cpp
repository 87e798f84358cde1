#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "dirichlet.hpp"
#include "doctest.h"

using namespace mnd5;

TEST_CASE("tuple weights") {
    CHECK(theta({1, 1, 1, 1}, 1, 1) == Rat(1));
    CHECK(theta({1, 1, 1, 1}, 1, 2) == Rat(1, 2));
    CHECK(theta({2, 1, 2, 1}, 1, 1) == Rat(0));   // v0 v2 v3 not squarefree
    CHECK(theta({1, 1, 2, 1}, 1, 2) == Rat(0));   // y2 shares a prime with v2
    CHECK(theta({1, 1, 1, 2}, 2, 1) == Rat(0));   // y0 shares a prime with v3
    CHECK(theta({1, 2, 1, 2}, 1, 1) == Rat(1, 2));  // gcd(v1,v3) division
}

TEST_CASE("delta table values") {
    DeltaTable dt(10000);
    CHECK(dt.coef(1) == Rat(1));
    for (u64 p : {2ull, 3ull, 5ull, 7ull, 11ull, 97ull, 9973ull})
        CHECK(dt.coef(p) == Rat(0));
    CHECK(dt.coef(4) == Rat(1, 4));
    CHECK(dt.delta(4) == doctest::Approx(0.31498026247371829).epsilon(1e-15));
    // 2^6: tuples v1=2, y2=8, (v0,y2)=(2,2); the y0=2 tuple is gated away
    CHECK(dt.coef(64) == Rat(1, 4));
    CHECK(dt.delta(64) == doctest::Approx(0.5).epsilon(1e-15));
    // 3^6 by the same pattern with p = 3
    CHECK(dt.coef(729) == Rat(2, 9));
    // the coefficient is multiplicative
    CHECK(dt.coef(2916) == dt.coef(4) * dt.coef(729));
    for (const auto& e : dt.entries()) {
        CHECK(e.value >= 0.0);
        CHECK(e.coef.to_double() > 0.0);
    }
    CHECK(dt.csv().rfind("n,coefficient,value\n", 0) == 0);
    CHECK(dt.csv().find("\n4,1/4,0.31498026247371") != std::string::npos);
}

TEST_CASE("euler maclaurin zeta") {
    CHECK(zeta_em(2.0) == doctest::Approx(M_PI * M_PI / 6.0).epsilon(1e-13));
    CHECK(zeta_em(4.0) ==
          doctest::Approx(M_PI * M_PI * M_PI * M_PI / 90.0).epsilon(1e-13));
    CHECK(zeta_em(1.05) == doctest::Approx(20.580844302037003).epsilon(1e-12));
    CHECK(zeta_em(1.5) == doctest::Approx(2.6123753486854883).epsilon(1e-13));
    CHECK_THROWS_AS(zeta_em(1.01), std::invalid_argument);
}

TEST_CASE("euler products") {
    for (u64 p : {2ull, 3ull, 5ull, 97ull}) {
        double m = 1.0 - 1.0 / double(p);
        CHECK(euler_local(e1_spec(), p, 1.0) ==
              doctest::Approx(1.0 / std::pow(m, 6.0)).epsilon(1e-12));
    }
    // E2 at s=1 reduces to zeta(3)^4 / (zeta(2)^8 zeta(4))
    double e2_direct = euler_product_zeta(e2_spec(), 1.0);
    CHECK(e2_direct == doctest::Approx(0.035987789044717926).epsilon(1e-12));
    TailedProduct e2 = euler_product_eval(e2_spec(), 1.0, 10000);
    CHECK(e2.value > 0.0);
    CHECK(std::abs(e2.value - e2_direct) <= e2.tail);
    TailedProduct e1 = euler_product_eval(e1_spec(), 1.2, 10000);
    CHECK(std::abs(e1.value - euler_product_zeta(e1_spec(), 1.2)) <= e1.tail);
    CHECK_THROWS_AS(euler_product_eval(e1_spec(), 1.0, 100), std::domain_error);
}

TEST_CASE("closed local factor at s equals zero") {
    for (u64 p : primes_up_to(100)) {
        double target = 1.0 + 6.0 / double(p) + 1.0 / double(p * p);
        CHECK(std::abs(local_factor_closed(p, 0.0) - target) < 1e-12);
    }
    CHECK(local_factor_closed(2, 0.0) == doctest::Approx(4.25).epsilon(1e-14));
    CHECK(local_factor_closed(2, 50.0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(local_factor_closed(104729, 0.0) ==
          doctest::Approx(1.0 + 6.0 / 104729.0 + 1.0 / (104729.0 * 104729.0))
              .epsilon(1e-14));
}

TEST_CASE("series local factor against the closed form") {
    struct Probe {
        u64 p;
        double s;
        int cutoff;
    };
    for (Probe pr : {Probe{2, 0.25, 200}, Probe{3, 0.5, 120}, Probe{5, 0.1, 160},
                     Probe{7, 0.1, 120}}) {
        TailedProduct bf = local_factor_bruteforce(pr.p, pr.s, pr.cutoff);
        double closed = local_factor_closed(pr.p, pr.s);
        CHECK(bf.tail < 1e-10);
        CHECK(std::abs(bf.value - closed) <= bf.tail + 1e-12);
    }
    // at a short cutoff the tail bound dominates the actual discrepancy
    TailedProduct coarse = local_factor_bruteforce(2, 0.25, 10);
    CHECK(std::abs(coarse.value - local_factor_closed(2, 0.25)) <= coarse.tail);
    CHECK(coarse.tail > 1e-3);
    TailedProduct finer = local_factor_bruteforce(2, 0.25, 60);
    CHECK(finer.tail < coarse.tail);
}

TEST_CASE("local quotient identity and decay") {
    for (u64 p : primes_up_to(100)) {
        double m = 1.0 - 1.0 / double(p);
        double target = std::pow(m, 6.0) * (1.0 + 6.0 / double(p) + 1.0 / double(p * p));
        CHECK(std::abs(euler_local(e2_spec(), p, 1.0) * g12_local(p) - target) <
              1e-10);
    }
    double worst = 0.0;
    for (u64 p : primes_up_to(10000))
        worst = std::max(worst, std::abs(g12_local(p) - 1.0) * double(p));
    CHECK(worst <= 2.0);
    CHECK(g12_local(2) > 0.0);
}

TEST_CASE("partial sums approach the local factor product") {
    // majorant for the cut tail: theta <= d(v1), and each tuple term at
    // height m > N is at most N^{-1/4} d(v1) / (linear part * m^{1/4})
    double c0 = zeta_em(2.0) * zeta_em(2.0) * zeta_em(2.5) * zeta_em(2.5) *
                zeta_em(2.25) * zeta_em(1.75) * zeta_em(1.5);
    long double prod = 1.0L;
    for (u64 p : primes_up_to(300)) prod *= local_factor_closed(p, 0.5);
    double prod_tail = double(prod) * std::expm1(4.0 / 300.0);

    double prev = 0.0;
    for (u64 n : {1000ull, 10000ull, 100000ull}) {
        DeltaTable dt(n);
        double partial = dt.partial_sum(2.0 / 3.0);
        CHECK(partial > prev);
        double bound = c0 * std::pow(double(n), -0.25) + prod_tail;
        CHECK(std::abs(partial - double(prod)) <= bound);
        prev = partial;
    }
}
