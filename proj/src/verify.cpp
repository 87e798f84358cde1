#include "verify.hpp"

#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "asymptotics.hpp"
#include "constants.hpp"
#include "dirichlet.hpp"
#include "surface.hpp"
#include "torsor.hpp"

namespace mnd5 {

void SuiteResult::add(CheckResult c) {
    pass = pass && c.pass;
    checks.push_back(std::move(c));
}

namespace {

std::string fmt(const char* f, double a, double b) {
    char buf[128];
    std::snprintf(buf, sizeof buf, f, a, b);
    return buf;
}

}  // namespace

SuiteResult verify_lemma_base(u64 B, int threads) {
    SuiteResult s{"lemma-base"};

    u64 td = count_direct(B, threads).count;
    u64 tt = count_torsor(B, threads).count;
    CheckResult bij;
    bij.name = "torsor_equals_direct";
    bij.value = double(tt > td ? tt - td : td - tt);
    bij.bound = 0;
    bij.pass = tt == td;
    bij.note = "B=" + std::to_string(B) + " torsor=" + std::to_string(tt) +
               " direct=" + std::to_string(td);
    s.add(bij);

    u64 sweep = std::min<u64>(B, 60);
    u64 bad = 0;
    for (u64 b = 1; b <= sweep; ++b) {
        u64 naive = count_naive(b).count;
        u64 split = 2 * count_direct(b).count + count_degenerate(b).count;
        if (naive != split) ++bad;
    }
    CheckResult dec;
    dec.name = "naive_decomposition";
    dec.value = double(bad);
    dec.bound = 0;
    dec.pass = bad == 0;
    dec.note = "bounds 1.." + std::to_string(sweep);
    s.add(dec);
    return s;
}

SuiteResult verify_red1(const std::vector<u64>& grid, int threads) {
    SuiteResult s{"red-1"};
    for (u64 B : grid) {
        u64 total = count_U(B, CountMethod::direct, threads).count;
        u64 direct = count_direct(B, threads).count;
        double res = double(total) - 2.0 * double(direct) -
                     12.0 / (M_PI * M_PI) * double(B);
        CheckResult c;
        c.name = "scaled_residual_B" + std::to_string(B);
        c.value = std::abs(res) / std::pow(double(B), 2.0 / 3.0);
        c.bound = 10.0;
        c.pass = c.value <= c.bound;
        c.note = fmt("residual=%.3f scaled=%.4f", res, c.value);
        s.add(c);
    }
    return s;
}

SuiteResult verify_local_factors(u64 pmax, int exponent_cutoff) {
    SuiteResult s{"local-factors"};
    auto ps = primes_up_to(pmax);

    double worst = 0;
    u64 worstp = 0;
    for (u64 p : ps) {
        double dp = double(p);
        double d = std::abs(local_factor_closed(p, 0.0) -
                            (1.0 + 6.0 / dp + 1.0 / (dp * dp)));
        if (d > worst) {
            worst = d;
            worstp = p;
        }
    }
    CheckResult closed;
    closed.name = "closed_factor_at_zero";
    closed.value = worst;
    closed.bound = 1e-12;
    closed.pass = worst <= closed.bound;
    closed.note = "worst p=" + std::to_string(worstp) + " over p<=" +
                  std::to_string(pmax);
    s.add(closed);

    double worst_ratio = 0;
    std::string worst_case;
    for (u64 p : {2, 3, 5, 7}) {
        for (double sv : {0.1, 0.25, 0.5}) {
            auto bf = local_factor_bruteforce(p, sv, exponent_cutoff);
            double diff = std::abs(bf.value - local_factor_closed(p, sv));
            double ratio = diff / std::max(bf.tail, 1e-300);
            if (ratio > worst_ratio) {
                worst_ratio = ratio;
                worst_case = fmt("p=%.0f s=%.2f", double(p), sv);
            }
        }
    }
    CheckResult series;
    series.name = "series_within_tail";
    series.value = worst_ratio;
    series.bound = 1.0;
    series.pass = worst_ratio <= 1.0;
    series.note = "worst " + worst_case;
    s.add(series);

    worst = 0;
    worstp = 0;
    for (u64 p : ps) {
        double dp = double(p);
        double lhs = euler_local(e2_spec(), p, 1.0) * g12_local(p);
        double rhs = std::pow(1.0 - 1.0 / dp, 6.0) *
                     (1.0 + 6.0 / dp + 1.0 / (dp * dp));
        double d = std::abs(lhs - rhs);
        if (d > worst) {
            worst = d;
            worstp = p;
        }
    }
    CheckResult closing;
    closing.name = "closing_identity";
    closing.value = worst;
    closing.bound = 1e-10;
    closing.pass = worst <= closing.bound;
    closing.note = "worst p=" + std::to_string(worstp) + " over p<=" +
                   std::to_string(pmax);
    s.add(closing);
    return s;
}

SuiteResult verify_densities(double budget) {
    SuiteResult s{"densities"};
    for (u64 p : {2, 3, 5}) {
        int rmax = 0;
        double c = 1;
        while (c * std::pow(double(p), 4.0) <= budget) {
            c *= std::pow(double(p), 4.0);
            ++rmax;
        }
        auto seq = local_density_sequence(p, rmax);
        double target = omega_p_closed(p);
        double rise = 0;
        for (std::size_t i = 1; i < seq.size(); ++i) {
            double prev = std::abs(seq[i - 1].scaled / target - 1.0);
            double cur = std::abs(seq[i].scaled / target - 1.0);
            rise = std::max(rise, cur - prev);
        }
        CheckResult trend;
        trend.name = "p" + std::to_string(p) + "_deviation_trend";
        trend.value = rise;
        trend.bound = 1e-12;
        trend.pass = rise <= trend.bound;
        trend.note = "r=1.." + std::to_string(rmax);
        s.add(trend);

        double fin = std::abs(seq.back().scaled / target - 1.0);
        CheckResult last;
        last.name = "p" + std::to_string(p) + "_final_deviation";
        last.value = fin;
        last.bound = 0.10;
        last.pass = fin < last.bound;
        last.note = fmt("scaled=%.6f target=%.6f", seq.back().scaled, target) +
                    " r=" + std::to_string(rmax);
        s.add(last);
    }
    return s;
}

SuiteResult verify_predictor(const std::vector<u64>& grid, int threads) {
    SuiteResult s{"predictor"};
    std::vector<u64> exact;
    u64 bmax = 0;
    for (u64 B : grid) {
        exact.push_back(count_U(B, CountMethod::direct, threads).count);
        bmax = std::max(bmax, B);
    }
    DeltaTable dt(bmax);
    GInterp g;
    auto fit = predictor_fit(grid, exact, dt, g);

    CheckResult expo;
    expo.name = "residual_exponent";
    expo.value = fit.residual_exponent;
    expo.bound = 0.9;
    expo.pass = fit.residual_exponent <= expo.bound;
    expo.note = fmt("beta_hat=%.4f points=%.0f", fit.beta_hat,
                    double(fit.points.size()));
    s.add(expo);
    return s;
}

std::vector<SuiteResult> verify_all(int threads) {
    std::vector<SuiteResult> out;
    out.push_back(verify_lemma_base(10000, threads));
    out.push_back(verify_red1({100, 1000, 10000, 100000}, threads));
    out.push_back(verify_local_factors(100));
    out.push_back(verify_densities());
    out.push_back(verify_predictor(
        {1000, 1778, 3162, 5623, 10000, 17783, 31623, 56234, 100000}, threads));
    return out;
}

}  // namespace mnd5
