#include "asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "dirichlet.hpp"
#include "quadrature.hpp"
#include "surface.hpp"
#include "torsor.hpp"

namespace mnd5 {

namespace {

constexpr double kUTail = 40.0;

// int_U^inf (sqrt(u^3+1) - sqrt(u^3-1)) du expanded for large U
double tail_series(double U) {
    double a = 2.0 / std::sqrt(U);
    double b = std::pow(U, -6.5) / 52.0;
    double c = 7.0 * std::pow(U, -12.5) / 1600.0;
    return a + b + c;
}

double u01(std::mt19937_64& rng) { return double(rng() >> 11) * 0x1p-53; }

}  // namespace

double f_minus(double u) { return u > 1.0 ? std::sqrt(u * u * u - 1.0) : 0.0; }

double f_plus(double u, double v) {
    if (u < -1.0) return 0.0;
    double s = std::sqrt(u * u * u + 1.0);
    if (v > 0.0) {
        double cap = 1.0 / (v * v * v);
        if (cap < s) return cap;
    }
    return s;
}

double f_width(double u, double v) {
    if (u < -1.0) return 0.0;
    if (u <= 1.0) return f_plus(u, v);
    double u3 = u * u * u;
    double sp = std::sqrt(u3 + 1.0);
    double sm = std::sqrt(u3 - 1.0);
    if (v > 0.0) {
        double cap = 1.0 / (v * v * v);
        if (cap < sp) {
            double w = cap - sm;
            return w > 0.0 ? w : 0.0;
        }
    }
    // sp - sm loses all precision once u^3 dwarfs 1; use the exact rewrite
    return 2.0 / (sp + sm);
}

double u_star(double v) {
    if (v >= 1.0) return 0.0;
    return std::cbrt(std::pow(v, -6.0) - 1.0);
}

double g_neg_part(double abs_tol) {
    // u = w^2 - 1 removes the sqrt branch at u = -1
    return integrate_or_throw(
        [](double w) {
            double w2 = w * w;
            return 2.0 * w2 * std::sqrt(w2 * w2 - 3.0 * w2 + 3.0);
        },
        0.0, 1.0, abs_tol);
}

double g_pos_slice(double v, double abs_tol) {
    const double up = v > 0.0 ? 1.0 / v : std::numeric_limits<double>::infinity();
    const double ucut = std::min(up, kUTail);

    std::vector<double> knots{0.0, ucut};
    if (ucut > 1.0) knots.push_back(1.0);
    if (ucut > 2.0) knots.push_back(2.0);
    double us = v > 0.0 && v < 1.0 ? u_star(v) : 0.0;
    if (us > 0.0 && us < ucut) knots.push_back(us);
    std::sort(knots.begin(), knots.end());
    knots.erase(std::unique(knots.begin(), knots.end()), knots.end());

    const std::size_t npanel = knots.size() - 1;
    const double tol = abs_tol / double(npanel + 1);
    double total = 0.0;
    for (std::size_t i = 0; i < npanel; ++i) {
        double lo = knots[i], hi = knots[i + 1];
        if (lo == 1.0) {
            // u = 1 + w^2; the sqrt(u^3-1) branch becomes w*sqrt(3+3w^2+w^4)
            total += integrate_or_throw(
                [v](double w) {
                    double w2 = w * w;
                    double u = 1.0 + w2;
                    double fm = w * std::sqrt(3.0 + 3.0 * w2 + w2 * w2);
                    double val = f_plus(u, v) - fm;
                    return 2.0 * w * (val > 0.0 ? val : 0.0);
                },
                0.0, std::sqrt(hi - 1.0), tol);
        } else {
            total += integrate_or_throw([v](double u) { return f_width(u, v); },
                                        lo, hi, tol);
        }
    }
    if (up > kUTail) {
        total += tail_series(kUTail);
        if (std::isfinite(up)) total -= tail_series(up);
    }
    return total;
}

double g_slice(double v, double abs_tol) {
    return g_neg_part(abs_tol / 4.0) + g_pos_slice(v, 0.75 * abs_tol);
}

double g_slice_prime(double v) {
    if (!(v > 0.0 && v < 1.0)) throw std::invalid_argument("g_slice_prime needs 0 < v < 1");
    double up = 1.0 / v;
    double d = -f_width(up, v) / (v * v);
    double us = u_star(v);
    if (us < up) d -= 3.0 * (up - us) / (v * v * v * v);
    return d;
}

GInterp::GInterp(double abs_tol) : tol_(abs_tol) {
    const double sample_tol = abs_tol / 20.0;
    const int n = 48;
    struct Spec {
        double vlo, vhi;
        int axis;
    };
    const Spec spec[4] = {{0.0, kVClipActive, 1},
                          {kVClipActive, kVClipBelowOne, 0},
                          {kVClipBelowOne, 0.97, 0},
                          {0.97, 1.0, 2}};
    for (const auto& sp : spec) {
        Seg s;
        s.vlo = sp.vlo;
        s.vhi = sp.vhi;
        s.axis = sp.axis;
        auto fwd = [&](double v) {
            if (sp.axis == 1) return std::sqrt(v);
            if (sp.axis == 2) return std::cbrt(1.0 - v);
            return v;
        };
        auto inv = [&](double t) {
            if (sp.axis == 1) return t * t;
            if (sp.axis == 2) return 1.0 - t * t * t;
            return t;
        };
        s.tlo = fwd(sp.vlo);
        s.thi = fwd(sp.vhi);
        if (s.tlo > s.thi) std::swap(s.tlo, s.thi);
        std::vector<double> y(n);
        for (int j = 0; j < n; ++j) {
            double x = std::cos(M_PI * (j + 0.5) / n);
            double t = s.tlo + 0.5 * (x + 1.0) * (s.thi - s.tlo);
            double v = std::clamp(inv(t), 0.0, 1.0);
            y[j] = g_slice(v, sample_tol);
        }
        s.coef.resize(n);
        for (int k = 0; k < n; ++k) {
            double c = 0.0;
            for (int j = 0; j < n; ++j)
                c += y[j] * std::cos(k * M_PI * (j + 0.5) / n);
            s.coef[k] = (k == 0 ? 1.0 : 2.0) * c / n;
        }
        segs_.push_back(std::move(s));
    }
}

double GInterp::eval_seg(const Seg& s, double v) const {
    double t = v;
    if (s.axis == 1)
        t = std::sqrt(v);
    else if (s.axis == 2)
        t = std::cbrt(1.0 - v);
    double x = 2.0 * (t - s.tlo) / (s.thi - s.tlo) - 1.0;
    x = std::clamp(x, -1.0, 1.0);
    double b1 = 0.0, b2 = 0.0;
    for (std::size_t k = s.coef.size(); k-- > 1;) {
        double b0 = 2.0 * x * b1 - b2 + s.coef[k];
        b2 = b1;
        b1 = b0;
    }
    return x * b1 - b2 + s.coef[0];
}

double GInterp::operator()(double v) const {
    double vc = std::clamp(v, 0.0, 1.0);
    for (const auto& s : segs_)
        if (vc <= s.vhi) return eval_seg(s, vc);
    return eval_seg(segs_.back(), vc);
}

McEstimate mc_slice_area(u64 samples, u64 seed) {
    std::mt19937_64 rng(seed);
    long double sum = 0.0L, sumsq = 0.0L;
    for (u64 i = 0; i < samples; ++i) {
        double v = u01(rng);
        double x = u01(rng);
        double w = 0.0;
        if (x > 0.0) {
            double u = 1.0 / x - 2.0;
            double up = v > 0.0 ? 1.0 / v : std::numeric_limits<double>::infinity();
            if (u <= up) {
                double j = (u + 2.0) * (u + 2.0);
                w = f_width(u, v) * j;
            }
        }
        sum += w;
        sumsq += (long double)w * w;
    }
    McEstimate out;
    out.samples = samples;
    out.value = double(sum / samples);
    long double var = (sumsq - sum * sum / samples) / (samples - 1);
    out.se = double(std::sqrt(var / samples));
    return out;
}

Rat sigma_local_mean(const std::array<u64, 4>& v, u64 y0, i64 y1, u64 y2) {
    const u64 v0 = v[0], v1 = v[1], v2 = v[2], v3 = v[3];
    Rat total(0);
    u64 rad12 = radical(v1 * v2);
    for (u64 k4 : squarefree_divisors(rad12)) {
        if (std::gcd(k4, v0 * v3 * y2) != 1) continue;
        u64 M = k4 * v2 * y0 * y0;
        i64 a;
        if (M == 1) {
            a = 0;
        } else {
            i64 y1m = i64(((y1 % i64(M)) + i64(M)) % i64(M));
            u64 av = mul_mod(v0 % M, u64(y1m), M);
            a = i64(mul_mod(av, inv_mod(v3 % M, M), M));
        }
        u64 cnt;
        if (M == 1) {
            cnt = 1;
        } else if (std::gcd(u64(a), M) != 1) {
            cnt = 0;
        } else {
            cnt = eta(a, M);
        }
        Rat term(i128(mu(k4)) * i128(cnt), i128(k4));
        total = total + term;
    }
    return phi_star(v0 * y2) * total;
}

SMainCompare s_exact_vs_main(const std::array<u64, 4>& v, u64 y0, i64 y1,
                             u64 y2, u64 B) {
    const u64 v0 = v[0], v1 = v[1], v2 = v[2], v3 = v[3];
    SMainCompare out;

    const u64 m = v2 * y0 * y0;
    const i128 W = i128(v0) * y1 * y1 * y1 * i128(y2) * y2;
    const i128 Bm = i128(B) * m;
    const u128 c3 = u128(v0) * v0 * v1 * v1 * v1 * v2 * v2 * v3 * v3 * y0 * y2;
    const u64 y3cap = c3 > 0 ? u64(u128(B) / c3) : 0;

    // window W - Bm <= v3 y3^2 <= W + Bm intersected with 1 <= y3 <= y3cap
    i128 hi_num = W + Bm;
    u64 y3hi = 0;
    if (hi_num > 0) y3hi = isqrt_u128(u128(hi_num) / v3);
    y3hi = std::min(y3hi, y3cap);
    i128 lo_num = W - Bm;
    u64 y3lo = 1;
    if (lo_num > 0)
        y3lo = std::max<u64>(ceil_sqrt_u128((u128(lo_num) + v3 - 1) / v3), 1);

    i64 cnt = 0;
    if (y3hi >= y3lo) {
        if (m == 1) {
            for (u64 y3 = y3lo; y3 <= y3hi; ++y3) {
                if (std::gcd(y3, v0 * y0 * y2) != 1) continue;
                i128 num = W - i128(v3) * y3 * y3;
                if (num == 0) continue;
                i64 y4 = i64(num);
                if (std::gcd(u64(y4 < 0 ? -y4 : y4), v1 * v2) != 1) continue;
                ++cnt;
            }
        } else {
            i64 y1m = i64(((y1 % i64(m)) + i64(m)) % i64(m));
            u64 av = mul_mod(mul_mod(v0 % m, u64(y1m), m), inv_mod(v3 % m, m), m);
            auto roots = sqrt_roots_mod(i64(av), m, true);
            u64 y12 = mul_mod(u64(y1m), y2 % m, m);
            for (u64 rho : roots) {
                u64 r0 = mul_mod(rho % m, y12, m);
                if (r0 == 0) r0 = m;
                u64 start = r0;
                if (start < y3lo) start += ((y3lo - start + m - 1) / m) * m;
                for (u64 y3 = start; y3 <= y3hi; y3 += m) {
                    if (std::gcd(y3, v0 * y0 * y2) != 1) continue;
                    i128 num = W - i128(v3) * y3 * y3;
                    if (num == 0) continue;
                    if (num % i128(m) != 0) continue;
                    i128 y4w = num / i128(m);
                    u64 ay4 = y4w < 0 ? u64(-y4w) : u64(y4w);
                    if (std::gcd(ay4, v1 * v2) != 1) continue;
                    ++cnt;
                }
            }
        }
    }
    out.exact = cnt;

    RegionBounds rb = region_bounds(B, v, y0, y2);
    double u = double(y1) / rb.Y1;
    double vv = double(v1) / rb.V1;
    double sig = sigma_local_mean(v, y0, y1, y2).to_double();
    out.main = rb.Y3 * f_width(u, vv) * sig / double(m);
    out.error = std::abs(double(out.exact) - out.main);
    out.envelope = std::pow(2.0, double(omega(v0 * y2))) *
                   std::pow(4.0, double(omega(v1 * v2 * y0)));
    return out;
}

std::vector<AdmissibleTuple> sample_admissible_tuples(u64 B, std::size_t count,
                                                      u64 seed) {
    std::mt19937_64 rng(seed);
    auto draw_small = [&](u64 hi) { return 1 + rng() % hi; };
    std::vector<AdmissibleTuple> out;
    while (out.size() < count) {
        AdmissibleTuple t;
        t.v = {draw_small(3), draw_small(4), draw_small(3), draw_small(2)};
        t.y0 = draw_small(3);
        t.y2 = draw_small(4);
        const u64 v0 = t.v[0], v1 = t.v[1], v2 = t.v[2], v3 = t.v[3];
        if (!is_squarefree(v0 * v2 * v3)) continue;
        if (std::gcd(v2 * v3 * t.y0, t.y2) != 1) continue;
        if (std::gcd(v0 * v3, t.y0) != 1) continue;
        u128 c0 = u128(v0) * v0 * v0 * v0 * v1 * v1 * v1 * v1 * v1 * v1;
        c0 *= u128(v2) * v2 * v2 * v2 * v2 * v3 * v3 * v3;
        c0 *= u128(t.y0) * t.y0 * t.y0 * t.y0 * t.y2 * t.y2;
        if (c0 > B) continue;
        u128 c1 = u128(v0) * v0 * v1 * v1 * v2 * v3 * t.y2 * t.y2;
        u64 y1max = isqrt_u64(u64(u128(B) / c1));
        if (y1max == 0) continue;
        u64 mag = 1 + rng() % std::min<u64>(y1max, 50);
        bool neg = (rng() & 1) != 0;
        if (neg) {
            u64 lim = icbrt_strict(v0 * t.y2 * t.y2, u128(B) * v2 * t.y0 * t.y0);
            if (lim == 0) continue;
            mag = 1 + rng() % std::min<u64>(lim, 50);
        }
        i64 y1 = neg ? -i64(mag) : i64(mag);
        if (std::gcd(u64(mag), v0 * v1 * v2 * v3 * t.y0) != 1) continue;
        t.y1 = y1;
        out.push_back(t);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Sawtooth kernel behind the phi_pm integrals

namespace {

// derivative of f(., v) in the first argument, away from its kinks
double f_du(double u, double v) {
    double d = 0.0;
    if (u > -1.0) {
        double s3 = u * u * u + 1.0;
        double v3 = v * v * v;
        if (s3 * v3 * v3 < 1.0) d += 1.5 * u * u / std::sqrt(s3);
    }
    if (u > 1.0) d -= 1.5 * u * u / std::sqrt(u * u * u - 1.0);
    return d;
}

// h(z) = sum over units rho mod m of psi((z - b rho^2)/m): piecewise linear
// with period m and mean zero.  The inner t-integral of phi_pm collapses to
// (zeta^{3/2}/2) int_zeta^inf z^{-5/2} h(z) dz; that integral is done
// piece-exactly up to a cutoff zmax and closed with the summation-by-parts
// tail (Hbar - H(z)) z^{-5/2} + O(m max|H| z^{-7/2}).
class SawKernel {
  public:
    SawKernel(u64 m, u64 b, double eps) : m_(double(m)) {
        std::vector<int> cnt(m, 0);
        u64 nrho = 0;
        for (u64 rho = 1; rho <= m; ++rho) {
            if (std::gcd(rho, m) != 1) continue;
            cnt[mul_mod(b % m, mul_mod(rho % m, rho % m, m), m)]++;
            ++nrho;
        }
        slope_ = double(nrho) / m_;

        double h = 0.0;
        for (u64 w = 0; w < m; ++w) {
            if (!cnt[w]) continue;
            c0_ += cnt[w] * ((w == 0 ? 0.0 : (m_ - double(w)) / m_) - 0.5);
        }
        h = c0_;  // h(0+) equals sum psi(-w_j/m) taken just past the jumps
        wl_.push_back(0.0);
        hl_.push_back(h);
        for (u64 w = 1; w < m; ++w) {
            if (!cnt[w]) continue;
            h = hl_.back() + slope_ * (double(w) - wl_.back()) - cnt[w];
            wl_.push_back(double(w));
            hl_.push_back(h);
        }

        // H(w) = int_0^w h at piece starts, the period mean, and extrema
        const std::size_t np = wl_.size();
        h0_.assign(np + 1, 0.0);
        double hint = 0.0;  // int of H over the period
        for (std::size_t j = 0; j < np; ++j) {
            double len = (j + 1 < np ? wl_[j + 1] : m_) - wl_[j];
            hint += h0_[j] * len + hl_[j] * len * len / 2.0 +
                    slope_ * len * len * len / 6.0;
            h0_[j + 1] = h0_[j] + hl_[j] * len + slope_ * len * len / 2.0;
            double lo = std::min(h0_[j], h0_[j + 1]);
            double hi = std::max(h0_[j], h0_[j + 1]);
            double d = -hl_[j] / slope_;
            if (d > 0.0 && d < len) {
                double vert = h0_[j] + hl_[j] * d + slope_ * d * d / 2.0;
                lo = std::min(lo, vert);
                hi = std::max(hi, vert);
            }
            mh_ = std::max({mh_, -lo, hi});
            hmax_ = std::max({hmax_, std::abs(hl_[j]),
                              std::abs(hl_[j] + slope_ * len)});
        }
        hbar_ = hint / m_;

        double ztarget = std::sqrt(2.5 * m_ * std::max(mh_, 1e-30) / eps);
        std::size_t nper = std::size_t(std::ceil(ztarget / m_));
        nper = std::min(std::max<std::size_t>(nper, 1),
                        std::max<std::size_t>(2000000 / np, 4));
        zmax_ = double(nper) * m_;

        // suffix sums of the piece-exact integrals, accumulated from the tail
        // end so differences stay on the local z^{-3/2} scale
        suffix_.assign(nper * np + 1, 0.0);
        for (std::size_t i = nper * np; i-- > 1;) {
            std::size_t per = i / np, j = i % np;
            double a = double(per) * m_ + wl_[j];
            double bnd = (j + 1 < np ? double(per) * m_ + wl_[j + 1]
                                     : double(per + 1) * m_);
            suffix_[i] = suffix_[i + 1] + piece_int(a, bnd, hl_[j]);
        }
        suffix_[0] = suffix_[1];  // piece 0 starts at z = 0; never used whole
    }

    double c0() const { return c0_; }
    double hmax() const { return hmax_; }

    // (zeta^{3/2}/2) int_zeta^inf z^{-5/2} h(z) dz, within the eps budget
    double weighted_tail(double zeta) const {
        if (zeta < 1e-12) return hl_[0] / 3.0;
        if (zeta >= zmax_) return (hbar_ - h_anti(zeta)) / (2.0 * zeta);
        const std::size_t np = wl_.size();
        double per = std::floor(zeta / m_);
        double frac = zeta - per * m_;
        std::size_t j =
            std::size_t(std::upper_bound(wl_.begin(), wl_.end(), frac) -
                        wl_.begin()) -
            1;
        std::size_t i = std::size_t(per) * np + j;
        double a = per * m_ + wl_[j];
        double bnd = (j + 1 < np ? per * m_ + wl_[j + 1] : (per + 1.0) * m_);
        double hz = hl_[j] + slope_ * (zeta - a);
        double integral = piece_int(zeta, bnd, hz) + suffix_[i + 1] +
                          hbar_ * std::pow(zmax_, -2.5);
        return 0.5 * std::pow(zeta, 1.5) * integral;
    }

  private:
    // int_a^b z^{-5/2} (hleft + slope (z - a)) dz
    double piece_int(double a, double b, double hleft) const {
        double i1 = (std::pow(a, -1.5) - std::pow(b, -1.5)) * (2.0 / 3.0);
        double i2 = (std::pow(a, -0.5) - std::pow(b, -0.5)) * 2.0;
        return (hleft - slope_ * a) * i1 + slope_ * i2;
    }
    double h_anti(double z) const {  // H(z mod m)
        double frac = std::fmod(z, m_);
        std::size_t j =
            std::size_t(std::upper_bound(wl_.begin(), wl_.end(), frac) -
                        wl_.begin()) -
            1;
        double d = frac - wl_[j];
        return h0_[j] + hl_[j] * d + slope_ * d * d / 2.0;
    }

    double m_ = 1, slope_ = 0;
    std::vector<double> wl_, hl_, h0_;
    double c0_ = 0, hbar_ = 0, mh_ = 0, hmax_ = 0, zmax_ = 0;
    std::vector<double> suffix_;
};

// the inner double integral of one (k4, k1) pair; Ak = v0 v1^2 v2^2 v3 y0^2 / k1
double phi_pair_kernel(double Ak, u64 m, u64 b, int sign, double tol) {
    SawKernel ker(m, b, 0.05 * tol);
    const double c0 = ker.c0();
    if (sign < 0) {
        // u = (1 - w^2)^{1/3} absorbs the 1/sqrt(1 - u^3) weight of f'(-u, t)
        auto ig = [&](double w) {
            double u = std::cbrt(1.0 - w * w);
            return c0 / 3.0 - ker.weighted_tail(Ak * u);
        };
        return integrate_or_throw(ig, 0.0, 1.0, 0.8 * tol);
    }
    const double uphi = std::cbrt(0.5 * (1.0 + std::sqrt(5.0)));
    // u below the clip crossing: t-cap at (u^3+1)^{-1/6}
    auto p1 = [&](double u) {
        double s3 = u * u * u + 1.0;
        double zeta = Ak * u * std::cbrt(s3);
        return 1.5 * u * u / s3 * (c0 / 3.0 - ker.weighted_tail(zeta));
    };
    // sqrt branch of f'(u, t) just above u = 1, with u = 1 + w^2
    auto p2 = [&](double w) {
        double w2 = w * w, u = 1.0 + w2;
        double zeta = Ak * u * u * u;
        return -3.0 / (u * std::sqrt(3.0 + 3.0 * w2 + w2 * w2)) *
               (c0 / 3.0 - ker.weighted_tail(zeta));
    };
    // combined branches above the crossing, in the cancellation-stable form
    auto p3 = [&](double u) {
        double u3 = u * u * u;
        double sp = std::sqrt(u3 + 1.0), sm = std::sqrt(u3 - 1.0);
        double da = -3.0 / (u * (sp + sm) * std::sqrt(u3 * u3 - 1.0));
        double zeta = Ak * u3;
        return da * (c0 / 3.0 - ker.weighted_tail(zeta));
    };
    double scale = std::abs(c0) + ker.hmax();
    double uhi = std::max(2.0 * uphi,
                          std::pow(0.115 * scale / (0.1 * tol), 1.0 / 4.5));
    double total = integrate_or_throw(p1, 0.0, uphi, 0.25 * tol);
    total += integrate_or_throw(p2, 0.0, std::sqrt(uphi - 1.0), 0.25 * tol);
    total += integrate_or_throw(p3, uphi, uhi, 0.25 * tol, {2.0 * uphi});
    return total;
}

void check_phi_gates(const std::array<u64, 4>& v, u64 y0) {
    if (!is_squarefree(v[0] * v[2] * v[3]) || std::gcd(v[0] * v[3], y0) != 1)
        throw std::invalid_argument(
            "phi_pm needs squarefree v0 v2 v3 and gcd(v0 v3, y0) = 1");
}

// loops of the Moebius double sum shared by both phi routes; pair_val gets
// (k1, m, b) and the per-pair error budget
template <class PairFn>
double phi_outer_sum(const std::array<u64, 4>& v, u64 y0, int sign,
                     double abs_tol, PairFn&& pair_val) {
    const u64 v0 = v[0], v1 = v[1], v2 = v[2], v3 = v[3];
    const double front = 18.0 / (M_PI * M_PI);
    std::size_t npairs = 0;
    for (u64 k4 : squarefree_divisors(v1 * v2)) {
        if (std::gcd(k4, v0 * v3) != 1) continue;
        u64 m = k4 * v2 * y0 * y0;
        for (u64 k1 : squarefree_divisors(v0 * v1 * v3))
            if (std::gcd(k1, m) == 1) ++npairs;
    }
    const double tol_pair = abs_tol / (front * double(npairs));
    double total = 0.0;
    for (u64 k4 : squarefree_divisors(v1 * v2)) {
        if (std::gcd(k4, v0 * v3) != 1) continue;
        const u64 m = k4 * v2 * y0 * y0;
        double wk4 = double(mu(k4)) *
                     phi_dagger(k4 * v0 * v2 * v3 * y0).to_double() /
                     double(k4);
        double inner = 0.0;
        for (u64 k1 : squarefree_divisors(v0 * v1 * v3)) {
            if (std::gcd(k1, m) != 1) continue;
            u64 b = 1;
            if (m > 1)
                b = mul_mod(inv_mod(mul_mod(k1 % m, v0 % m, m), m),
                            sign > 0 ? v3 % m : m - v3 % m, m);
            if (b == 0) b = m;
            inner += double(mu(k1)) * pair_val(k1, m, b, tol_pair);
        }
        total += wk4 * inner;
    }
    return front * total;
}

}  // namespace

double phi_pm(const std::array<u64, 4>& v, u64 y0, int sign, double abs_tol) {
    check_phi_gates(v, y0);
    if (sign == 0) throw std::invalid_argument("phi_pm sign must be +1 or -1");
    const double A =
        double(v[0]) * v[1] * v[1] * v[2] * v[2] * v[3] * y0 * y0;
    return phi_outer_sum(v, y0, sign, abs_tol,
                         [&](u64 k1, u64 m, u64 b, double tol) {
                             return phi_pair_kernel(A / double(k1), m, b, sign,
                                                    tol);
                         });
}

double phi_plus_2d(const std::array<u64, 4>& v, u64 y0, double abs_tol) {
    check_phi_gates(v, y0);
    const double A =
        double(v[0]) * v[1] * v[1] * v[2] * v[2] * v[3] * y0 * y0;
    auto pair_val = [&](u64 k1, u64 m, u64 b, double tol) {
        // residue multiset for the pointwise sawtooth sum
        std::vector<std::pair<double, double>> res;
        for (u64 rho = 1; rho <= m; ++rho) {
            if (std::gcd(rho, m) != 1) continue;
            double w = double(mul_mod(b % m, mul_mod(rho % m, rho % m, m), m));
            bool found = false;
            for (auto& rc : res)
                if (rc.first == w) {
                    rc.second += 1.0;
                    found = true;
                }
            if (!found) res.emplace_back(w, 1.0);
        }
        const double dm = double(m), dk1 = double(k1);
        auto rsum = [&](double T) {
            double s = 0.0;
            for (const auto& rc : res)
                s += rc.second *
                     (psi(-rc.first / dm) - psi((T / dk1 - rc.first) / dm));
            return s;
        };
        // w = t u maps the u-range [0, 1/t] onto the unit square
        auto inner = [&](double t) {
            auto base = [&](double w) {
                return t * f_du(w / t, t) * rsum(A * w / (t * t * t));
            };
            double wclip = 2.0;  // clip crossing u^3 + 1 = t^{-6}, as a w value
            if (t < 1.0) wclip = t * std::cbrt(std::pow(t, -6.0) - 1.0);
            double val = 0.0;
            std::vector<double> sa;
            if (wclip < t) sa.push_back(wclip);
            val += integrate(base, 0.0, std::min(t, 1.0), tol / 3.0, sa).value;
            if (t < 1.0) {
                // sqrt singularity at u = 1: w = t + x^2 on a short panel
                double wb = std::min(1.0, t + 0.25);
                auto sq = [&](double x) { return base(t + x * x) * 2.0 * x; };
                std::vector<double> sb;
                if (wclip > t && wclip < wb)
                    sb.push_back(std::sqrt(wclip - t));
                val += integrate(sq, 0.0, std::sqrt(wb - t), tol / 3.0, sb)
                           .value;
                std::vector<double> sc;
                if (wclip > wb && wclip < 1.0) sc.push_back(wclip);
                val += integrate(base, wb, 1.0, tol / 3.0, sc).value;
            }
            return val;
        };
        return integrate(inner, 0.0, 1.0, tol,
                         {kVClipActive, kVClipBelowOne})
            .value;
    };
    return phi_outer_sum(v, y0, +1, abs_tol, pair_val);
}

namespace {

// upper bound on sum over n of k^{omega(n)} n^{-s}
double mult_sum_bound(double k, double s) {
    double val = 1.0;
    for (u64 p : primes_up_to(10000))
        val *= 1.0 + k / (std::pow(double(p), s) - 1.0);
    double P = 10000.0;
    return val * std::exp(2.0 * k * std::pow(P, 1.0 - s) / (s - 1.0));
}

}  // namespace

TailedValue beta_truncated(u64 height_cutoff, double abs_tol) {
    if (height_cutoff < 1)
        throw std::invalid_argument("beta_truncated needs a positive cutoff");
    struct Term {
        std::array<u64, 4> v;
        u64 y0;
        double wt;
    };
    std::vector<Term> terms;
    double wtsum = 0.0;
    const u64 hc = height_cutoff;
    for (u64 v0 = 1; v0 * v0 * v0 * v0 <= hc; ++v0) {
        u64 c0 = v0 * v0 * v0 * v0;
        for (u64 v1 = 1; c0 * v1 * v1 * v1 * v1 * v1 * v1 <= hc; ++v1) {
            u64 c1 = c0 * v1 * v1 * v1 * v1 * v1 * v1;
            for (u64 v2 = 1; c1 * v2 * v2 * v2 * v2 * v2 <= hc; ++v2) {
                u64 c2 = c1 * v2 * v2 * v2 * v2 * v2;
                for (u64 v3 = 1; c2 * v3 * v3 * v3 <= hc; ++v3) {
                    u64 c3 = c2 * v3 * v3 * v3;
                    for (u64 y0 = 1; c3 * y0 * y0 * y0 * y0 <= hc; ++y0) {
                        if (!is_squarefree(v0 * v2 * v3)) continue;
                        if (std::gcd(v0 * v3, y0) != 1) continue;
                        double den = double(v0) * v0 * v1 * v1 * v1 * v2 *
                                     v2 * v2 * v3 * v3 * y0 * y0 * y0;
                        terms.push_back({{v0, v1, v2, v3}, y0, 1.0 / den});
                        wtsum += 1.0 / den;
                    }
                }
            }
        }
    }
    const double tol_phi = abs_tol / (2.0 * wtsum);
    double value = 0.0;
    for (const auto& t : terms)
        value += t.wt * (phi_pm(t.v, t.y0, -1, tol_phi) +
                         phi_pm(t.v, t.y0, +1, tol_phi));
    // Rankin majorant for the discarded tuples: each |phi_pm| is bounded by
    // 20 (v2 y0^2)^{0.55} 2^{omega(v1 v2) + omega(v0 v1 v3)}, and the height
    // gate costs at most (height/cutoff)^{1/8}
    double tail = 2.0 * 20.0 * std::pow(double(hc), -0.125) *
                  mult_sum_bound(2.0, 1.5) * mult_sum_bound(4.0, 2.25) *
                  mult_sum_bound(2.0, 1.825) * mult_sum_bound(2.0, 1.625) *
                  zeta_em(1.4);
    return {value, tail, terms.size()};
}

PredictorFit predictor_fit(const std::vector<u64>& grid,
                           const std::vector<u64>& exact_counts,
                           const DeltaTable& dt, const GInterp& gi) {
    if (grid.size() != exact_counts.size() || grid.size() < 3)
        throw std::invalid_argument("predictor_fit needs >= 3 matched points");
    const double c_deg = 12.0 / (M_PI * M_PI);
    const std::size_t n = grid.size();
    std::vector<double> mterm(n);
    for (std::size_t i = 0; i < n; ++i) {
        u64 B = grid[i];
        if (B > dt.limit())
            throw std::invalid_argument("delta table shorter than the grid");
        double s = 0.0;
        for (const auto& e : dt.entries()) {
            if (e.n > B) break;
            s += e.value * gi(std::pow(double(e.n) / double(B), 1.0 / 6.0));
        }
        mterm[i] = 2.0 * std::pow(double(B), 5.0 / 6.0) * s;
    }
    // least squares y = a + slope B on y = exact - main; the intercept mops
    // up low-order drift and stays inside the reported residuals
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        double x = double(grid[i]), y = double(exact_counts[i]) - mterm[i];
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    double det = double(n) * sxx - sx * sx;
    if (det <= 0.0) throw std::invalid_argument("degenerate predictor grid");
    double slope = (double(n) * sxy - sx * sy) / det;

    PredictorFit out;
    out.beta_hat = 0.5 * (slope - c_deg);
    double lx = 0, ly = 0, lxx = 0, lxy = 0;
    std::size_t ln = 0;
    for (std::size_t i = 0; i < n; ++i) {
        PredictorPoint pt;
        pt.B = grid[i];
        pt.exact = exact_counts[i];
        pt.main_term = mterm[i];
        pt.degenerate_term = c_deg * double(grid[i]);
        pt.predicted = mterm[i] + slope * double(grid[i]);
        pt.residual = double(exact_counts[i]) - pt.predicted;
        out.points.push_back(pt);
        if (std::abs(pt.residual) > 1e-9) {
            double x = std::log(double(grid[i]));
            double y = std::log(std::abs(pt.residual));
            lx += x;
            ly += y;
            lxx += x * x;
            lxy += x * y;
            ++ln;
        }
    }
    if (ln >= 2) {
        double ldet = double(ln) * lxx - lx * lx;
        if (ldet > 0.0)
            out.residual_exponent = (double(ln) * lxy - lx * ly) / ldet;
    }
    return out;
}

double zeta_partial_from_hist(double s, u64 B,
                              const std::vector<u64>& hist_U) {
    if (!(s > 1.0))
        throw std::invalid_argument("zeta_partial_from_hist needs s > 1");
    double total = 0.0;
    u64 hi = hist_U.empty() ? 0 : std::min<u64>(B, hist_U.size() - 1);
    for (u64 h = 1; h <= hi; ++h)
        if (hist_U[h]) total += double(hist_U[h]) * std::pow(double(h), -s);
    return total;
}

double g_one_var(double s, double abs_tol) {
    double e = 6.0 * s - 5.0;
    if (e <= 0.0) throw std::invalid_argument("g_one_var needs s > 5/6");
    // inner noise must sit well below the outer refinement target
    double inner_tol = abs_tol / 50.0;
    auto integrand = [e, inner_tol](double w) {
        double vv = std::pow(w, 1.0 / e);
        return g_slice(std::min(vv, 1.0), inner_tol);
    };
    double val = integrate_or_throw(integrand, 0.0, 1.0, 0.9 * abs_tol,
                                    {1e-6, 1e-4, 1e-2, 0.1, 0.5});
    return 12.0 * s / e * val;
}

}  // namespace mnd5
