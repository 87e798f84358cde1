#pragma once
// Real-density geometry and the analytic side of the point count: the fiber
// width f over the (u,v) base, its slice integrals, sawtooth-averaged local
// sums for the fixed outer tuples, and the secondary-term estimates.

#include <array>
#include <cstddef>
#include <vector>

#include "arith.hpp"

namespace mnd5 {

class DeltaTable;
class GInterp;

// v where the 1/v^3 ceiling first cuts into sqrt(u^3+1) inside the slice
inline constexpr double kVClipActive = 0.85179964207924292;  // ((1+sqrt(5))/2)^(-1/3)
// v above which the crossing point u_star drops below 1
inline constexpr double kVClipBelowOne = 0.89089871814033930;  // 2^(-1/6)

double f_minus(double u);
double f_plus(double u, double v);
double f_width(double u, double v);
double u_star(double v);

// integral of f_width(u, v) du over the slice, u in [-1, 1/v]
double g_slice(double v, double abs_tol = 1e-10);
// same with the u < 0 part dropped
double g_pos_slice(double v, double abs_tol = 1e-10);
// closed-form derivative of g_slice on (0, 1)
double g_slice_prime(double v);
// constant contribution of u in [-1, 0]
double g_neg_part(double abs_tol = 1e-12);

// piecewise Chebyshev fit of g_slice; the low-v piece interpolates in
// sqrt(v) because g has a square-root branch at v = 0, and the last piece
// in cbrt(1 - v) because u_star has a cube-root branch at v = 1
class GInterp {
  public:
    explicit GInterp(double abs_tol = 1e-8);
    double operator()(double v) const;
    double abs_tol() const { return tol_; }

  private:
    struct Seg {
        double vlo = 0, vhi = 0;
        double tlo = 0, thi = 0;
        int axis = 0;  // 0: t = v, 1: t = sqrt(v), 2: t = cbrt(1 - v)
        std::vector<double> coef;
    };
    double eval_seg(const Seg& s, double v) const;
    std::vector<Seg> segs_;
    double tol_ = 0;
};

struct McEstimate {
    double value = 0;
    double se = 0;
    u64 samples = 0;
};

// Monte Carlo cross-check of the base-area integral of f_width
McEstimate mc_slice_area(u64 samples, u64 seed);

// mean density of admissible y3 residue classes for a fixed outer tuple,
// averaged over the squarefree moduli k4 | rad(v1 v2) prime to v0 v3 y2
Rat sigma_local_mean(const std::array<u64, 4>& v, u64 y0, i64 y1, u64 y2);

struct SMainCompare {
    i64 exact = 0;
    double main = 0;
    double error = 0;
    double envelope = 0;
};
// exact y3-window count against its main term for one (v, y0, y1, y2)
SMainCompare s_exact_vs_main(const std::array<u64, 4>& v, u64 y0, i64 y1,
                             u64 y2, u64 B);

struct AdmissibleTuple {
    std::array<u64, 4> v{1, 1, 1, 1};
    u64 y0 = 1;
    i64 y1 = 1;
    u64 y2 = 1;
};
// deterministic sample of outer tuples satisfying all coprimality gates,
// with the y1, y2 ranges induced by the height bound B
std::vector<AdmissibleTuple> sample_admissible_tuples(u64 B, std::size_t count,
                                                      u64 seed);

// sawtooth-weighted archimedean sums behind the secondary constant; sign
// +1 takes the unbounded u branch, -1 the u in (0,1) branch
double phi_pm(const std::array<u64, 4>& v, u64 y0, int sign, double abs_tol);
// independent route for the + branch: 2d quadrature after w = t u
double phi_plus_2d(const std::array<u64, 4>& v, u64 y0, double abs_tol);

struct TailedValue {
    double value = 0;
    double tail = 0;
    u64 terms = 0;
};
// secondary constant as a truncated tuple sum plus a majorant tail bound
TailedValue beta_truncated(u64 height_cutoff, double abs_tol);

struct PredictorPoint {
    u64 B = 0;
    u64 exact = 0;
    double main_term = 0;
    double degenerate_term = 0;
    double predicted = 0;
    double residual = 0;
};
struct PredictorFit {
    std::vector<PredictorPoint> points;
    double beta_hat = 0;
    double residual_exponent = 0;
};
// fits the secondary coefficient on a B grid and reports the decay rate of
// what is left after subtracting main + degenerate + fitted linear term
PredictorFit predictor_fit(const std::vector<u64>& grid,
                           const std::vector<u64>& exact_counts,
                           const DeltaTable& dt, const GInterp& gi);

// partial Dirichlet series sum(H(x)^-s) over counted points, from a height
// histogram of the open subset
double zeta_partial_from_hist(double s, u64 B, const std::vector<u64>& hist_U);

// one-variable slice transform of g: (12 s / (6 s - 5)) * int_0^1 g(w^{1/(6s-5)}) dw
double g_one_var(double s, double abs_tol = 1e-9);

}  // namespace mnd5
