#ifndef MANIN_D5_H
#define MANIN_D5_H

/* C interface to the point-counting and constant-verification library for
 * the quartic del Pezzo surface x0 x1 = x2^2, x0 x4 = x1 x2 - x3^2.  All
 * strings returned through char** are heap blocks owned by the caller and
 * released with mnd5_string_free. */

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef struct mnd5_ctx mnd5_ctx;

enum {
    MND5_OK = 0,
    MND5_EFAIL = 1,     /* a named verification check failed */
    MND5_EINVAL = 2,    /* parameter outside its envelope */
    MND5_EOVERFLOW = 3, /* integer range exceeded */
    MND5_EQUAD = 4      /* quadrature did not reach its tolerance */
};

mnd5_ctx* mnd5_ctx_new(void);
void mnd5_ctx_free(mnd5_ctx* ctx);

/* worker count for the counting routines; 1..256 */
int mnd5_ctx_set_threads(mnd5_ctx* ctx, int threads);
int mnd5_ctx_threads(const mnd5_ctx* ctx);

/* number of rational points of height <= B off the line, by the chosen
 * method: "naive", "direct", or "torsor".  elapsed_ms_out may be NULL. */
int mnd5_count(mnd5_ctx* ctx, const char* method, uint64_t B,
               uint64_t* count_out, double* elapsed_ms_out);

/* JSON report with the leading-constant ingredients: the exact rational
 * alpha, the intersection-form checks, the finite and archimedean density
 * factors, and their combination. */
int mnd5_constants_report(mnd5_ctx* ctx, double abs_tol,
                          uint64_t prime_cutoff, char** json_out);

/* optional overrides for the verification suites; zero fields keep the
 * built-in defaults */
typedef struct mnd5_verify_cfg {
    uint64_t B;        /* lemma-base bound */
    uint64_t pmax;     /* local-factors prime cutoff */
    uint64_t grid_lo;  /* red-1 / predictor bound grid, log spaced */
    uint64_t grid_hi;
    int grid_points;
    int exponent_cutoff; /* local-factors series truncation */
    double budget;       /* densities exponent budget p^{4r} <= budget */
} mnd5_verify_cfg;

/* suite: "lemma-base", "red-1", "local-factors", "densities", "predictor",
 * or "all".  Writes a JSON report either way; returns MND5_EFAIL when any
 * check inside fails. */
int mnd5_verify_suite(mnd5_ctx* ctx, const char* suite,
                      const mnd5_verify_cfg* cfg, char** json_out);

/* main-term predictor table over a log-spaced grid of bounds; format
 * "jsonl" gives one object per grid point plus a summary line, "csv" the
 * columns B,exact,predictor,residual */
int mnd5_predictor_report(mnd5_ctx* ctx, uint64_t grid_lo, uint64_t grid_hi,
                          int grid_points, const char* format, char** out);

/* CSV table of the Dirichlet coefficients up to limit */
int mnd5_delta_table_csv(mnd5_ctx* ctx, uint64_t limit, char** csv_out);

void mnd5_string_free(char* s);
const char* mnd5_build_id(void);
const char* mnd5_status_message(int status);

#ifdef __cplusplus
}
#endif

#endif
