#include "manin_d5.h"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <exception>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "arith.hpp"
#include "asymptotics.hpp"
#include "constants.hpp"
#include "dirichlet.hpp"
#include "surface.hpp"
#include "verify.hpp"

using json = nlohmann::ordered_json;
using namespace mnd5;

struct mnd5_ctx {
    int threads = 1;
};

namespace {

#ifndef MND5_BUILD_ID
#define MND5_BUILD_ID "unknown"
#endif

char* dup_string(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (out) std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

int caught_status() {
    try {
        throw;
    } catch (const quadrature_error&) {
        return MND5_EQUAD;
    } catch (const std::overflow_error&) {
        return MND5_EOVERFLOW;
    } catch (const std::invalid_argument&) {
        return MND5_EINVAL;
    } catch (const std::exception&) {
        return MND5_EFAIL;
    } catch (...) {
        return MND5_EFAIL;
    }
}

json suite_to_json(const SuiteResult& s) {
    json checks = json::array();
    for (const auto& c : s.checks) {
        checks.push_back({{"name", c.name},
                          {"value", c.value},
                          {"bound", c.bound},
                          {"pass", c.pass},
                          {"note", c.note}});
    }
    return {{"suite", s.suite}, {"pass", s.pass}, {"checks", checks}};
}

std::vector<u64> log_grid(u64 lo, u64 hi, int points) {
    if (lo < 2 || hi <= lo || points < 3)
        throw std::invalid_argument("grid needs lo >= 2, hi > lo, points >= 3");
    std::vector<u64> g;
    double ratio = double(hi) / double(lo);
    for (int i = 0; i < points; ++i) {
        double t = double(i) / double(points - 1);
        g.push_back(u64(std::llround(double(lo) * std::pow(ratio, t))));
    }
    return g;
}

}  // namespace

extern "C" {

mnd5_ctx* mnd5_ctx_new(void) { return new (std::nothrow) mnd5_ctx; }

void mnd5_ctx_free(mnd5_ctx* ctx) { delete ctx; }

int mnd5_ctx_set_threads(mnd5_ctx* ctx, int threads) {
    if (!ctx || threads < 1 || threads > 256) return MND5_EINVAL;
    ctx->threads = threads;
    return MND5_OK;
}

int mnd5_ctx_threads(const mnd5_ctx* ctx) { return ctx ? ctx->threads : 0; }

int mnd5_count(mnd5_ctx* ctx, const char* method, uint64_t B,
               uint64_t* count_out, double* elapsed_ms_out) {
    if (!ctx || !method || !count_out || B == 0) return MND5_EINVAL;
    try {
        CountRecord rec = count_U(B, parse_method(method), ctx->threads);
        *count_out = rec.count;
        if (elapsed_ms_out) *elapsed_ms_out = rec.elapsed_ms;
        return MND5_OK;
    } catch (...) {
        return caught_status();
    }
}

int mnd5_constants_report(mnd5_ctx* ctx, double abs_tol, uint64_t prime_cutoff,
                          char** json_out) {
    if (!ctx || !json_out) return MND5_EINVAL;
    if (!(abs_tol > 0) || abs_tol > 1e-2 || prime_cutoff < 10)
        return MND5_EINVAL;
    try {
        json rep;
        rep["schema"] = 1;
        rep["build"] = MND5_BUILD_ID;

        rep["alpha"] = alpha_exact().to_string();
        rep["simplex_volume"] = simplex_volume_exact().to_string();

        LatticeReport lat = verify_lattice();
        rep["lattice"] = {
            {"symmetric", lat.symmetric},
            {"adjunction_ok", lat.adjunction_ok},
            {"canonical_self_intersection", lat.canonical_self_intersection},
            {"pass", lat.pass}};

        EulerProduct tf = tau_euler(prime_cutoff);
        rep["tau_finite"] = {
            {"value", tf.value}, {"tail", tf.tail}, {"cutoff", tf.cutoff}};

        json omega = json::object();
        for (u64 p : {2, 3, 5, 7}) omega[std::to_string(p)] = omega_p_closed(p);
        rep["omega_p"] = omega;

        TauInfinity ti = tau_infinity(abs_tol);
        rep["tau_infinity"] = {{"value", ti.value}, {"error", ti.error}};
        rep["omega_infinity"] = 12.0 * ti.value;

        LeadingConstant lc = leading_constant(abs_tol, prime_cutoff);
        rep["leading_constant"] = {{"value", lc.value}, {"error", lc.error}};

        *json_out = dup_string(rep.dump());
        return *json_out ? MND5_OK : MND5_EFAIL;
    } catch (...) {
        return caught_status();
    }
}

int mnd5_verify_suite(mnd5_ctx* ctx, const char* suite,
                      const mnd5_verify_cfg* cfg, char** json_out) {
    if (!ctx || !suite || !json_out) return MND5_EINVAL;
    mnd5_verify_cfg c{};
    if (cfg) c = *cfg;
    u64 B = c.B ? c.B : 10000;
    u64 pmax = c.pmax ? c.pmax : 100;
    double budget = c.budget > 0 ? c.budget : 1e9;
    std::string name(suite);
    try {
        std::vector<SuiteResult> suites;
        auto grid = [&](std::vector<u64> dflt) {
            if (c.grid_lo == 0 && c.grid_hi == 0) return dflt;
            int pts = c.grid_points > 0 ? c.grid_points : 9;
            return log_grid(c.grid_lo, c.grid_hi, pts);
        };
        if (name == "lemma-base" || name == "all")
            suites.push_back(verify_lemma_base(B, ctx->threads));
        if (name == "red-1" || name == "all")
            suites.push_back(verify_red1(grid({100, 1000, 10000, 100000}),
                                         ctx->threads));
        if (name == "local-factors" || name == "all")
            suites.push_back(verify_local_factors(
                pmax, c.exponent_cutoff > 0 ? c.exponent_cutoff : 40));
        if (name == "densities" || name == "all")
            suites.push_back(verify_densities(budget));
        if (name == "predictor" || name == "all")
            suites.push_back(verify_predictor(
                grid({1000, 1778, 3162, 5623, 10000, 17783, 31623, 56234,
                      100000}),
                ctx->threads));
        if (suites.empty()) return MND5_EINVAL;

        bool all_pass = true;
        json arr = json::array();
        for (const auto& s : suites) {
            all_pass = all_pass && s.pass;
            arr.push_back(suite_to_json(s));
        }
        json rep;
        rep["schema"] = 1;
        rep["build"] = MND5_BUILD_ID;
        rep["pass"] = all_pass;
        rep["suites"] = arr;
        *json_out = dup_string(rep.dump());
        if (!*json_out) return MND5_EFAIL;
        return all_pass ? MND5_OK : MND5_EFAIL;
    } catch (...) {
        return caught_status();
    }
}

int mnd5_predictor_report(mnd5_ctx* ctx, uint64_t grid_lo, uint64_t grid_hi,
                          int grid_points, const char* format, char** out) {
    if (!ctx || !format || !out) return MND5_EINVAL;
    std::string fm(format);
    if (fm != "jsonl" && fm != "csv") return MND5_EINVAL;
    try {
        std::vector<u64> grid = log_grid(grid_lo, grid_hi, grid_points);
        std::vector<u64> exact;
        for (u64 B : grid)
            exact.push_back(count_U(B, CountMethod::direct, ctx->threads).count);
        DeltaTable dt(grid.back());
        GInterp g;
        PredictorFit fit = predictor_fit(grid, exact, dt, g);

        std::string text;
        if (fm == "csv") {
            text = "B,exact,predictor,residual\n";
            char buf[160];
            for (const auto& p : fit.points) {
                std::snprintf(buf, sizeof buf, "%llu,%llu,%.17g,%.17g\n",
                              (unsigned long long)p.B,
                              (unsigned long long)p.exact, p.predicted,
                              p.residual);
                text += buf;
            }
        } else {
            for (const auto& p : fit.points) {
                json line = {{"schema", 1},      {"build", MND5_BUILD_ID},
                             {"B", p.B},         {"exact", p.exact},
                             {"predictor", p.predicted},
                             {"residual", p.residual}};
                text += line.dump();
                text += '\n';
            }
            json tail = {{"schema", 1},
                         {"build", MND5_BUILD_ID},
                         {"beta_hat", fit.beta_hat},
                         {"residual_exponent", fit.residual_exponent}};
            text += tail.dump();
            text += '\n';
        }
        *out = dup_string(text);
        return *out ? MND5_OK : MND5_EFAIL;
    } catch (...) {
        return caught_status();
    }
}

int mnd5_delta_table_csv(mnd5_ctx* ctx, uint64_t limit, char** csv_out) {
    if (!ctx || !csv_out || limit < 1 || limit > 100000000) return MND5_EINVAL;
    try {
        DeltaTable dt(limit);
        *csv_out = dup_string(dt.csv());
        return *csv_out ? MND5_OK : MND5_EFAIL;
    } catch (...) {
        return caught_status();
    }
}

void mnd5_string_free(char* s) { std::free(s); }

const char* mnd5_build_id(void) { return MND5_BUILD_ID; }

const char* mnd5_status_message(int status) {
    switch (status) {
        case MND5_OK:
            return "ok";
        case MND5_EFAIL:
            return "a verification check failed";
        case MND5_EINVAL:
            return "parameter outside its envelope";
        case MND5_EOVERFLOW:
            return "integer range exceeded";
        case MND5_EQUAD:
            return "quadrature did not reach its tolerance";
        default:
            return "unknown status";
    }
}

}  // extern "C"
