// Command line front end over the C interface: exact point counts, the
// leading-constant report, and the named verification suites.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>
#include <manin_d5.h>

using json = nlohmann::ordered_json;

namespace {

struct GridSpec {
    uint64_t lo = 0, hi = 0;
    int points = 9;
    bool set = false;
};

// lo:hi[:points], each bound a positive number, scientific notation allowed
bool parse_grid(const std::string& text, GridSpec& g) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (true) {
        std::size_t colon = text.find(':', start);
        parts.push_back(text.substr(start, colon - start));
        if (colon == std::string::npos) break;
        start = colon + 1;
    }
    if (parts.size() < 2 || parts.size() > 3) return false;
    try {
        double lo = std::stod(parts[0]);
        double hi = std::stod(parts[1]);
        if (!(lo >= 2) || !(hi > lo) || hi > 1e18) return false;
        g.lo = uint64_t(lo + 0.5);
        g.hi = uint64_t(hi + 0.5);
        if (parts.size() == 3) {
            g.points = std::stoi(parts[2]);
            if (g.points < 3 || g.points > 1000) return false;
        }
    } catch (...) {
        return false;
    }
    g.set = true;
    return true;
}

int emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::fputs(text.c_str(), stdout);
        return 0;
    }
    std::ofstream f(out_path, std::ios::binary);
    if (!f) {
        std::fprintf(stderr, "error: cannot open %s\n", out_path.c_str());
        return MND5_EINVAL;
    }
    f << text;
    return f.good() ? 0 : MND5_EINVAL;
}

int default_threads() {
    const char* env = std::getenv("MANIN_D5_THREADS");
    if (!env) return 1;
    int t = std::atoi(env);
    return (t >= 1 && t <= 256) ? t : 1;
}

int report_status(int st) {
    if (st != MND5_OK)
        std::fprintf(stderr, "error: %s\n", mnd5_status_message(st));
    return st;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"point counts and constant verification for a quartic del "
                 "Pezzo surface with a D5 singularity"};
    app.require_subcommand(1);

    std::string method = "direct";
    uint64_t B = 0;
    std::string grid_text;
    double tol = 1e-8;
    uint64_t prime_cutoff = 100000;
    int exponent_cutoff = 40;
    int threads = default_threads();
    std::string out_path;
    std::string format = "json";
    std::string suite = "all";

    auto* count = app.add_subcommand("count", "exact point counts");
    count->add_option("--method", method, "naive, direct, or torsor");
    count->add_option("--B", B, "single height bound");
    count->add_option("--grid", grid_text, "lo:hi[:points], log spaced");
    count->add_option("--threads", threads, "worker count");
    count->add_option("--out", out_path, "output file (default stdout)");
    count->add_option("--format", format, "json or csv");

    auto* consts = app.add_subcommand("constants", "leading constant report");
    consts->add_option("--tol", tol, "quadrature tolerance");
    consts->add_option("--prime-cutoff", prime_cutoff, "Euler product cutoff");
    consts->add_option("--threads", threads, "worker count");
    consts->add_option("--out", out_path, "output file (default stdout)");
    consts->add_option("--format", format, "json or csv");

    auto* verify = app.add_subcommand("verify", "named check suites");
    verify->add_option("--suite", suite,
                       "lemma-base, red-1, local-factors, densities, "
                       "predictor, or all");
    verify->add_option("--B", B, "lemma-base bound");
    verify->add_option("--grid", grid_text, "red-1 and predictor bound grid");
    auto* pmax_opt = verify->add_option("--prime-cutoff,--pmax", prime_cutoff,
                                        "local-factors prime cutoff");
    verify->add_option("--exponent-cutoff", exponent_cutoff,
                       "local-factors series truncation");
    verify->add_option("--threads", threads, "worker count");
    verify->add_option("--out", out_path, "output file (default stdout)");
    verify->add_option("--format", format,
                       "json, or csv (predictor: fit table)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : MND5_EINVAL;
    }

    GridSpec grid;
    if (!grid_text.empty() && !parse_grid(grid_text, grid)) {
        std::fprintf(stderr, "error: bad grid %s\n", grid_text.c_str());
        return MND5_EINVAL;
    }
    if (format != "json" && format != "csv" && format != "jsonl") {
        std::fprintf(stderr, "error: bad format %s\n", format.c_str());
        return MND5_EINVAL;
    }

    mnd5_ctx* ctx = mnd5_ctx_new();
    if (!ctx) return MND5_EFAIL;
    if (report_status(mnd5_ctx_set_threads(ctx, threads)) != MND5_OK) {
        mnd5_ctx_free(ctx);
        return MND5_EINVAL;
    }

    int rc = 0;
    if (*count) {
        std::vector<uint64_t> bounds;
        if (grid.set) {
            double ratio = double(grid.hi) / double(grid.lo);
            for (int i = 0; i < grid.points; ++i) {
                double t = double(i) / double(grid.points - 1);
                bounds.push_back(
                    uint64_t(std::llround(double(grid.lo) * std::pow(ratio, t))));
            }
        } else {
            bounds.push_back(B);
        }
        std::string text = format == "csv" ? "B,method,count\n" : "";
        for (uint64_t b : bounds) {
            uint64_t n = 0;
            double ms = 0;
            int st = mnd5_count(ctx, method.c_str(), b, &n, &ms);
            if (st != MND5_OK) {
                rc = report_status(st);
                break;
            }
            std::fprintf(stderr, "count method=%s B=%llu elapsed_ms=%.1f\n",
                         method.c_str(), (unsigned long long)b, ms);
            if (format == "csv") {
                text += std::to_string(b) + "," + method + "," +
                        std::to_string(n) + "\n";
            } else {
                json line = {{"schema", 1},
                             {"build", mnd5_build_id()},
                             {"B", b},
                             {"method", method},
                             {"count", n}};
                text += line.dump();
                text += '\n';
            }
        }
        if (rc == 0) rc = emit(text, out_path);
    } else if (*consts) {
        char* rep = nullptr;
        int st = mnd5_constants_report(ctx, tol, prime_cutoff, &rep);
        if (st != MND5_OK) {
            rc = report_status(st);
        } else if (format == "csv") {
            json j = json::parse(rep);
            std::string text = "name,value\n";
            char buf[64];
            for (auto it = j.begin(); it != j.end(); ++it) {
                if (it.value().is_number()) {
                    std::snprintf(buf, sizeof buf, "%.17g",
                                  it.value().get<double>());
                    text += it.key() + "," + buf + "\n";
                } else if (it.value().is_string()) {
                    text += it.key() + ",\"" +
                            it.value().get<std::string>() + "\"\n";
                } else if (it.value().is_object()) {
                    for (auto jt = it.value().begin(); jt != it.value().end();
                         ++jt) {
                        if (!jt.value().is_number()) continue;
                        std::snprintf(buf, sizeof buf, "%.17g",
                                      jt.value().get<double>());
                        text += it.key() + "." + jt.key() + "," + buf + "\n";
                    }
                }
            }
            rc = emit(text, out_path);
        } else {
            rc = emit(std::string(rep) + "\n", out_path);
        }
        mnd5_string_free(rep);
    } else {
        mnd5_verify_cfg cfg{};
        cfg.B = B;
        cfg.pmax = pmax_opt->count() ? prime_cutoff : 100;
        cfg.grid_lo = grid.set ? grid.lo : 0;
        cfg.grid_hi = grid.set ? grid.hi : 0;
        cfg.grid_points = grid.set ? grid.points : 0;
        cfg.exponent_cutoff = exponent_cutoff;

        if (suite == "predictor" && format != "json") {
            uint64_t lo = grid.set ? grid.lo : 1000;
            uint64_t hi = grid.set ? grid.hi : 100000;
            int pts = grid.set ? grid.points : 9;
            char* rep = nullptr;
            int st = mnd5_predictor_report(ctx, lo, hi, pts, format.c_str(),
                                           &rep);
            if (st != MND5_OK)
                rc = report_status(st);
            else
                rc = emit(rep, out_path);
            mnd5_string_free(rep);
        } else {
            char* rep = nullptr;
            int st = mnd5_verify_suite(ctx, suite.c_str(), &cfg, &rep);
            if (st != MND5_OK && st != MND5_EFAIL) {
                rc = report_status(st);
            } else {
                std::string text;
                if (format == "csv") {
                    json j = json::parse(rep);
                    text = "suite,check,value,bound,pass,note\n";
                    char buf[64];
                    for (const auto& s : j["suites"]) {
                        for (const auto& c : s["checks"]) {
                            std::snprintf(buf, sizeof buf, "%.17g",
                                          c["value"].get<double>());
                            text += s["suite"].get<std::string>() + "," +
                                    c["name"].get<std::string>() + "," + buf;
                            std::snprintf(buf, sizeof buf, ",%.17g,",
                                          c["bound"].get<double>());
                            text += buf;
                            text += c["pass"].get<bool>() ? "1" : "0";
                            text += ",\"" + c["note"].get<std::string>() +
                                    "\"\n";
                        }
                    }
                } else {
                    text = std::string(rep) + "\n";
                }
                rc = emit(text, out_path);
                if (rc == 0 && st == MND5_EFAIL) {
                    json j = json::parse(rep);
                    for (const auto& s : j["suites"])
                        for (const auto& c : s["checks"])
                            if (!c["pass"].get<bool>())
                                std::fprintf(
                                    stderr, "failed: %s/%s value=%g bound=%g\n",
                                    s["suite"].get<std::string>().c_str(),
                                    c["name"].get<std::string>().c_str(),
                                    c["value"].get<double>(),
                                    c["bound"].get<double>());
                    rc = MND5_EFAIL;
                }
            }
            mnd5_string_free(rep);
        }
    }

    mnd5_ctx_free(ctx);
    return rc;
}
