#pragma once
// Named check suites shared by the verification command and the acceptance
// harness.  Each check compares one measured quantity against a fixed bound
// and carries a short diagnostic note.

#include <string>
#include <vector>

#include "arith.hpp"

namespace mnd5 {

struct CheckResult {
    std::string name;
    double value = 0;  // measured quantity
    double bound = 0;  // threshold it must not exceed
    bool pass = false;
    std::string note;
};

struct SuiteResult {
    std::string suite;
    std::vector<CheckResult> checks;
    bool pass = true;
    void add(CheckResult c);
};

// the counting bijection: torsor count equals the direct count at B, and
// the projective count splits as 2 * direct + degenerate on small bounds
SuiteResult verify_lemma_base(u64 B, int threads = 1);

// scaled residual of the point count after removing the doubled direct
// count and the linear degenerate term
SuiteResult verify_red1(const std::vector<u64>& grid, int threads = 1);

// closed local factors at s = 0, series truncations against their tails,
// and the per-prime product identity tying them to the p-adic densities
SuiteResult verify_local_factors(u64 pmax, int exponent_cutoff = 40);

// scaled solution counts mod p^r against the limiting density, with the
// exponent range fixed by a p^{4r} <= budget rule
SuiteResult verify_densities(double budget = 1e9);

// residual exponent of the main-term predictor over a grid of bounds
SuiteResult verify_predictor(const std::vector<u64>& grid, int threads = 1);

// the five suites above with their default configurations
std::vector<SuiteResult> verify_all(int threads = 1);

}  // namespace mnd5
