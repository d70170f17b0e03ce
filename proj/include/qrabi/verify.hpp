// verify.hpp - Cross-validation suite: one section per release criterion

#pragma once

#include <string>
#include <vector>

#include <json.hpp>

namespace qrabi::verify {

struct SectionResult {
    std::string name;
    bool pass;
    bool skipped;
    nlohmann::json details;
    double seconds;
};

struct Options {
    int oracle_n1 = 300;          // smaller Fock cutoff
    int oracle_n2 = 400;          // larger Fock cutoff
    double match_tol = 1e-6;      // analytic vs numeric energy agreement
    double stabilize_tol = 1e-8;  // movement between the two cutoffs
    int nmax_oracle = 5;          // levels per branch in the matching sections
    int nmax_residual = 10;       // levels per branch in the residual section
    int param_sets = 10;          // random parameter draws per family
    int grid_points = 1000;       // x samples per branch in the equivalence scan
    unsigned long long seed = 20260822ull;
    std::vector<std::string> skip;  // section-name prefixes to mark skipped
};

// Sections in fixed order: oracle_match, lower_window, identities, residuals,
// norms, growth, whittaker, continuum.
std::vector<SectionResult> run_all(const Options& opt = {});

std::string report_json(const std::vector<SectionResult>& results);

SectionResult check_oracle_match(const Options& opt);
SectionResult check_lower_window(const Options& opt);
SectionResult check_identities(const Options& opt);
SectionResult check_residuals(const Options& opt);
SectionResult check_norms(const Options& opt);
SectionResult check_growth(const Options& opt);
SectionResult check_whittaker(const Options& opt);
SectionResult check_continuum(const Options& opt);

} // namespace qrabi::verify
