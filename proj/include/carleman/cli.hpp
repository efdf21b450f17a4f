#pragma once

// Command execution behind the CLI front end: claim selection, environment
// configuration, report emission. Kept apart from argument parsing so runs
// are scriptable from tests (determinism is asserted by running twice and
// comparing bytes).

#include "carleman/claims.hpp"
#include "carleman/counterexample.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace carleman::cli {

struct RunConfig {
    std::string command; // identities | audit-remainders | converge | bounded-ratio |
                         // disambiguate | counterexample | all
    std::vector<std::string> claim_ids; // empty = command defaults

    WeightSpec spec;             // lambda, s, tau, delta, T, psi preset
    std::vector<double> h_levels;  // strictly decreasing; default 2^-4 .. 2^-9
    std::vector<double> s_values;  // bounded-ratio grid; default {1,2,4,8,16,32}
    double s_fixed = 2.0;          // fixed-s fit value (tau for time-dependent claims)
    std::string s_policy = "fixed_s"; // fixed_s | fixed_sh
    double sh_target = 0.5;           // fixed_sh policy target
    double dt_coupling = 1.0;         // dt = coupling * h^2 for time-stepped claims

    std::vector<int> M_list{7, 15, 31, 63};
    IndexRect omega{1, 2, 5, 6}; // avoids the diagonal for every default M
    double T_counterexample = 1.0;
    double alpha_dt = 0.5;

    std::filesystem::path out_dir = "reports";
    std::string format = "both"; // csv | json | both
    unsigned seed = 0;
    int points = 50;
    int audit_points = 20;
    int parallelism = 1;

    void validate() const; // throws std::invalid_argument
};

/// Exit status: 0 all selected verdicts pass, 1 verification failure,
/// 2 configuration error. Reports are written atomically under out_dir.
/// Diagnostic lines go to `log` (one per suite, plus failures).
int run(const RunConfig& config, std::ostream& log);

/// Default dyadic level set 2^-4 .. 2^-9.
std::vector<double> default_h_levels();

} // namespace carleman::cli
