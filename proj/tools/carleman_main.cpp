// Command-line front end for the discrete weight-calculus verifier.
//
//   carleman identities
//   carleman converge --claims prop3.3 --s 2
//   carleman counterexample --M 7,15,31,63 --omega 1:2,5:6
//   carleman all --out reports --seed 0
//
// Options may also come from a key=value config file (--config); explicit
// flags win over file values.

#include "carleman/cli.hpp"

#include <CLI11.hpp>

#include <iostream>

namespace {

using carleman::cli::RunConfig;

std::vector<double> parse_h_spec(const std::string& text) {
    // "2^-4..2^-9" (dyadic range) or a comma list of reals.
    std::vector<double> out;
    const auto dots = text.find("..");
    auto parse_one = [](const std::string& tok) -> double {
        if (tok.rfind("2^", 0) == 0) return std::ldexp(1.0, std::stoi(tok.substr(2)));
        return std::stod(tok);
    };
    if (dots != std::string::npos) {
        const double a = parse_one(text.substr(0, dots));
        const double b = parse_one(text.substr(dots + 2));
        for (double h = a; h >= b * 0.999999; h /= 2.0) out.push_back(h);
        return out;
    }
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) out.push_back(parse_one(tok));
    return out;
}

carleman::IndexRect parse_omega(const std::string& text) {
    // "i0:i1,j0:j1"
    carleman::IndexRect r;
    if (std::sscanf(text.c_str(), "%d:%d,%d:%d", &r.i0, &r.i1, &r.j0, &r.j1) != 4)
        throw CLI::ValidationError("--omega expects i0:i1,j0:j1");
    return r;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Numerical verification of the discrete Carleman weight calculus"};
    app.set_config("--config", "", "key=value configuration file (flags win)");
    app.require_subcommand(1);

    RunConfig cfg;
    std::string h_spec, s_list, omega_spec, m_list;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--out", cfg.out_dir, "report directory")->capture_default_str();
        sub->add_option("--format", cfg.format, "csv|json|both")->capture_default_str();
        sub->add_option("--seed", cfg.seed, "quasi-random point-set seed")->capture_default_str();
        sub->add_option("--points", cfg.points, "defect sample points per claim")
            ->capture_default_str();
        sub->add_option("--parallelism", cfg.parallelism, "worker threads for claim-level runs")
            ->capture_default_str();
        sub->add_option("--lambda", cfg.spec.lambda, "weight parameter lambda")
            ->capture_default_str();
        sub->add_option("--s", cfg.s_fixed, "fixed s for convergence fits")->capture_default_str();
        sub->add_option("--tau", cfg.spec.tau, "tau for time-dependent claims")
            ->capture_default_str();
        sub->add_option("--delta", cfg.spec.delta, "theta(t) parameter delta")
            ->capture_default_str();
        sub->add_option("--T", cfg.spec.T, "time horizon for time-dependent claims")
            ->capture_default_str();
        sub->add_option("--claims", cfg.claim_ids, "claim ids (default: per-command set)")
            ->delimiter(',');
        sub->add_option("--h-levels", h_spec, "h levels: '2^-4..2^-9' or comma list");
        sub->add_option("--s-list", s_list, "bounded-ratio s grid (comma list)");
        sub->add_option("--s-policy", cfg.s_policy, "fixed_s | fixed_sh")->capture_default_str();
        sub->add_option("--sh-target", cfg.sh_target, "s*h target for fixed_sh")
            ->capture_default_str();
        sub->add_option("--audit-points", cfg.audit_points, "points per remainder audit")
            ->capture_default_str();
    };

    for (const char* name : {"identities", "audit-remainders", "converge", "bounded-ratio",
                             "disambiguate", "all"}) {
        add_common(app.add_subcommand(name));
    }
    auto* ce = app.add_subcommand("counterexample");
    add_common(ce);
    ce->add_option("--M", m_list, "interior sizes, comma list (default 7,15,31,63)");
    ce->add_option("--omega", omega_spec, "observation rectangle i0:i1,j0:j1");
    ce->add_option("--T-final", cfg.T_counterexample, "time horizon")->capture_default_str();
    ce->add_option("--alpha-dt", cfg.alpha_dt, "target alpha*dt in (0,1)")->capture_default_str();
    // the demo options are accepted by `all` too
    auto* all_cmd = app.get_subcommand("all");
    all_cmd->add_option("--M", m_list, "counter-example interior sizes");
    all_cmd->add_option("--omega", omega_spec, "counter-example observation rectangle");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        cfg.command = app.get_subcommands().front()->get_name();
        if (!h_spec.empty()) cfg.h_levels = parse_h_spec(h_spec);
        if (!s_list.empty()) cfg.s_values = parse_h_spec(s_list);
        if (!omega_spec.empty()) cfg.omega = parse_omega(omega_spec);
        if (!m_list.empty()) {
            cfg.M_list.clear();
            std::stringstream ss(m_list);
            std::string tok;
            while (std::getline(ss, tok, ',')) cfg.M_list.push_back(std::stoi(tok));
        }
        cfg.spec.s = cfg.s_fixed >= 1.0 ? cfg.s_fixed : cfg.spec.s;
    } catch (const std::exception& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 2;
    }

    return carleman::cli::run(cfg, std::cout);
}
