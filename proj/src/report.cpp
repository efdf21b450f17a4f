#include "carleman/report.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace carleman {

std::string fmt17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.16e", x);
    return buf;
}

void write_text_atomic(const std::filesystem::path& path, const std::string& text) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
        if (!os) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
        os << text;
        if (!os.flush()) throw std::runtime_error("write failed: " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

CsvWriter::CsvWriter(std::vector<std::string> header) : columns_(header.size()) {
    for (size_t i = 0; i < header.size(); ++i) {
        if (i) text_ += ',';
        text_ += header[i];
    }
    text_ += '\n';
}

void CsvWriter::row(const std::vector<std::string>& cells) {
    if (cells.size() != columns_) throw std::invalid_argument("CsvWriter: column count mismatch");
    for (size_t i = 0; i < cells.size(); ++i) {
        if (i) text_ += ',';
        for (char c : cells[i]) text_ += (c == ',' || c == '\n') ? ';' : c;
    }
    text_ += '\n';
}

std::string identities_csv(const std::vector<NamedIdentityReport>& reports) {
    CsvWriter csv({"suite", "fields", "direction", "order", "h", "case", "max_abs", "max_rel",
                   "tol_rel", "pass", "gating", "note"});
    for (const auto& r : reports)
        for (const auto& c : r.report.cases)
            csv.row({r.suite, r.fields, std::to_string(r.direction), std::to_string(r.order),
                     fmt17(r.h), c.name, fmt17(c.max_abs), fmt17(c.max_rel), fmt17(c.tol_rel),
                     c.pass ? "1" : "0", c.gating ? "1" : "0", c.note});
    return csv.str();
}

ordered_json identities_json(const std::vector<NamedIdentityReport>& reports) {
    ordered_json out = ordered_json::array();
    for (const auto& r : reports) {
        ordered_json j;
        j["suite"] = r.suite;
        j["fields"] = r.fields;
        j["direction"] = r.direction;
        j["order"] = r.order;
        j["h"] = r.h;
        j["pass"] = r.report.all_pass();
        ordered_json cases = ordered_json::array();
        for (const auto& c : r.report.cases) {
            cases.push_back({{"name", c.name},
                             {"max_abs", c.max_abs},
                             {"max_rel", c.max_rel},
                             {"tol_rel", c.tol_rel},
                             {"pass", c.pass},
                             {"gating", c.gating},
                             {"note", c.note}});
        }
        j["cases"] = std::move(cases);
        out.push_back(std::move(j));
    }
    return out;
}

std::string audits_csv(const std::vector<AuditReport>& reports) {
    CsvWriter csv({"id", "kind", "field", "n", "m", "h", "verdict", "max_discrepancy", "ratio_mean",
                   "ratio_spread", "note"});
    for (const auto& r : reports)
        csv.row({r.id, r.kind, r.field_name, std::to_string(r.n), std::to_string(r.m), fmt17(r.h),
                 to_string(r.verdict), fmt17(r.max_discrepancy), fmt17(r.ratio_mean),
                 fmt17(r.ratio_spread), r.note});
    return csv.str();
}

ordered_json audits_json(const std::vector<AuditReport>& reports) {
    ordered_json out = ordered_json::array();
    for (const auto& r : reports) {
        ordered_json j;
        j["id"] = r.id;
        j["kind"] = r.kind;
        j["field"] = r.field_name;
        j["n"] = r.n;
        j["m"] = r.m;
        j["h"] = r.h;
        j["verdict"] = to_string(r.verdict);
        j["max_discrepancy"] = r.max_discrepancy;
        j["ratio_mean"] = r.ratio_mean;
        j["ratio_spread"] = r.ratio_spread;
        j["note"] = r.note;
        ordered_json rows = ordered_json::array();
        for (const auto& row : r.rows)
            rows.push_back({{"x", row.x},
                            {"defect", row.defect},
                            {"formula", row.formula},
                            {"discrepancy", row.discrepancy},
                            {"ratio", row.ratio},
                            {"quad_error", row.quad_error}});
        j["rows"] = std::move(rows);
        out.push_back(std::move(j));
    }
    return out;
}

std::string convergence_csv(const std::vector<ConvergenceReport>& reports) {
    CsvWriter csv({"claim", "anchor", "mode", "h", "s_or_tau", "dt", "defect", "normalized"});
    for (const auto& r : reports)
        for (const auto& row : r.rows)
            csv.row({r.claim_id, r.anchor, r.mode, fmt17(row.h), fmt17(row.s_or_tau), fmt17(row.dt),
                     fmt17(row.defect), fmt17(row.normalized)});
    return csv.str();
}

ordered_json convergence_json(const std::vector<ConvergenceReport>& reports) {
    ordered_json out = ordered_json::array();
    for (const auto& r : reports) {
        ordered_json j;
        j["claim"] = r.claim_id;
        j["anchor"] = r.anchor;
        j["mode"] = r.mode;
        j["slope"] = r.slope;
        j["intercept"] = r.intercept;
        j["residual"] = r.residual;
        j["expected_slope"] = r.expected_slope;
        j["ratio_max_min"] = r.ratio_max_min;
        j["below_noise"] = r.below_noise;
        j["pass"] = r.pass;
        j["verdict"] = r.verdict;
        j["env"] = r.env_text;
        j["notes"] = r.notes;
        ordered_json rows = ordered_json::array();
        for (const auto& row : r.rows)
            rows.push_back({{"h", row.h},
                            {"s_or_tau", row.s_or_tau},
                            {"dt", row.dt},
                            {"defect", row.defect},
                            {"normalized", row.normalized}});
        j["samples"] = std::move(rows);
        out.push_back(std::move(j));
    }
    return out;
}

std::string counterexample_csv(const ObservabilityReport& report) {
    CsvWriter csv({"M", "h", "alpha_dt", "log10_q0_norm", "omega_norm", "ratio"});
    for (const auto& r : report.rows) {
        csv.row({std::to_string(r.M), fmt17(r.h), fmt17(r.alpha_dt), fmt17(r.log10_q0_norm),
                 r.omega_norm_exact_zero ? "0" : fmt17(r.omega_norm),
                 std::isinf(r.ratio) ? "INF" : fmt17(r.ratio)});
    }
    return csv.str();
}

ordered_json counterexample_json(const ObservabilityReport& report) {
    ordered_json j;
    j["omega"] = report.omega.str();
    j["T"] = report.T;
    j["decay_slope"] = report.decay_slope;
    j["decay_slope_expected"] = report.decay_slope_expected;
    j["decay_residual"] = report.decay_residual;
    j["pass"] = report.pass;
    j["verdict"] = report.verdict;
    ordered_json rows = ordered_json::array();
    for (const auto& r : report.rows) {
        ordered_json row;
        row["M"] = r.M;
        row["h"] = r.h;
        row["alpha_dt"] = r.alpha_dt;
        row["base"] = r.base;
        row["log10_q0_norm"] = r.log10_q0_norm;
        row["omega_norm"] = r.omega_norm;
        row["omega_norm_exact_zero"] = r.omega_norm_exact_zero;
        row["ratio"] = std::isinf(r.ratio) ? ordered_json("INF") : ordered_json(r.ratio);
        row["log10_ratio_0_T"] = r.log10_ratio_0_T;
        row["scheme_residual"] = r.scheme_residual;
        row["eigen_residual"] = r.eigen_residual;
        rows.push_back(std::move(row));
    }
    j["rows"] = std::move(rows);
    return j;
}

} // namespace carleman
