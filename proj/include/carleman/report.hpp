#pragma once

// Report serialization: CSV sample tables and JSON verdict documents, both
// deterministic byte-for-byte for a fixed configuration and seed. Numbers are
// printed with 17 significant digits ('.' decimal, scientific), which
// round-trips doubles exactly.

#include "carleman/claims.hpp"
#include "carleman/counterexample.hpp"
#include "carleman/ops.hpp"
#include "carleman/remainders.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <string>
#include <vector>

namespace carleman {

using ordered_json = nlohmann::ordered_json;

/// %.16e (17 significant digits), locale-independent.
std::string fmt17(double x);

/// Writes via a temporary file + rename so readers never observe a partial
/// report.
void write_text_atomic(const std::filesystem::path& path, const std::string& text);

class CsvWriter {
public:
    explicit CsvWriter(std::vector<std::string> header);
    void row(const std::vector<std::string>& cells);
    const std::string& str() const { return text_; }

private:
    size_t columns_;
    std::string text_;
};

/// A named identity suite (one report per (u,v) field pair and operator
/// configuration).
struct NamedIdentityReport {
    std::string suite; // e.g. "product_rules"
    std::string fields;
    int direction = 0;
    int order = 0;
    double h = 0.0;
    IdentityReport report;
};

std::string identities_csv(const std::vector<NamedIdentityReport>& reports);
ordered_json identities_json(const std::vector<NamedIdentityReport>& reports);

std::string audits_csv(const std::vector<AuditReport>& reports);
ordered_json audits_json(const std::vector<AuditReport>& reports);

std::string convergence_csv(const std::vector<ConvergenceReport>& reports);
ordered_json convergence_json(const std::vector<ConvergenceReport>& reports);

std::string counterexample_csv(const ObservabilityReport& report);
ordered_json counterexample_json(const ObservabilityReport& report);

} // namespace carleman
