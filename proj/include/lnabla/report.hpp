#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace lnabla {

/// Inputs that reproduce one check: generator spec strings (empty when a
/// kind of input is not used), the derived case seed, dimension, jet
/// order and base point.
struct CheckInputs {
    std::string metric;
    std::string connection;
    std::string diffeo;
    std::uint64_t seed = 0;
    int n = 0;
    int order = 0;
    std::vector<double> base_point;
};

/// One verified identity: the unit of CLI output.
struct CheckReport {
    std::string suite;
    std::string check;
    CheckInputs inputs;
    double residual = 0.0;
    double tolerance = 0.0;
    bool pass = false;
    double runtime_ms = 0.0;
};

enum class ReportFormat { json, csv, human };

ReportFormat parse_format(const std::string& name);

/// json: newline-delimited objects with fixed key order;
/// csv: header plus one row per check; human: aligned table.
std::string emit_reports(std::span<const CheckReport> reports, ReportFormat format);

/// "N checks, M failed" plus per-suite counts.
std::string summary_line(std::span<const CheckReport> reports);

bool all_pass(std::span<const CheckReport> reports);

/// Stable ordering of report rows (suite, check, n, seed).
void sort_reports(std::vector<CheckReport>& reports);

} // namespace lnabla
