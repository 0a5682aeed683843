#include "lnabla/report.hpp"

#include <algorithm>
#include <sstream>

#include <json.hpp>

#include "lnabla/catalog.hpp"
#include "lnabla/error.hpp"

namespace lnabla {

ReportFormat parse_format(const std::string& name) {
    if (name == "json") return ReportFormat::json;
    if (name == "csv") return ReportFormat::csv;
    if (name == "human") return ReportFormat::human;
    throw UsageError("unknown report format: " + name + " (expected json, csv or human)");
}

namespace {

nlohmann::ordered_json to_json(const CheckReport& r) {
    nlohmann::ordered_json j;
    j["suite"] = r.suite;
    j["check"] = r.check;
    nlohmann::ordered_json in;
    in["metric"] = r.inputs.metric;
    in["connection"] = r.inputs.connection;
    in["diffeo"] = r.inputs.diffeo;
    in["seed"] = r.inputs.seed;
    in["n"] = r.inputs.n;
    in["order"] = r.inputs.order;
    in["base_point"] = r.inputs.base_point;
    j["inputs"] = std::move(in);
    j["residual"] = r.residual;
    j["tolerance"] = r.tolerance;
    j["pass"] = r.pass;
    j["runtime_ms"] = r.runtime_ms;
    return j;
}

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

std::string join_point(const std::vector<double>& p) {
    std::string out;
    for (size_t i = 0; i < p.size(); ++i) {
        if (i) out += ';';
        out += format_double(p[i]);
    }
    return out;
}

std::string emit_csv(std::span<const CheckReport> reports) {
    std::string out =
        "suite,check,metric,connection,diffeo,seed,n,order,base_point,residual,tolerance,pass,runtime_ms\n";
    for (const auto& r : reports) {
        out += csv_escape(r.suite);
        out += ',';
        out += csv_escape(r.check);
        out += ',';
        out += csv_escape(r.inputs.metric);
        out += ',';
        out += csv_escape(r.inputs.connection);
        out += ',';
        out += csv_escape(r.inputs.diffeo);
        out += ',';
        out += std::to_string(r.inputs.seed);
        out += ',';
        out += std::to_string(r.inputs.n);
        out += ',';
        out += std::to_string(r.inputs.order);
        out += ',';
        out += join_point(r.inputs.base_point);
        out += ',';
        out += format_double(r.residual);
        out += ',';
        out += format_double(r.tolerance);
        out += ',';
        out += r.pass ? "true" : "false";
        out += ',';
        out += format_double(r.runtime_ms);
        out += '\n';
    }
    return out;
}

std::string emit_human(std::span<const CheckReport> reports) {
    std::ostringstream os;
    size_t suite_w = 5, check_w = 5;
    for (const auto& r : reports) {
        suite_w = std::max(suite_w, r.suite.size());
        check_w = std::max(check_w, r.check.size());
    }
    for (const auto& r : reports) {
        os << (r.pass ? "PASS " : "FAIL ");
        os << r.suite;
        os.write("                                                            ",
                 static_cast<std::streamsize>(suite_w + 2 - r.suite.size()));
        os << r.check;
        os.write("                                                            ",
                 static_cast<std::streamsize>(check_w + 2 - r.check.size()));
        os << "n=" << r.inputs.n << " seed=" << r.inputs.seed << " residual=" << format_double(r.residual)
           << " tol=" << format_double(r.tolerance);
        if (r.runtime_ms > 0.0) os << " (" << format_double(r.runtime_ms) << " ms)";
        os << '\n';
    }
    os << summary_line(reports) << '\n';
    return os.str();
}

} // namespace

std::string emit_reports(std::span<const CheckReport> reports, ReportFormat format) {
    switch (format) {
    case ReportFormat::json: {
        std::string out;
        for (const auto& r : reports) {
            out += to_json(r).dump();
            out += '\n';
        }
        return out;
    }
    case ReportFormat::csv:
        return emit_csv(reports);
    case ReportFormat::human:
        return emit_human(reports);
    }
    throw StructureError("bad report format");
}

std::string summary_line(std::span<const CheckReport> reports) {
    size_t failed = 0;
    for (const auto& r : reports)
        if (!r.pass) ++failed;
    std::string out = std::to_string(reports.size()) + " checks";
    if (!reports.empty()) {
        out += ", ";
        out += std::to_string(failed);
        out += " failed";
    }
    return out;
}

bool all_pass(std::span<const CheckReport> reports) {
    for (const auto& r : reports)
        if (!r.pass) return false;
    return true;
}

void sort_reports(std::vector<CheckReport>& reports) {
    std::stable_sort(reports.begin(), reports.end(), [](const CheckReport& a, const CheckReport& b) {
        if (a.suite != b.suite) return a.suite < b.suite;
        if (a.check != b.check) return a.check < b.check;
        if (a.inputs.n != b.inputs.n) return a.inputs.n < b.inputs.n;
        return a.inputs.seed < b.inputs.seed;
    });
}

} // namespace lnabla
