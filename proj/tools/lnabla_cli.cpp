#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "lnabla/catalog.hpp"
#include "lnabla/config.hpp"
#include "lnabla/hamiltonian.hpp"
#include "lnabla/suites.hpp"

namespace {

using namespace lnabla;

nlohmann::ordered_json jet_to_json(const JetPoly& j) {
    nlohmann::ordered_json out;
    out["dim"] = j.dim();
    out["order"] = j.order();
    std::vector<std::vector<int>> monomials;
    const auto& ly = j.layout();
    for (int r = 0; r < j.size(); ++r) {
        std::vector<int> alpha(static_cast<size_t>(j.dim()));
        for (int i = 0; i < j.dim(); ++i) alpha[static_cast<size_t>(i)] = ly.mono[static_cast<size_t>(r)][static_cast<size_t>(i)];
        monomials.push_back(std::move(alpha));
    }
    out["monomials"] = monomials;
    std::vector<double> coeffs(static_cast<size_t>(j.size()));
    for (int r = 0; r < j.size(); ++r) coeffs[static_cast<size_t>(r)] = j[r];
    out["coeffs"] = coeffs;
    return out;
}

nlohmann::ordered_json metric_to_json(const CatalogSpec& spec) {
    const MetricJet g = make_metric(spec);
    nlohmann::ordered_json out;
    out["spec"] = spec.to_string();
    out["n"] = g.n();
    out["order"] = g.order();
    out["signature"] = {{"plus", g.signature().plus}, {"minus", g.signature().minus}};
    out["base_point"] = spec.base_point();
    nlohmann::ordered_json comps;
    for (int i = 0; i < g.n(); ++i)
        for (int j = i; j < g.n(); ++j)
            comps["g_" + std::to_string(i) + "_" + std::to_string(j)] = jet_to_json(g.at(i, j));
    out["components"] = std::move(comps);
    return out;
}

nlohmann::ordered_json connection_to_json(const CatalogSpec& spec) {
    const ConnectionJet c = make_connection(spec);
    nlohmann::ordered_json out;
    out["spec"] = spec.to_string();
    out["n"] = c.n();
    out["order"] = c.order();
    nlohmann::ordered_json comps;
    for (int i = 0; i < c.n(); ++i)
        for (int j = 0; j < c.n(); ++j)
            for (int k = j; k < c.n(); ++k)
                comps["C_" + std::to_string(i) + "_" + std::to_string(j) + std::to_string(k)] =
                    jet_to_json(c.at(i, j, k));
    out["components"] = std::move(comps);
    return out;
}

nlohmann::ordered_json hessian_to_json(const CatalogSpec& spec) {
    const MetricJet g = make_metric(spec);
    const int n = g.n();
    std::vector<double> y0(static_cast<size_t>(sym_pair_count(n)));
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) y0[static_cast<size_t>(sym_pair_index(n, i, j))] = g.value(i, j);
    const HessianMatrix h = hessian_closed_form(y0, n, g.signature());
    nlohmann::ordered_json out;
    out["spec"] = spec.to_string();
    out["n"] = n;
    out["rows"] = h.rows;
    out["row_order"] = "((i,j),k) lexicographic with i <= j";
    std::vector<std::vector<double>> m(static_cast<size_t>(h.rows));
    for (int r = 0; r < h.rows; ++r) {
        m[static_cast<size_t>(r)].resize(static_cast<size_t>(h.rows));
        for (int c = 0; c < h.rows; ++c) m[static_cast<size_t>(r)][static_cast<size_t>(c)] = h.at(r, c);
    }
    out["matrix"] = m;
    return out;
}

nlohmann::ordered_json momenta_to_json(const CatalogSpec& mspec, const CatalogSpec& cspec) {
    const MetricJet g = make_metric(mspec);
    const ConnectionJet c = make_connection(cspec);
    const MomentaTable t = momenta(g, c);
    nlohmann::ordered_json out;
    out["metric"] = mspec.to_string();
    out["connection"] = cspec.to_string();
    out["n"] = t.n;
    out["rows"] = t.rows();
    out["row_order"] = "((i,j),k) lexicographic with i <= j";
    out["p"] = t.p;
    out["y0"] = t.y0;
    out["rho0"] = t.rho0;
    return out;
}

int run_verify(const VerifyConfig& cfg) {
    const ReportFormat format = parse_format(cfg.format);
    const SuiteRun run = run_suites(cfg);
    const std::string body = emit_reports(run.reports, format);
    if (cfg.output.empty()) {
        std::cout << body;
    } else {
        std::ofstream out(cfg.output, std::ios::binary);
        if (!out) throw UsageError("cannot open output file: " + cfg.output);
        out << body;
    }
    // the human body already ends with the summary
    if (format != ReportFormat::human || !cfg.output.empty())
        std::cerr << summary_line(run.reports) << '\n';
    if (!run.faults.empty()) {
        for (const auto& f : run.faults) std::cerr << "internal fault: " << f << '\n';
        return 3;
    }
    return all_pass(run.reports) ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"pointwise verification engine for the first-order equivalent of the "
                 "Einstein-Hilbert Lagrangian"};
    app.require_subcommand(1);

    auto* verify = app.add_subcommand("verify", "run check suites and emit a report");
    std::string config_path;
    std::vector<std::string> suites;
    std::vector<int> dims;
    int seeds = 0;
    std::uint64_t seed_base = 0;
    double tol_mult = 0.0;
    int order = 0;
    int jobs = -1;
    std::string format, output;
    bool timing = false;
    auto* opt_config = verify->add_option("--config", config_path, "config file (key = value lines)");
    auto* opt_suite = verify->add_option("--suite", suites, "suites to run (default: all)")->delimiter(',');
    auto* opt_n = verify->add_option("--n", dims, "dimensions to test")->delimiter(',');
    auto* opt_seeds = verify->add_option("--seeds", seeds, "seeded cases per suite and dimension");
    auto* opt_seed = verify->add_option("--seed", seed_base, "base seed");
    auto* opt_tol = verify->add_option("--tol", tol_mult, "global tolerance multiplier");
    auto* opt_order = verify->add_option("--order", order, "jet truncation order");
    auto* opt_format = verify->add_option("--format", format, "json, csv or human");
    auto* opt_output = verify->add_option("--output", output, "write the report body to a file");
    auto* opt_jobs = verify->add_option("--jobs", jobs, "worker threads (0: hardware default)");
    auto* opt_timing = verify->add_flag("--timing", timing, "measure per-check wall time");

    auto* catalog = app.add_subcommand("catalog", "list generators and their parameters");

    auto* dump = app.add_subcommand("dump", "print a generated object as JSON");
    std::string dump_metric, dump_connection, dump_what = "metric";
    int dump_n = 4, dump_order = 4;
    dump->add_option("--metric", dump_metric, "metric spec");
    dump->add_option("--connection", dump_connection, "connection spec");
    dump->add_option("--what", dump_what, "metric, connection, hessian or momenta");
    dump->add_option("--n", dump_n, "dimension");
    dump->add_option("--order", dump_order, "jet order");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (verify->parsed()) {
            lnabla::VerifyConfig cfg;
            if (opt_config->count()) cfg = lnabla::load_config_file(config_path, cfg);
            if (opt_suite->count()) cfg.suites = suites;
            if (opt_n->count()) cfg.dims = dims;
            if (opt_seeds->count()) cfg.seeds = seeds;
            if (opt_seed->count()) cfg.seed_base = seed_base;
            if (opt_tol->count()) cfg.tol_mult = tol_mult;
            if (opt_order->count()) cfg.order = order;
            if (opt_format->count()) cfg.format = format;
            if (opt_output->count()) cfg.output = output;
            if (opt_jobs->count()) cfg.jobs = jobs;
            if (opt_timing->count()) cfg.timing = timing;
            return run_verify(cfg);
        }
        if (catalog->parsed()) {
            for (const auto& line : lnabla::catalog_listing()) std::cout << line << '\n';
            return 0;
        }
        if (dump->parsed()) {
            using lnabla::CatalogSpec;
            nlohmann::ordered_json out;
            if (dump_what == "metric") {
                out = metric_to_json(CatalogSpec::parse(dump_metric, dump_n, dump_order));
            } else if (dump_what == "connection") {
                out = connection_to_json(CatalogSpec::parse(dump_connection, dump_n, dump_order));
            } else if (dump_what == "hessian") {
                out = hessian_to_json(CatalogSpec::parse(dump_metric, dump_n, dump_order));
            } else if (dump_what == "momenta") {
                out = momenta_to_json(CatalogSpec::parse(dump_metric, dump_n, dump_order),
                                      CatalogSpec::parse(dump_connection.empty() ? "flat_connection"
                                                                                 : dump_connection,
                                                         dump_n, dump_order));
            } else {
                throw lnabla::UsageError("unknown dump target: " + dump_what);
            }
            std::cout << out.dump(2) << '\n';
            return 0;
        }
    } catch (const lnabla::UsageError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal fault: " << e.what() << '\n';
        return 3;
    }
    return 2;
}
