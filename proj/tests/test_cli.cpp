#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>

#include <json.hpp>

#include "lnabla/config.hpp"
#include "lnabla/error.hpp"
#include "lnabla/suites.hpp"

using namespace lnabla;

namespace {

VerifyConfig tiny_config() {
    VerifyConfig cfg;
    cfg.suites = {"lemma2", "geometry_oracles"};
    cfg.dims = {3};
    cfg.seeds = 2;
    return cfg;
}

} // namespace

TEST_CASE("config entries and files") {
    VerifyConfig cfg;
    apply_config_entry(cfg, "suites", "lemma1, palatini");
    apply_config_entry(cfg, "dims", "3");
    apply_config_entry(cfg, "seeds", "7");
    apply_config_entry(cfg, "tol-mult", "2.5");
    apply_config_entry(cfg, "metric", "random_metric(amplitude=0.1)");
    CHECK(cfg.suites == std::vector<std::string>{"lemma1", "palatini"});
    CHECK(cfg.dims == std::vector<int>{3});
    CHECK(cfg.seeds == 7);
    CHECK(cfg.tol_mult == 2.5);
    CHECK(cfg.metric_spec == "random_metric(amplitude=0.1)");
    CHECK_THROWS_AS(apply_config_entry(cfg, "bogus", "1"), UsageError);
    CHECK_THROWS_AS(apply_config_entry(cfg, "seeds", "many"), UsageError);

    const char* path = "test_cli_config.tmp";
    {
        std::ofstream out(path);
        out << "# comment line\n"
            << "suites = lemma2\n"
            << "seeds = 3   # trailing comment\n"
            << "format = json\n";
    }
    const VerifyConfig loaded = load_config_file(path);
    std::remove(path);
    CHECK(loaded.suites == std::vector<std::string>{"lemma2"});
    CHECK(loaded.seeds == 3);
    CHECK(loaded.format == "json");
    CHECK_THROWS_AS(load_config_file("does_not_exist.cfg"), UsageError);
}

TEST_CASE("unknown suites and dimensions are usage errors") {
    VerifyConfig cfg = tiny_config();
    cfg.suites = {"nonsense"};
    CHECK_THROWS_AS(run_suites(cfg), UsageError);
    cfg = tiny_config();
    cfg.dims = {2};
    CHECK_THROWS_AS(run_suites(cfg), UsageError);
}

TEST_CASE("suite names are the documented ten") {
    const auto& names = suite_names();
    REQUIRE(names.size() == 10);
    CHECK(names.front() == "lemma1");
    CHECK(names.back() == "geometry_oracles");
}

TEST_CASE("report emission formats") {
    CheckReport r;
    r.suite = "lemma2";
    r.check = "divergence_identity";
    r.inputs.metric = "random_metric(seed=5)";
    r.inputs.connection = "random_connection(seed=6)";
    r.inputs.seed = 42;
    r.inputs.n = 3;
    r.inputs.order = 4;
    r.inputs.base_point = {0.0, 0.0, 0.0};
    r.residual = 1.5e-12;
    r.tolerance = 1e-9;
    r.pass = true;
    const std::vector<CheckReport> reports{r};

    SUBCASE("json key order is fixed and the line parses back") {
        const std::string body = emit_reports(reports, ReportFormat::json);
        CHECK(body.find("{\"suite\":\"lemma2\",\"check\":\"divergence_identity\",\"inputs\":{\"metric\":") == 0);
        const auto parsed = nlohmann::ordered_json::parse(body.substr(0, body.find('\n')));
        CHECK(parsed["residual"].get<double>() == r.residual);
        CHECK(parsed["inputs"]["seed"].get<std::uint64_t>() == 42);
        CHECK(parsed["pass"].get<bool>());
        // field order exactly as documented
        std::vector<std::string> keys;
        for (auto it = parsed.begin(); it != parsed.end(); ++it) keys.push_back(it.key());
        CHECK(keys == std::vector<std::string>{"suite", "check", "inputs", "residual", "tolerance", "pass",
                                               "runtime_ms"});
    }

    SUBCASE("csv has a header and one row") {
        const std::string body = emit_reports(reports, ReportFormat::csv);
        CHECK(body.find("suite,check,metric,connection,diffeo,seed,n,order,base_point,residual,"
                        "tolerance,pass,runtime_ms\n") == 0);
        CHECK(body.find("lemma2,divergence_identity,") != std::string::npos);
        CHECK(body.find("0;0;0") != std::string::npos);
    }

    SUBCASE("human format and the empty summary") {
        const std::string body = emit_reports(reports, ReportFormat::human);
        CHECK(body.find("PASS lemma2") == 0);
        CHECK(emit_reports({}, ReportFormat::json).empty());
        CHECK(emit_reports({}, ReportFormat::csv) ==
              "suite,check,metric,connection,diffeo,seed,n,order,base_point,residual,tolerance,pass,runtime_ms\n");
        CHECK(summary_line({}) == "0 checks");
        const std::string empty_human = emit_reports({}, ReportFormat::human);
        CHECK(empty_human == "0 checks\n");
    }

    SUBCASE("one failing check is counted") {
        CheckReport bad = r;
        bad.pass = false;
        bad.residual = 1.0;
        const std::vector<CheckReport> mixed{r, bad};
        CHECK(summary_line(mixed) == "2 checks, 1 failed");
        CHECK(!all_pass(mixed));
    }

    CHECK_THROWS_AS(parse_format("xml"), UsageError);
}

TEST_CASE("runs are deterministic and runner-independent") {
    const VerifyConfig cfg = tiny_config();
    const SuiteRun a = run_suites(cfg);
    const SuiteRun b = run_suites(cfg);
    const SuiteRun c = run_suites_serial(cfg);
    CHECK(a.faults.empty());
    REQUIRE(!a.reports.empty());
    const std::string ja = emit_reports(a.reports, ReportFormat::json);
    CHECK(ja == emit_reports(b.reports, ReportFormat::json));
    CHECK(ja == emit_reports(c.reports, ReportFormat::json));
    CHECK(all_pass(a.reports));
}

TEST_CASE("a different base seed changes the cases but stays reproducible") {
    VerifyConfig cfg = tiny_config();
    cfg.suites = {"lemma2"};
    const std::string a = emit_reports(run_suites(cfg).reports, ReportFormat::json);
    cfg.seed_base = 7;
    const std::string b = emit_reports(run_suites(cfg).reports, ReportFormat::json);
    const std::string b2 = emit_reports(run_suites(cfg).reports, ReportFormat::json);
    CHECK(a != b);
    CHECK(b == b2);
}

TEST_CASE("catalog overrides flow into the generated cases") {
    VerifyConfig cfg = tiny_config();
    cfg.suites = {"lemma2"};
    cfg.seeds = 1;
    cfg.metric_spec = "random_metric(amplitude=0.05,minus=1)";
    const SuiteRun run = run_suites(cfg);
    REQUIRE(!run.reports.empty());
    CHECK(run.reports[0].inputs.metric.find("amplitude=0.05") != std::string::npos);
    CHECK(run.reports[0].inputs.metric.find("minus=1") != std::string::npos);
    CHECK(all_pass(run.reports));
}

TEST_CASE("tolerance multiplier rescales the gates") {
    VerifyConfig cfg = tiny_config();
    cfg.suites = {"lemma2"};
    cfg.seeds = 1;
    cfg.tol_mult = 1e6;
    const SuiteRun run = run_suites(cfg);
    for (const auto& r : run.reports) CHECK(r.tolerance >= 1e-9 * 1e6 * 0.999);
}
