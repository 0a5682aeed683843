// Compares the serial reference runner with the OpenMP worker pool on the
// same configuration and verifies that both produce byte-identical
// reports.
#include <chrono>
#include <iostream>

#include <CLI11.hpp>

#include "lnabla/suites.hpp"

int main(int argc, char** argv) {
    CLI::App app{"benchmark: serial reference runner vs worker pool"};
    lnabla::VerifyConfig cfg;
    cfg.suites = {"lemma2"};
    cfg.seeds = 20;
    int repeat = 3;
    app.add_option("--suite", cfg.suites, "suites to time")->delimiter(',');
    app.add_option("--n", cfg.dims, "dimensions")->delimiter(',');
    app.add_option("--seeds", cfg.seeds, "seeded cases per suite and dimension");
    app.add_option("--jobs", cfg.jobs, "worker threads for the parallel runner");
    app.add_option("--repeat", repeat, "timing repetitions");
    CLI11_PARSE(app, argc, argv);

    using clock = std::chrono::steady_clock;
    const auto time_one = [&](auto&& runner) {
        double best = 1e300;
        std::string body;
        for (int r = 0; r < repeat; ++r) {
            const auto t0 = clock::now();
            const lnabla::SuiteRun run = runner(cfg);
            const auto t1 = clock::now();
            best = std::min(best, std::chrono::duration<double>(t1 - t0).count());
            body = emit_reports(run.reports, lnabla::ReportFormat::json);
        }
        return std::pair<double, std::string>(best, std::move(body));
    };

    const auto [serial_s, serial_body] = time_one(lnabla::run_suites_serial);
    const auto [parallel_s, parallel_body] = time_one(lnabla::run_suites);

    std::cout << "serial:   " << serial_s << " s\n";
    std::cout << "parallel: " << parallel_s << " s\n";
    std::cout << "speedup:  " << serial_s / parallel_s << "x\n";
    if (serial_body != parallel_body) {
        std::cout << "MISMATCH: parallel reports differ from the serial reference\n";
        return 1;
    }
    std::cout << "reports identical across runners (" << serial_body.size() << " bytes)\n";
    return 0;
}
