#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace lnabla {

/// Settings for a verification run. Defaults reproduce the standard CI
/// invocation; a config file and command-line flags override them in
/// that order.
struct VerifyConfig {
    std::vector<std::string> suites; // empty means every suite
    std::vector<int> dims = {3, 4};
    int seeds = 50;
    std::uint64_t seed_base = 1;
    double tol_mult = 1.0;
    int order = 4;
    int jobs = 0; // 0: library default thread count
    bool timing = false;
    std::string format = "human";
    std::string output; // empty: stdout

    // catalog overrides: generator spec templates used by the random
    // families (a "seed" parameter, when present, is re-derived per case)
    std::string metric_spec = "random_metric";
    std::string connection_spec = "random_connection";
    std::string diffeo_spec = "random_diffeo";
};

/// Applies one "key = value" setting; unknown keys raise UsageError.
void apply_config_entry(VerifyConfig& cfg, const std::string& key, const std::string& value);

/// Plain-text config file: one "key = value" per line, '#' comments.
VerifyConfig load_config_file(const std::string& path, VerifyConfig base = {});

std::vector<int> parse_int_list(const std::string& text);
std::vector<std::string> parse_name_list(const std::string& text);

} // namespace lnabla
