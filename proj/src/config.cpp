#include "lnabla/config.hpp"

#include <charconv>
#include <fstream>

#include "lnabla/error.hpp"

namespace lnabla {

namespace {

std::string trim(const std::string& s) {
    size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

long parse_long(const std::string& v, const std::string& key) {
    long out = 0;
    const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || p != v.data() + v.size())
        throw UsageError("bad integer for config key '" + key + "': " + v);
    return out;
}

double parse_real(const std::string& v, const std::string& key) {
    double out = 0.0;
    const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || p != v.data() + v.size())
        throw UsageError("bad number for config key '" + key + "': " + v);
    return out;
}

bool parse_bool(const std::string& v, const std::string& key) {
    if (v == "true" || v == "1" || v == "on") return true;
    if (v == "false" || v == "0" || v == "off") return false;
    throw UsageError("bad boolean for config key '" + key + "': " + v);
}

} // namespace

std::vector<int> parse_int_list(const std::string& text) {
    std::vector<int> out;
    std::string cur;
    for (char ch : text + ",") {
        if (ch == ',') {
            const std::string item = trim(cur);
            if (!item.empty()) out.push_back(static_cast<int>(parse_long(item, "list")));
            cur.clear();
        } else {
            cur += ch;
        }
    }
    return out;
}

std::vector<std::string> parse_name_list(const std::string& text) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : text + ",") {
        if (ch == ',') {
            const std::string item = trim(cur);
            if (!item.empty()) out.push_back(item);
            cur.clear();
        } else {
            cur += ch;
        }
    }
    return out;
}

void apply_config_entry(VerifyConfig& cfg, const std::string& key, const std::string& value) {
    if (key == "suites")
        cfg.suites = parse_name_list(value);
    else if (key == "dims")
        cfg.dims = parse_int_list(value);
    else if (key == "seeds")
        cfg.seeds = static_cast<int>(parse_long(value, key));
    else if (key == "seed-base" || key == "seed")
        cfg.seed_base = static_cast<std::uint64_t>(parse_long(value, key));
    else if (key == "tol-mult" || key == "tol")
        cfg.tol_mult = parse_real(value, key);
    else if (key == "order")
        cfg.order = static_cast<int>(parse_long(value, key));
    else if (key == "jobs")
        cfg.jobs = static_cast<int>(parse_long(value, key));
    else if (key == "timing")
        cfg.timing = parse_bool(value, key);
    else if (key == "format")
        cfg.format = value;
    else if (key == "output")
        cfg.output = value;
    else if (key == "metric")
        cfg.metric_spec = value;
    else if (key == "connection")
        cfg.connection_spec = value;
    else if (key == "diffeo")
        cfg.diffeo_spec = value;
    else
        throw UsageError("unknown config key: " + key);
}

VerifyConfig load_config_file(const std::string& path, VerifyConfig base) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open config file: " + path);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        const std::string text = trim(line);
        if (text.empty()) continue;
        const auto eq = text.find('=');
        if (eq == std::string::npos)
            throw UsageError("config line " + std::to_string(lineno) + " is not key = value");
        apply_config_entry(base, trim(text.substr(0, eq)), trim(text.substr(eq + 1)));
    }
    return base;
}

} // namespace lnabla
