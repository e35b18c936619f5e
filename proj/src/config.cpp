#include "beliefsim/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

namespace beliefsim {

namespace {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

std::vector<std::string> split_list(const std::string& value) {
    std::vector<std::string> out;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

template <class T>
T parse_scalar(const std::string& key, const std::string& text) {
    T v{};
    const std::string t = trim(text);
    const char* end = t.data() + t.size();
    auto res = std::from_chars(t.data(), end, v);
    if (t.empty() || res.ec != std::errc{} || res.ptr != end) {
        throw ConfigError(key, "cannot parse '" + text + "'");
    }
    return v;
}

std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

} // namespace

std::vector<double> default_error_grid() {
    std::vector<double> grid;
    for (int k = 0; k <= 10; ++k) grid.push_back(k / 5.0);
    return grid;
}

std::vector<std::string> default_procedure_names() {
    return {"proper_bayes",  "simple_naive",  "strong_naive",    "complex_linear",
            "simple_linear", "strong_linear", "weighted_linear", "default"};
}

std::vector<Procedure> ExperimentConfig::procedures() const {
    ProcedureDefaults defaults{strong_band, weighted_cap, default_threshold};
    std::vector<Procedure> out;
    out.reserve(procedure_names.size());
    for (const auto& name : procedure_names) {
        try {
            out.push_back(parse_procedure(name, defaults));
        } catch (const std::invalid_argument& e) {
            throw ConfigError("procedures", e.what());
        }
    }
    return out;
}

std::uint64_t ExperimentConfig::seed() const {
    if (!master_seed) throw ConfigError("master_seed", "required key missing");
    return *master_seed;
}

void ExperimentConfig::validate() const {
    if (!master_seed) throw ConfigError("master_seed", "required key missing");
    if (evidence_counts.empty()) throw ConfigError("evidence_counts", "at least one value required");
    for (int n : evidence_counts) {
        if (n < kMinNodes || n > kMaxNodes) {
            throw ConfigError("evidence_counts", "value " + std::to_string(n) + " outside 1..12");
        }
    }
    if (error_ranges.empty()) throw ConfigError("error_ranges", "at least one value required");
    for (double r : error_ranges) {
        if (!(r >= 0.0 && r <= 2.0)) throw ConfigError("error_ranges", "value " + format_double(r) + " outside [0,2]");
    }
    if (runs_per_cell < 1) throw ConfigError("runs_per_cell", "must be at least 1");
    try {
        strong_band.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError("strong_band_lo", e.what());
    }
    if (!(default_threshold > 1.0)) throw ConfigError("default_threshold", "must exceed 1");
    if (!(weighted_cap > 0.0)) throw ConfigError("weighted_cap", "must be positive");
    if (clamp && !(clamp->lo >= 0.0 && clamp->hi <= 1.0 && clamp->lo < clamp->hi)) {
        throw ConfigError("clamp_lo", "clamp bounds require 0 <= clamp_lo < clamp_hi <= 1");
    }
    if (output_dir.empty()) throw ConfigError("output_dir", "must not be empty");
    (void)procedures();
}

void apply_setting(ExperimentConfig& config, const std::string& key, const std::string& raw) {
    const std::string value = trim(raw);
    if (key == "evidence_counts") {
        config.evidence_counts.clear();
        for (const auto& item : split_list(value)) config.evidence_counts.push_back(parse_scalar<int>(key, item));
    } else if (key == "error_ranges") {
        config.error_ranges.clear();
        for (const auto& item : split_list(value)) config.error_ranges.push_back(parse_scalar<double>(key, item));
    } else if (key == "runs_per_cell") {
        config.runs_per_cell = parse_scalar<std::size_t>(key, value);
    } else if (key == "master_seed") {
        config.master_seed = parse_scalar<std::uint64_t>(key, value);
    } else if (key == "procedures") {
        config.procedure_names = split_list(value);
    } else if (key == "strong_band_lo") {
        config.strong_band.lower = parse_scalar<double>(key, value);
    } else if (key == "strong_band_hi") {
        config.strong_band.upper = parse_scalar<double>(key, value);
    } else if (key == "default_threshold") {
        config.default_threshold = parse_scalar<double>(key, value);
    } else if (key == "weighted_cap") {
        config.weighted_cap = parse_scalar<double>(key, value);
    } else if (key == "clamp_lo" || key == "clamp_hi") {
        if (value == "none" || value.empty()) {
            config.clamp.reset();
            return;
        }
        if (!config.clamp) config.clamp = ClampBounds{};
        (key == "clamp_lo" ? config.clamp->lo : config.clamp->hi) = parse_scalar<double>(key, value);
    } else if (key == "output_dir") {
        config.output_dir = value;
    } else {
        throw ConfigError(key, "unknown key");
    }
}

void apply_override(ExperimentConfig& config, const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos) throw ConfigError(trim(assignment), "override must have the form key=value");
    apply_setting(config, trim(assignment.substr(0, eq)), assignment.substr(eq + 1));
}

ExperimentConfig parse_config(const std::string& text, const std::vector<std::string>& overrides) {
    ExperimentConfig config;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("", "line " + std::to_string(lineno) + ": expected key=value");
        }
        apply_setting(config, trim(line.substr(0, eq)), line.substr(eq + 1));
    }
    for (const auto& o : overrides) apply_override(config, o);
    config.validate();
    return config;
}

ExperimentConfig load_config(const std::string& path, const std::vector<std::string>& overrides) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str(), overrides);
}

std::string format_config(const ExperimentConfig& config) {
    std::ostringstream out;
    auto join = [](const auto& values, auto fmt) {
        std::string s;
        for (const auto& v : values) {
            if (!s.empty()) s += ',';
            s += fmt(v);
        }
        return s;
    };
    out << "evidence_counts = " << join(config.evidence_counts, [](int v) { return std::to_string(v); }) << '\n';
    out << "error_ranges = " << join(config.error_ranges, format_double) << '\n';
    out << "runs_per_cell = " << config.runs_per_cell << '\n';
    if (config.master_seed) out << "master_seed = " << *config.master_seed << '\n';
    out << "procedures = " << join(config.procedure_names, [](const std::string& s) { return s; }) << '\n';
    out << "strong_band_lo = " << format_double(config.strong_band.lower) << '\n';
    out << "strong_band_hi = " << format_double(config.strong_band.upper) << '\n';
    out << "default_threshold = " << format_double(config.default_threshold) << '\n';
    out << "weighted_cap = " << format_double(config.weighted_cap) << '\n';
    if (config.clamp) {
        out << "clamp_lo = " << format_double(config.clamp->lo) << '\n';
        out << "clamp_hi = " << format_double(config.clamp->hi) << '\n';
    }
    out << "output_dir = " << config.output_dir << '\n';
    return out.str();
}

} // namespace beliefsim
