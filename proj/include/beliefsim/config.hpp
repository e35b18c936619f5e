#pragma once

// Flat key=value experiment configuration.
//
//   # comment
//   evidence_counts = 4,7
//   error_ranges    = 0.0,0.4,1.2
//   runs_per_cell   = 20000
//   master_seed     = 42
//   procedures      = proper_bayes,simple_naive,default:2.5
//   strong_band_lo  = 0.6666666666666666
//   strong_band_hi  = 1.5
//   default_threshold = 1.5
//   weighted_cap    = 1.0986122886681098
//   clamp_lo        = 0.05
//   clamp_hi        = 0.95
//   output_dir      = results
//
// master_seed is required; every other key has a default. Unknown keys are
// rejected.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "beliefsim/inference.hpp"

namespace beliefsim {

class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string key, const std::string& message)
        : std::runtime_error(key.empty() ? message : key + ": " + message), key_(std::move(key)) {}

    const std::string& key() const noexcept { return key_; }

private:
    std::string key_;
};

/// Unreadable or unwritable files.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct ClampBounds {
    double lo = 0.05;
    double hi = 0.95;

    friend bool operator==(const ClampBounds&, const ClampBounds&) = default;
};

/// Eleven-point grid 0.0, 0.2, ..., 2.0.
std::vector<double> default_error_grid();

/// proper_bayes ... weighted_linear plus a bare "default".
std::vector<std::string> default_procedure_names();

struct ExperimentConfig {
    std::vector<int> evidence_counts{4, 7};
    std::vector<double> error_ranges = default_error_grid();
    std::size_t runs_per_cell = 20000;
    std::optional<std::uint64_t> master_seed;
    std::vector<std::string> procedure_names = default_procedure_names();
    Band strong_band;
    double default_threshold = 1.5;
    double weighted_cap = kDefaultWeightCap;
    std::optional<ClampBounds> clamp;
    std::string output_dir = "results";

    /// Procedures resolved against the band/threshold/cap keys.
    std::vector<Procedure> procedures() const;

    std::uint64_t seed() const;

    /// Throws ConfigError naming the offending key.
    void validate() const;
};

/// Applies one key=value assignment (used for file lines and overrides).
void apply_setting(ExperimentConfig& config, const std::string& key, const std::string& value);
void apply_override(ExperimentConfig& config, const std::string& assignment);

/// Parses configuration text, applies `overrides` (key=value strings) on
/// top, then validates.
ExperimentConfig parse_config(const std::string& text, const std::vector<std::string>& overrides = {});
ExperimentConfig load_config(const std::string& path, const std::vector<std::string>& overrides = {});

/// Renders a config back to the file format.
std::string format_config(const ExperimentConfig& config);

} // namespace beliefsim
