#pragma once

#include "clipofdm/csv.hpp"
#include "clipofdm/ofdm.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace clipofdm {

enum class Experiment { DemoFrame, EvmSweep, EvmBound, Sdr, RateSurface, RateOptimal, Channel };

std::string_view to_string(Experiment e);
Experiment parse_experiment(std::string_view name);

/// Raised for configuration problems; `field` names the offending key.
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string field, const std::string& message)
        : std::runtime_error(field + ": " + message), field_(std::move(field))
    {
    }
    const std::string& field() const { return field_; }

private:
    std::string field_;
};

/// Flat key=value settings. Later assignments override earlier ones, which is
/// how command-line flags take precedence over a config file.
class Settings {
public:
    void set(const std::string& key, const std::string& value);
    std::optional<std::string> get(const std::string& key) const;
    bool has(const std::string& key) const { return values_.count(key) != 0; }
    const std::map<std::string, std::string>& values() const { return values_; }

    /// Parses "key = value" lines; '#' starts a comment.
    static Settings parse(std::string_view text);
    void merge(const Settings& other);

private:
    std::map<std::string, std::string> values_;
};

/// Parses a grid: "first:step:last", a comma list, or a single number.
std::vector<double> parse_grid(const std::string& field, const std::string& text);

struct ExperimentConfig {
    Experiment experiment = Experiment::EvmSweep;
    Scheme scheme = Scheme::DCO;
    std::size_t n = 512;
    std::size_t num_symbols = 1000;
    std::uint64_t seed = 1;
    std::vector<double> gamma_db;
    std::vector<double> varsigma;
    std::vector<double> eta_osnr_db;
    std::optional<double> eta_dsnr_db;    // rate-surface
    std::optional<double> ratio_db;       // rate-optimal; nullopt = no DSNR limit
    bool ceiling_channel = false;
    double delay_spread = 10e-9;
    double sample_rate = 100e6;
    std::string out;

    /// Fills defaults per experiment, then applies settings. Throws ConfigError.
    static ExperimentConfig from_settings(const Settings& s);
};

struct Preset {
    std::string name;
    std::string figure;
    std::string description;
    Settings settings;
};

const std::vector<Preset>& presets();
const Preset& find_preset(const std::string& name);

struct ExperimentOutput {
    CsvTable table;
    std::string summary;
};

ExperimentOutput run_experiment(const ExperimentConfig& cfg);

} // namespace clipofdm
