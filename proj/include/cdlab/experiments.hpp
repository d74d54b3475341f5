#pragma once

// Batch experiments behind the command-line tool: config parsing and validation,
// the experiment catalogue, and the report / CSV writers.

#include <cdlab/common.hpp>
#include <cdlab/identities.hpp>

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace cdlab::experiments {

/// Invalid configuration; field() is the dotted path of the offending entry.
class ConfigError : public Error {
public:
    ConfigError(std::string field, const std::string& message)
        : Error(field + ": " + message), field_(std::move(field)) {}
    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

struct GridConfig {
    double half_width = 2.0;
    int points_per_axis = 21;
};

/// Values that replace the local_scaling estimates when present.
struct Pins {
    std::optional<double> eta;
    std::optional<double> beta;
    std::optional<double> sigma_minus;
    std::optional<double> sigma_plus;
};

struct ExperimentConfig {
    std::string experiment;
    std::string measure;
    std::map<std::string, double> measure_params;
    double xi = 0.0;
    std::vector<double> n_values;
    GridConfig grid;
    double tolerance = 0.05;
    /// Tolerance for zero-ratio laws.
    double zero_tolerance = 0.02;
    std::uint64_t seed = 1;
    std::string output_dir = "cdlab_out";
    Pins pins;
};

std::vector<std::string> experiment_names();

/// Defaults for one experiment; throws ConfigError("experiment", ...) if unknown.
ExperimentConfig default_config(const std::string& experiment);

/// Parses JSON text: "experiment" is required, every other field falls back to
/// default_config(experiment). Unknown keys and bad values raise ConfigError.
ExperimentConfig parse_config(const std::string& json_text);

struct ReportLine {
    /// Name of the result being checked.
    std::string result;
    std::string check;
    double value = 0.0;
    double bound = 0.0;
    /// "<=", ">=", "in" (bound..bound_high), "==".
    std::string relation = "<=";
    double bound_high = 0.0;
    bool passed = false;
};

struct KernelTable {
    double index = 0.0;
    std::vector<KernelSample> samples;
};

struct ZeroRow {
    int n = 0;
    int k = 0;
    double zero = 0.0;
    double scaled_zero = 0.0;
};

struct ExperimentResult {
    ExperimentConfig config;
    bool passed = false;
    std::vector<ReportLine> lines;
    /// Fitted constants, estimates and diagnostics, in insertion order.
    std::vector<std::pair<std::string, double>> values;
    std::vector<std::string> notes;
    std::vector<KernelTable> kernels;
    std::vector<ZeroRow> zeros;
};

ExperimentResult run_experiment(const ExperimentConfig& config, int jobs = 1);

/// report.txt, report.json, kernel_<index>.csv per index, zeros.csv when present.
void write_artifacts(const ExperimentResult& result, const std::filesystem::path& dir);

/// Numbers with 17 significant digits.
std::string format_number(double x);

}  // namespace cdlab::experiments
