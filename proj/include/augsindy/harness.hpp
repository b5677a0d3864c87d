#pragma once

#include "augsindy/causal.hpp"
#include "augsindy/metrics.hpp"
#include "augsindy/timeseries.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace augsindy {

enum class ExperimentKind { LynxHare, SardineAnchovy, DualUncertainty };
ExperimentKind parse_experiment(const std::string& text);
std::string to_string(ExperimentKind kind);

// Experiments control false admissions across the whole mask: one spurious
// admission anywhere already makes the cell's FPIV nonzero. Null tests stop
// early, and long simulated series are tested on a thinned grid.
inline ScreeningConfig experiment_screening_defaults() {
    ScreeningConfig s;
    s.correction = Correction::Holm;
    s.per_target = false;
    s.stop_after = 10;
    s.max_rows = 1000;
    return s;
}

/// Everything one experiment run depends on. Zero or empty fields mean
/// "use the experiment's default" and are filled in by resolve().
struct ExperimentConfig {
    ExperimentKind experiment = ExperimentKind::LynxHare;
    NoiseMode noise_mode = NoiseMode::MatchedMoments;
    std::vector<double> lambdas;
    int trials = 10;
    std::uint64_t seed = 0;
    std::string output;

    // Dual-uncertainty only.
    std::string system;
    int n_missing = 0;
    double t_end = 0.0;  // 0: the system's default horizon
    double dt = 0.0;     // 0: the system's default step
    int basis_sparsity = 0;
    double code_threshold = 0.0;
    int basis_max_iter = 0;

    int n_noise = 2;
    std::string data_dir;
    int library_degree = 0;
    std::string differentiation;
    bool trim_endpoints = true;
    bool standardize = true;
    // Unset: off for the real datasets, on for simulated systems.
    std::optional<bool> normalize_target;
    ScreeningConfig screening = experiment_screening_defaults();
    int screening_degree = 0;
    // Derivative estimate the permutation tests run on. Smoothing estimators
    // make neighbouring rows dependent, which the row-permutation null ignores.
    std::string screening_differentiation = "central";
};

ExperimentConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const ExperimentConfig& cfg);
ExperimentConfig load_config(const std::filesystem::path& path);

// Fills experiment defaults and validates; throws a config error on bad input.
ExperimentConfig resolve(ExperimentConfig cfg);

/// start * ratio^i for i = 0..count-1, each rounded to four decimals.
std::vector<double> lambda_schedule(double start, double ratio, int count);

// Seed of the (trial, lambda index) cell.
std::uint64_t cell_seed(std::uint64_t master, int trial, int lambda_index);

struct ReportPair {
    MetricReport baseline;
    MetricReport augmented;
    ExperimentConfig config;  // resolved
};

// Data directory: the configured one, else $AUGSINDY_DATA_DIR, else the
// fixtures shipped with the sources.
std::filesystem::path resolve_data_dir(const ExperimentConfig& cfg);

ReportPair run_variable_uncertainty(const ExperimentConfig& cfg);
ReportPair run_dual_uncertainty(const ExperimentConfig& cfg);
ReportPair run_experiment(const ExperimentConfig& cfg);

std::string pair_to_csv(const ReportPair& pair);
std::string pair_to_text(const ReportPair& pair);
nlohmann::json manifest(const ReportPair& pair);
// Parses the sections of pair_to_csv, keyed by pipeline name.
std::map<std::string, MetricReport> reports_from_csv(const std::string& text);

// report.csv, report.txt and manifest.json under `dir`.
void write_outputs(const ReportPair& pair, const std::filesystem::path& dir);

/// Everything one dual-uncertainty cell produced, for inspection.
struct DualCell {
    SparseModel truth;
    SparseModel baseline;
    SparseModel augmented;
    std::vector<std::string> withheld;
    AtomAssignment assignment;
    double fdes_baseline = 0.0;
    double fdes_augmented = 0.0;
};

DualCell run_dual_cell(const ExperimentConfig& resolved, double lambda, std::uint64_t seed);

struct VariableCell {
    SparseModel plain;
    SparseModel augmented;
    CausalMask mask;
    std::vector<std::string> variables;
    double fpiv_plain = 0.0;
    double fpiv_augmented = 0.0;
};

VariableCell run_variable_cell(const ExperimentConfig& resolved, const TimeSeries& data, double lambda,
                               std::uint64_t seed);

// Loads the fixture of a real-data experiment.
TimeSeries load_dataset(const ExperimentConfig& cfg);

}  // namespace augsindy
