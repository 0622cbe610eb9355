#pragma once

// Scenario front end: flat key-value configuration files, closed-form and
// master-equation runs over a scaled-time grid, CSV emission and the
// complementarity scan. All user-facing time is tau = lambda t.

#include <optional>
#include <string>
#include <vector>

#include "rydbec/lindblad.hpp"

namespace rydbec {

enum class ScenarioMode { closed_coherent, closed_general, lindblad };

struct TauGrid {
    double start = 0.0;
    double stop = 0.0;
    int points = 0;
};

struct ScenarioConfig {
    ScenarioMode mode = ScenarioMode::closed_coherent;
    SystemParams params;
    double theta = 0.0;
    // Initial mode state: a coherent amplitude or an explicit Fock vector.
    std::optional<Complex> alpha;
    std::vector<Complex> bec_amplitudes;
    TauGrid tau_grid;
    bool raw_time = false;  // grid given as raw t instead of tau = lambda t
    std::optional<int> fock_cutoff;  // unset: cutoff rule for alpha
    IntegratorConfig integrator;
    std::vector<std::string> outputs;  // subset of the TimeSeries columns
    std::string output_path;

    void validate() const;
};

// Optional command-line overrides applied on top of a parsed config.
struct ScenarioOverrides {
    std::optional<int> cutoff;
    std::optional<double> dt;
    std::optional<double> tau_max;
    std::optional<int> points;
    std::optional<double> kappa;
    std::optional<bool> raw_time;
    std::optional<std::string> output;
};

void apply_overrides(ScenarioConfig& config, const ScenarioOverrides& o);

struct TimeSeriesRow {
    double tau = 0.0;
    std::optional<double> c_mimi, c_mima, residual;
    std::optional<double> neg_mimi, neg_mima, trace, purity;
};

struct TimeSeries {
    std::vector<TimeSeriesRow> rows;
};

// Throws ConfigError naming the offending field.
ScenarioConfig parse_config_file(const std::string& path);
ScenarioConfig parse_config_text(const std::string& text);

TimeSeries run_scenario(const ScenarioConfig& config);

// CSV with header tau,c_mimi,c_mima,residual,neg_mimi,neg_mima,trace,purity;
// missing observables are empty cells; 15 significant digits.
std::string to_csv(const TimeSeries& series);
void emit_csv(const TimeSeries& series, const std::string& path);

struct ComplementarityReport {
    bool identity_expected = true;   // kappa == 0
    double max_residual = 0.0;       // max |C1^2 + C2^2 - C1^2(0)| over grid
    double tau_at_max = 0.0;
    // For kappa > 0: descriptive scan of N1^2 + N2^2 - N1^2(0).
    bool has_negativity_scan = false;
    double max_neg_residual = 0.0;
    double tau_at_neg_max = 0.0;
};

ComplementarityReport check_complementarity(const ScenarioConfig& config);

// Figure presets. Each run yields one CSV file in the output directory.
struct PresetRun {
    std::string filename;
    ScenarioConfig config;
};

std::vector<PresetRun> preset_runs(const std::string& name);
std::vector<std::string> run_preset(const std::string& name,
                                    const std::string& out_dir,
                                    const ScenarioOverrides& overrides = {});

}  // namespace rydbec
