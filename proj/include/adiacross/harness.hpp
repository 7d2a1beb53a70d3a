#pragma once

// epsilon sweeps of the adiabatic error, power-law fits and CSV/SVG export.

#include "adiacross/evolve.hpp"
#include "adiacross/model.hpp"

#include <string>
#include <vector>

namespace adiacross {

struct EpsGrid {
    double eps_max{1e-1};
    double eps_min{3e-3};
    int points{8};

    // Geometric grid, descending from eps_max to eps_min.
    std::vector<double> values() const;
};

struct SweepConfig {
    ModelSpec spec{ModelSpec::rwa(1.0, 1.0, 16)};
    EpsGrid eps_grid;
    double s_start{-0.45};
    double s_end{0.45};
    Metric metric{Metric::vector_deviation};
    bool bound_overlay{false};
    std::string output_dir{"."};
    // Reserved; the pipeline is deterministic.
    long seed{0};
    Integrator integrator{Integrator::exp_midpoint};
    double c_step{0.1};
    // Fit window [fit_eps_min, fit_eps_max]; both zero selects the lower half
    // of the grid (the smallest max(ceil(points/2), 4) values).
    double fit_eps_min{0.0};
    double fit_eps_max{0.0};
    // Crossings entering the bound overlay on each side.
    int ledger_k_min{3};
    int ledger_k_max{16};
    // Wall time is machine dependent; off keeps the CSV byte-reproducible.
    bool record_timing{false};
    // Worker threads; 0 uses the hardware concurrency.
    int threads{0};

    void validate() const;

    // JSON document with the field names above; "spec" holds omega0, Omega,
    // kind, rho0 (or rho {offset, slope}), chirp {offset, slope}, n_modes,
    // theta_grid. Missing fields keep their defaults, unknown ones throw.
    static SweepConfig from_json(const std::string& text);
    std::string to_json() const;
};

struct SweepRow {
    double eps{0.0};
    double error{0.0};
    double transition_prob{0.0};
    // NaN / 0 when no bound row exists for this eps.
    double bound_value{0.0};
    int K_minus{0};
    int K_plus{0};
    long steps{0};
    double wall_time{0.0};
    std::vector<std::string> flags;
    std::string diagnostics;

    bool flagged() const { return !flags.empty(); }
};

struct PowerFit {
    double p_hat{0.0};
    double log_prefactor{0.0};
    double r_squared{0.0};
    double stderr_p{0.0};
    int n_used{0};
    double eps_lo{0.0};
    double eps_hi{0.0};
    std::vector<std::string> notes;
    bool valid{false};
};

struct BoundRow {
    double eps{0.0};
    int K_minus{0};
    int K_plus{0};
    double bound_value{0.0};
};

struct SweepResult {
    std::vector<SweepRow> rows;  // eps descending
    PowerFit fit;
    std::vector<BoundRow> bound_rows;
    // error / bound_value on the largest-eps row with a bound.
    double calibrated_C{0.0};
    bool overlay_holds{false};
    std::string config_echo;
};

SweepResult run_sweep(const SweepConfig& cfg);

// OLS of log(error) on log(eps) over rows with eps in [eps_lo, eps_hi]
// (0 disables a side). Flagged rows and rows with error <= 0 are excluded.
// Throws std::invalid_argument with fewer than four usable rows.
PowerFit fit_power_law(const std::vector<SweepRow>& rows, double eps_lo = 0.0,
                       double eps_hi = 0.0);
PowerFit fit_power_law(const std::vector<double>& eps, const std::vector<double>& error);

// Default window of cfg applied to the grid values.
void default_fit_window(const SweepConfig& cfg, double& eps_lo, double& eps_hi);

std::string csv_header();
std::string to_csv(const SweepResult& result);
void export_csv(const SweepResult& result, const std::string& path);
std::vector<SweepRow> parse_sweep_csv(const std::string& text);

// Fit parameters, window and overlay calibration as key=value lines.
std::string fit_summary(const SweepResult& result);

std::string to_svg(const SweepResult& result);
void render_svg(const SweepResult& result, const std::string& path);

}  // namespace adiacross
