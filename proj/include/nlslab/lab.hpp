#pragma once

#include <optional>
#include <string>
#include <vector>

#include "nlslab/diagnostics.hpp"
#include "nlslab/evolution.hpp"
#include "nlslab/ground_state.hpp"
#include "nlslab/profile_fit.hpp"

namespace nlslab {

enum class InitialKind {
    ground_state,
    scaled_ground_state,  // (1 + alpha) Q
    gaussian,
    pconf_blowup,         // S(t_start), d=1
    snapshot,
};

// Declarative description of one run, parsed from a flat key = value file
// (units spelled in key names, e.g. t_end_s).
struct ExperimentSpec {
    std::string name = "run";
    int dim = 1;
    double grid_L = 30.0;
    std::size_t grid_N = 1024;

    InitialKind initial = InitialKind::ground_state;
    double alpha = 0.0;        // scaled_ground_state, in (-0.5, 0.5)
    double amplitude = 1.0;    // gaussian
    double width_len = 2.0;    // gaussian
    double pconf_t_start = -1.0;
    std::string snapshot_path;

    SolverConfig solver;
    double record_every_s = 0.0;
    double snap_every_s = 0.0;

    TruncationParams trunc;
    int fit_last = 5;          // snapshots to fit against Q in the report
    std::uint64_t seed = 1;
    std::string out_dir = ".";
};

ExperimentSpec parse_spec_file(const std::string& path);
ExperimentSpec parse_spec_text(const std::string& text, const std::string& origin);

// Focusing-scale time series extracted from trajectory rows.
struct ScaleSeries {
    std::vector<double> t;
    std::vector<double> lambda;
};
ScaleSeries scale_series(const std::vector<DiagRow>& rows);

// Least-squares fit of lambda(t)^2 = a (T - t) over the final decade of the
// series; scaling-equivariant: (t, lambda) -> (mu^2 t, mu lambda) maps
// T -> mu^2 T exactly.
double estimate_blowup_time(const ScaleSeries& series);

struct LogLogReport {
    double beta;                // fitted exponent in lambda ~ (T-t)^beta
    double power_residual;      // RMS log residual of the pure power law
    double corrected_residual;  // RMS residual of the sqrt((T-t)/lnln) model
    bool loglog_consistent;     // beta in [0.45, 0.55] and corrected < power
};
LogLogReport loglog_fit(const ScaleSeries& series, double T);

struct RunReport {
    std::string name;
    std::string termination;
    std::string detail;
    double mass_drift = 0.0;    // max relative
    double energy_drift = 0.0;  // max relative (absolute when E0 ~ 0)
    double momentum_max = 0.0;
    double initial_energy = 0.0;
    double lambda_first = 0.0;
    double lambda_min = 0.0;
    std::optional<double> T_est;
    std::optional<LogLogReport> loglog;
    std::vector<double> fit_times;
    std::vector<double> fit_distances;
    std::uint64_t seed = 0;
    double wall_time_s = 0.0;

    std::string to_json() const;  // versioned schema
};

struct RunResult {
    RunReport report;
    TrajectoryRecord traj;
};

// Executes the spec: evolve with scheduled diagnostics, write
// <out_dir>/<name>.csv, snapshot files and <name>.report.json.
RunResult run_experiment(const ExperimentSpec& spec, bool write_outputs = true);

// One worker per spec, capped by NLSLAB_THREADS.
std::vector<RunReport> run_batch(const std::vector<std::string>& spec_paths);

void write_csv(const std::string& path, const std::vector<DiagRow>& rows, int dim);

}  // namespace nlslab
