#pragma once

#include <string>
#include <vector>

#include "nlslab/field.hpp"

namespace nlslab {

// Exact discrete free propagator e^{i t Lap}: spectrum multiplied by
// e^{-i t |xi|^2}. Unitary for any t.
Field free_propagator(const Field& u, double t);

// One Strang split step: free half step, exact nonlinear phase rotation
// u <- u exp(i dt |u|^{4/d}), free half step. Second-order accurate.
// Negative dt runs the step backwards.
Field step(const Field& u, double dt, bool use_dealias = false);

struct SolverConfig {
    double dt0 = 1e-3;       // initial/maximum step
    double dt_min = 1e-12;   // underflow floor
    double adapt_c = 0.1;    // dt = adapt_c / ||grad u||_2^2, capped by dt0
    bool dealias = false;    // 2/3-rule truncation after the nonlinear substep
    double grad_max = 1e6;   // blow-up threshold on ||grad u||_2
    double t_start = 0.0;
    double t_end = 1.0;
    // ||grad Q||_2 for the lambda = grad_ref/||grad u||_2 column; 0 disables.
    double grad_ref = 0.0;
};

struct DiagnosticsSchedule {
    double record_every = 0.0;  // 0: record every accepted step
    double snap_every = 0.0;    // 0: keep only initial and final snapshots
};

struct DiagRow {
    double t, dt, mass, energy, momentum_x, momentum_y;
    double grad_norm_sq, variance, lambda, linf;
};

enum class Termination { reached_t_end, blowup_detected, dt_underflow };

const char* to_string(Termination t);

struct StoredSnapshot {
    double t;
    Field field;
};

struct TrajectoryRecord {
    std::vector<DiagRow> rows;
    std::vector<StoredSnapshot> snapshots;
    Termination termination = Termination::reached_t_end;
    std::string detail;  // e.g. "grad_max" or "resolution_stop"
};

// Adaptive split-step evolution of i u_t + Lap u = -|u|^{4/d} u. Stops at
// t_end, on ||grad u||_2 > grad_max, when the focusing length
// ||u||_2/||grad u||_2 falls under 8 grid cells, or on dt underflow.
// Deterministic for fixed inputs.
TrajectoryRecord evolve(const Field& u0, const SolverConfig& cfg,
                        const DiagnosticsSchedule& sched = {});

}  // namespace nlslab
