#pragma once

#include "nlslab/field.hpp"

namespace nlslab {

// The positive decaying solution of -Lap Q + Q = Q^{1+4/d}, peak pinned to
// the box center, together with its reference quantities.
struct GroundState {
    Field q;                 // real positive samples
    int d;
    double mass;             // ||Q||_2^2
    double grad_norm_sq;     // ||grad Q||_2^2
    double residual;         // sup-norm of -Lap Q + Q - Q^{1+4/d} on the grid
    double energy;           // E(Q), zero up to discretization
    double peak;             // Q at the box center
    int iterations = 0;
};

// d=1 closed form Q(x) = 3^{1/4} sech^{1/2}(2x), periodized over a few box
// images so the samples are smooth across the boundary.
GroundState closed_form_q_1d(const Grid& grid);

// Fixed-point spectral renormalization from a positive Gaussian seed;
// deterministic given grid, tol and seed width. Undamped; converged when
// successive iterates differ by < tol in L^2.
GroundState solve_ground_state(const Grid& grid, double tol = 1e-10,
                               double seed_width = 2.0, int max_iter = 10000);

// Diagnostics shared with the solver: residual and energy of a candidate
// real profile.
double ground_state_residual(const Field& q);
double ground_state_energy(const Field& q);

}  // namespace nlslab
