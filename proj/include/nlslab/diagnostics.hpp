#pragma once

#include <vector>

#include "nlslab/evolution.hpp"
#include "nlslab/field.hpp"

namespace nlslab {

struct ConservedSet {
    double mass;        // int |u|^2
    double energy;      // 1/2 int |grad u|^2 - 1/(2+4/d) int |u|^{2+4/d}
    double momentum_x;  // Im int du conj(u)
    double momentum_y;
};

ConservedSet conserved(const Field& u);
inline double energy(const Field& u) { return conserved(u).energy; }

// T00 = |u|^2, T0j = 2 Im(u_j conj u),
// Tjk = 4 Re(conj(u_j) u_k) - delta_jk Lap|u|^2 - 2 (p-1)/(p+1) |u|^{p+1},
// with p = 1 + 4/d.
struct EnergyTensor {
    Field t00;
    std::vector<Field> t0j;        // d entries
    std::vector<std::vector<Field>> tjk;  // d x d, symmetric
};
EnergyTensor energy_tensor(const Field& u);

// int |x - x_center|^2 |u|^2 about the box center.
double variance(const Field& u);

// Compares the centered second time-difference of the recorded variance
// against 16 E(u0) over rows sampled on a uniform time grid.
struct VirialReport {
    double max_relative_defect;
    double energy;
};
VirialReport virial_check(const std::vector<DiagRow>& rows);

// Smooth cutoffs of the Morawetz machinery.
// chi_bump: == 1 for r <= 9R/10, == 0 for r >= R, C-infinity between.
double chi_bump_value(double r, double R);
Field chi_bump_field(const Grid& grid, double R);
// Virial weight psi(|x|/R) x_j: identity near 0, ~ R x_j/|x| far out, with
// |x| psi(|x|/R) nondecreasing so the radial eigenvalue of the weight
// Jacobian stays nonnegative (checked numerically in the tests).
double virial_psi_value(double s);  // psi as a function of |x|/R
std::vector<Field> virial_weight(const Grid& grid, double R);

struct TruncationParams {
    double R = 10.0;  // spatial radius
    double K = 10.0;  // frequency cutoff level
    double C = 8.0;   // multiplier constant in P_{<= C K}
};

enum class ProjectSide { low, high };

// Littlewood-Paley projection: smooth multiplier psi(xi/N), identically 1
// for |xi| <= N and 0 for |xi| >= 2N; high = 1 - low pointwise.
Field lp_project(const Field& u, double N, ProjectSide side);

// Sharp Gagliardo-Nirenberg defect
// E(u) - 1/2 ||grad u||^2 (1 - (||u||_2/||Q||_2)^{4/d}); qmass = ||Q||_2^2.
double sharp_gn_defect(const Field& u, double qmass);
// The alternative printed exponent structure
// E(u) - 1/2 ||grad u||^2 [1 - (1 - ||u||^2/||Q||^2)^{4/d}], evaluated side
// by side with the standard form by the test suite.
double sharp_gn_defect_alt(const Field& u, double qmass);

// Morawetz action int psi(x/R) x_j Im((Iu)_j conj(Iu)) with I = P_{<= C K}.
double morawetz_action(const Field& u, const TruncationParams& trunc);

// E(chi(x/R) P_{<= C K} u).
double truncated_energy(const Field& u, const TruncationParams& trunc);
// Gradient norm squared of the masked, truncated field (denominator of the
// smallness ratio).
double truncated_grad_norm_sq(const Field& u, const TruncationParams& trunc);

// || I F(u) - F(I u) ||_2 with F(v) = -|v|^{4/d} v.
double commutator_error(const Field& u, const TruncationParams& trunc);

// L^{2(d+2)/d}_{t,x} norm by trapezoid quadrature over snapshots recorded on
// a uniform time grid.
double strichartz_norm(const std::vector<StoredSnapshot>& snaps);

}  // namespace nlslab
