#pragma once

#include <functional>
#include <limits>

#include "nlslab/fft.hpp"
#include "nlslab/field.hpp"

namespace nlslab {

// Quadrature approximation (h^d sum |f|^p)^(1/p); p = infinity gives max|f|.
double lp_norm(const Field& f, double p);
inline double l2_norm(const Field& f) { return lp_norm(f, 2.0); }

// h^d sum f * conj(g); conjugate linear in the second slot, matching the
// complex L^2 pairing <f,g> = int f conj(g).
cplx inner_product(const Field& f, const Field& g);

// sqrt(h^d sum |c|^2); equals l2_norm of the inverse transform exactly.
double spectral_l2(const SpectralField& F);

// int |grad f|^2 by the |xi|^2 multiplier.
double gradient_norm_sq(const Field& f);
double gradient_norm_sq(const SpectralField& F);

// Spectral Laplacian (multiplier -|xi|^2).
Field laplacian(const Field& f);

// Spectral partial derivative along axis (0 or 1).
Field derivative(const Field& f, int axis);

// In-place diagonal multiplier m(xi) on the spectrum; fn receives the
// frequency vector (xi1, xi2) with xi2 = 0 in d=1.
void apply_multiplier(SpectralField& F, const std::function<cplx(double, double)>& fn);
void apply_real_multiplier(SpectralField& F, const std::function<double(double, double)>& fn);

// Exact translation f(x - s) by frequency modulation.
Field spectral_shift(const Field& f, double sx, double sy = 0.0);

// Evaluate the trigonometric interpolant of f at the affinely mapped points
// a*x_j + b (per axis), i.e. return samples of x -> f(a*x + b). a may be
// negative. Points mapped outside the fundamental domain yield zero (the
// field is treated as decaying, not periodic, under dilation); only |a| = 1
// keeps the periodic wrap, matching translation on the torus.
Field affine_resample(const Field& f, double a, double bx, double by = 0.0);

// Fraction of spectral mass carried by modes with |k| >= N/3 on any axis
// (the band a 2/3-rule truncation would discard).
double spectral_tail_fraction(const SpectralField& F);
double spectral_tail_fraction(const Field& f);

// Fraction of |f|^2 mass within 5% of the box boundary.
double boundary_mass_fraction(const Field& f);

// Zero all modes with |k| >= N/3 on some axis (2/3-rule dealiasing).
void dealias(SpectralField& F);

// true if every sample is finite.
bool all_finite(const Field& f);

}  // namespace nlslab
