#pragma once

// Independent reference computations used by the test suite. Nothing here
// calls into the library's spectral machinery; values are produced by
// closed forms or ODE integration so they can stand as oracles.

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace oracles {

// ---- d=1 closed forms ------------------------------------------------------
// Q(x) = 3^{1/4} sech^{1/2}(2x) solves Q'' - Q + Q^5 = 0.
inline double q1d(double x) {
    return std::pow(3.0, 0.25) * std::sqrt(1.0 / std::cosh(2.0 * x));
}
// ||Q||_2^2 = sqrt(3) pi / 2,  ||Q'||_2^2 = sqrt(3) pi / 4,
// ||x Q||_2^2 = sqrt(3) pi^3 / 32.
inline constexpr double kQ1dMass = 2.7206990463513268;       // sqrt(3)*pi/2
inline constexpr double kQ1dGradSq = 1.3603495231756634;     // sqrt(3)*pi/4
inline constexpr double kQ1dXQSq = 1.6782652858079310;       // sqrt(3)*pi^3/32
inline constexpr double kQ1dPeak = 1.3160740129524924;       // 3^{1/4}

// ---- d=2 Townes profile by shooting ---------------------------------------
// Radial ODE Q'' + Q'/r - Q + Q^3 = 0, Q'(0) = 0. Shoot on b = Q(0):
// too-large b makes Q cross zero, too-small b makes Q diverge to +inf after
// dipping; bisect to the decaying separatrix.
struct Townes {
    double b;      // Q(0)
    double mass;   // 2 pi int_0^inf Q^2 r dr
};

inline void townes_rhs(double r, double q, double p, double& dq, double& dp) {
    dq = p;
    dp = q - q * q * q - (r > 0.0 ? p / r : 0.0);
}

// Integrate with RK4 from the series start Q(r) = b + (b - b^3) r^2/4.
// Returns +1 if Q crossed zero, -1 if it blew up positive, and accumulates
// the mass integral while Q stays on the separatrix-like segment.
inline int townes_shoot(double b, double rmax, double dr, double* mass_out) {
    double r = 1e-6;
    double q = b + 0.25 * (b - b * b * b) * r * r;
    double p = 0.5 * (b - b * b * b) * r;
    double mass = 0.0;
    while (r < rmax) {
        double k1q, k1p, k2q, k2p, k3q, k3p, k4q, k4p;
        townes_rhs(r, q, p, k1q, k1p);
        townes_rhs(r + 0.5 * dr, q + 0.5 * dr * k1q, p + 0.5 * dr * k1p, k2q, k2p);
        townes_rhs(r + 0.5 * dr, q + 0.5 * dr * k2q, p + 0.5 * dr * k2p, k3q, k3p);
        townes_rhs(r + dr, q + dr * k3q, p + dr * k3p, k4q, k4p);
        double qn = q + dr / 6.0 * (k1q + 2.0 * k2q + 2.0 * k3q + k4q);
        double pn = p + dr / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p);
        mass += 2.0 * std::numbers::pi * dr * 0.5 * (q * q * r + qn * qn * (r + dr));
        q = qn;
        p = pn;
        r += dr;
        if (q < 0.0) { if (mass_out) *mass_out = mass; return +1; }
        if (q > 2.0 * b) { if (mass_out) *mass_out = mass; return -1; }
    }
    if (mass_out) *mass_out = mass;
    return 0;
}

inline Townes townes_profile() {
    double lo = 2.0, hi = 2.5;  // brackets the separatrix value b ~ 2.206
    for (int it = 0; it < 80; ++it) {
        double mid = 0.5 * (lo + hi);
        int s = townes_shoot(mid, 20.0, 1e-4, nullptr);
        if (s >= 1) hi = mid; else lo = mid;
    }
    double b = 0.5 * (lo + hi);
    double mass = 0.0;
    townes_shoot(b, 12.0, 1e-4, &mass);  // Q ~ e^{-r}; tail beyond r=12 is ~1e-10
    return {b, mass};
}

// ---- Gaussian free evolution ----------------------------------------------
// For u0 = exp(-a x^2), the free solution (i u_t + u_xx = 0) is
// u(t,x) = (1 + 4 i a t)^{-1/2} exp(-a x^2 / (1 + 4 i a t)) per axis.
inline std::complex<double> free_gaussian_1d(double a, double t, double x) {
    std::complex<double> den(1.0, 4.0 * a * t);
    return std::exp(-a * x * x / den) / std::sqrt(den);
}

// ---- simple least squares --------------------------------------------------
inline void linfit(const std::vector<double>& x, const std::vector<double>& y,
                   double& slope, double& intercept) {
    if (x.size() != y.size() || x.size() < 2)
        throw std::invalid_argument("linfit: need matched samples");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    double n = static_cast<double>(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i]; sy += y[i]; sxx += x[i] * x[i]; sxy += x[i] * y[i];
    }
    slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    intercept = (sy - slope * sx) / n;
}

}  // namespace oracles
