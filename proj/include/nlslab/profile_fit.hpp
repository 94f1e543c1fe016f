#pragma once

#include <vector>

#include "nlslab/evolution.hpp"
#include "nlslab/ground_state.hpp"
#include "nlslab/symmetry.hpp"

namespace nlslab {

// Best-fit modulation parameters matching u against the ground state:
// distance = || lambda^{d/2} u(lambda x + x0) e^{-i gamma} - Q ||_2.
struct BubbleFit {
    double lambda = 1.0;
    double gamma = 0.0;
    Vec2 x0{0.0, 0.0};
    double distance = 0.0;
    Field residual;          // epsilon in the rescaled frame
    bool converged = true;
    // Mass removed when this bubble is subtracted during extraction;
    // zero for a plain fit.
    double extracted_mass = 0.0;
};

// Coordinate descent (Brent line searches) over (lambda, x0) with the
// optimal phase in closed form; lambda initialized to the gradient-norm
// ratio, x0 to the |u|^2 centroid (pinned to the origin when pin_center).
BubbleFit fit_bubble(const Field& u, const GroundState& qref, bool pin_center = false);

// Deterministic test-function dictionary (Q, Gaussians, Hermite-type bumps).
std::vector<Field> make_dictionary(const Grid& grid, const GroundState& qref);

struct WitnessReport {
    // pairings[phi][n] = <rescaled u_n, phi>
    std::vector<std::vector<cplx>> pairings;
    std::vector<double> terminal_deviation;  // |pairings[phi].back() - <Q,phi>|
    double max_terminal_deviation = 0.0;
};

// Finite-dictionary surrogate for weak convergence: pair each rescaled
// iterate against the dictionary and compare with <Q, phi>.
WitnessReport weak_limit_witness(const std::vector<Field>& u_seq,
                                 const std::vector<BubbleFit>& fits,
                                 const std::vector<Field>& dict,
                                 const GroundState& qref);

// Quadrature of |u|^2 over the discrete ball; monotone in radius.
double mass_in_ball(const Field& u, const Vec2& center, double radius);

struct ConcentrationRow {
    double t;
    Vec2 center;   // |u|^2 argmax cell
    double radius; // (T_est - t)^(exponent - eps)
    double mass;
};
struct ConcentrationTable {
    std::vector<ConcentrationRow> rows;
    bool flag;  // mass >= (1 - tol) qmass throughout the final decade of focusing
};

ConcentrationTable concentration_scan(const std::vector<StoredSnapshot>& snaps,
                                      bool blowup, double T_est, double exponent,
                                      double eps, double qmass, double tol = 0.01);

// Sum of group-transformed copies of Q carrying the given masses, plus a
// smooth seeded noise field of the given mass.
struct BubbleSpec {
    double mass;
    GroupElement g;
};
Field synthesize_bubbles(const Grid& grid, const std::vector<BubbleSpec>& specs,
                         double noise_mass, const GroundState& qref,
                         std::uint64_t seed = 1);

// Greedy peeling: fit, subtract the fitted bubble's projection, repeat until
// max_j bubbles or the fit distance exceeds 0.5 ||Q||_2.
std::vector<BubbleFit> extract_bubbles(const Field& u, const GroundState& qref,
                                       int max_j);

}  // namespace nlslab
